import json
import subprocess
import sys

import numpy as np
import pytest
from gmpy2 import mpq

from fkmverify.cli import main
from fkmverify.report import (SCHEMA_VERSION, Check, VerificationReport, check, format_matrix,
                              jsonable, parse_matrix)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_report_layout():
    r = VerificationReport("x", 3, "float64", 1e-9, "left",
                           [check("b", "second", True, 1e-3), check("a", "first", False, 2.0, k=1)])
    d = r.to_dict()
    assert d["schema"] == SCHEMA_VERSION and d["status"] == "fail"
    assert [c["name"] for c in d["checks"]] == ["a", "b"]
    assert d["checks"][0]["details"] == {"k": 1}
    assert json.loads(r.to_json()) == jsonable(d)


def test_warn_counts_as_pass():
    c = check("w", "anchor", True, warn=True)
    assert c.status == "warn" and c.passed
    with pytest.raises(ValueError):
        Check("bad", "", "maybe")


def test_jsonable_converts_exact_and_numpy():
    out = jsonable({"q": mpq(1, 3), "a": np.array([1.5, 2.0]), "i": np.int64(4), "nan": float("nan")})
    assert out == {"q": "1/3", "a": [1.5, 2.0], "i": 4, "nan": "nan"}


@pytest.mark.parametrize("m", [np.array([[0.1, -2.5e-17], [3.0, 1 / 3]]),
                               np.array([[mpq(1, 3), mpq(-2)], [mpq(0), mpq(5, 7)]], dtype=object)])
def test_matrix_dump_round_trip(m):
    back = parse_matrix(format_matrix(m))
    assert back.shape == m.shape and all(a == b for a, b in zip(back.ravel(), m.ravel()))


def test_cli_output_is_byte_stable(capsys):
    argv = ["kernels", "--points", "3", "--seed", "7", "--quiet"]
    code1, a, _ = run(argv, capsys)
    code2, b, _ = run(argv, capsys)
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "wall_time"}
    assert code1 == code2 == 0 and strip(a) == strip(b)
    assert a.split('"wall_time"')[0] == b.split('"wall_time"')[0]


def test_cli_seed_changes_samples(capsys):
    _, a, _ = run(["mirror", "--points", "2", "--seed", "1", "--quiet"], capsys)
    _, b, _ = run(["mirror", "--points", "2", "--seed", "2", "--quiet"], capsys)
    res = lambda s: [c["residual"] for c in json.loads(s)["checks"]]
    assert json.loads(a)["seed"] == 1 and res(a) != res(b)


def test_cli_exit_code_reflects_failures(capsys):
    code, out, err = run(["nullity", "--points", "4", "--trials", "10"], capsys)
    assert code == 1 and json.loads(out)["status"] == "fail"
    assert "FAIL  nullity.spectral_data_generic.left" in err
    code, out, _ = run(["clifford", "--side", "right", "--quiet"], capsys)
    assert code == 0 and json.loads(out)["side"] == "right"


def test_cli_argument_errors(capsys):
    for argv in (["nosuch"], ["clifford", "--seed", "-1"], ["clifford", "--points", "0"],
                 ["clifford", "--json", "--pretty"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_cli_out_and_dump(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(["reproduce-sec22", "--out", str(out), "--dump", str(tmp_path / "m"),
                           "--pretty", "--quiet"], capsys)
    assert code == 0 and stdout == ""
    d = json.loads(out.read_text())
    assert d["command"] == "reproduce-sec22" and d["params"] == {}
    files = sorted(p.name for p in (tmp_path / "m").iterdir())
    assert files == [f"worked.templates.B_{i}.txt" for i in range(1, 8)]
    b3 = parse_matrix((tmp_path / "m" / "worked.templates.B_3.txt").read_text())
    assert b3.shape == (8, 7) and not b3.any()


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "fkmverify.cli", "clifford", "--quiet"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "pass"
