import numpy as np
import pytest

from fkmverify.fkm import fkm_polynomial, mplus_frame, sample_mplus
from fkmverify.forms import block_decompose


@pytest.fixture(scope="session", params=["left", "right"])
def poly(request):
    return fkm_polynomial(request.param)


@pytest.fixture(scope="session")
def poly_left():
    return fkm_polynomial("left")


def mplus_data(poly, seed, with_mirror=False):
    rng = np.random.default_rng(seed)
    x, n0 = sample_mplus(poly, rng=rng)
    frame = mplus_frame(poly, x, n0)
    return frame, block_decompose(poly, frame, with_mirror=with_mirror)


@pytest.fixture(scope="session")
def mplus_tensors(poly):
    return [mplus_data(poly, seed, with_mirror=True) for seed in range(4)]


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(log):
        parts = log[n]
        ok = all(p[1] for p in parts)
        notes = "; ".join(f"{p[0]}: {p[2]}" for p in parts if p[2])
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {notes}")
