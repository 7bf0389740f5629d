"""The twelve acceptance criteria, at their stated sizes and tolerances.

Each test records its outcome; the terminal summary prints one PASS/FAIL
line per criterion, aggregated over both FKM families.
"""

from functools import lru_cache, reduce

import numpy as np
import pytest

from fkmverify.fkm import fkm_polynomial
from fkmverify.suites import SuiteOptions, run_suite

SIDES = ["left", "right"]


@lru_cache(maxsize=None)
def checks(suite, side="left", scalar="float64"):
    return {c.name: c for c in run_suite(suite, SuiteOptions(seed=0, scalar=scalar, side=side))}


def evaluate(cs, names):
    bad = [n for n in names if not cs[n].passed]
    worst = max(cs[n].residual for n in names)
    return not bad, bad, worst


def record(log, n, part, ok, note=""):
    log.setdefault(n, []).append((part, ok, note))
    print(f"criterion {n} [{part}]: {'PASS' if ok else 'FAIL'} {note}")


@pytest.mark.parametrize("side", SIDES)
def test_criterion_01_clifford_relations(side, acceptance_log):
    mats = fkm_polynomial(side).system.mats
    assert all(m.dtype.kind == "i" for m in mats)
    worst = max(int(np.abs(a @ b + b @ a - 2 * (i == j) * np.eye(32, dtype=int)).max())
                for i, a in enumerate(mats) for j, b in enumerate(mats))
    ok, bad, _ = evaluate(checks("clifford", side), [f"clifford.relations.{side}"])
    record(acceptance_log, 1, side, ok and worst == 0, f"integer residual {worst}")
    assert worst == 0 and ok, bad


@pytest.mark.parametrize("side", SIDES)
def test_criterion_02_cartan_munzner(side, acceptance_log):
    ex = checks("cartan-munzner", side, "exact")[f"cartan_munzner.{side}"]
    fl = checks("cartan-munzner", side)[f"cartan_munzner.{side}"]
    ok = ex.residual == 0 and ex.details["samples"] == 20 and fl.residual < 1e-9 \
        and fl.details["samples"] == 1000
    record(acceptance_log, 2, side, ok, f"exact {ex.residual:g}, float {fl.residual:.2e}")
    assert ok


@pytest.mark.parametrize("side", SIDES)
def test_criterion_03_cube_identity(side, acceptance_log):
    cs = checks("cartan-munzner", side)
    cube = cs[f"cube_identity.{side}"]
    ok = cube.residual < 1e-10 and cube.details["points"] == 50 and cube.details["normals"] == 50 \
        and cs[f"multiplicities.{side}"].passed
    record(acceptance_log, 3, side, ok, f"cube {cube.residual:.2e}")
    assert ok


@pytest.mark.parametrize("side", SIDES)
def test_criterion_04_block_identities(side, acceptance_log):
    fl, ex = checks("ot-identities", side), checks("ot-identities", side, "exact")
    names = [f"ot_identities.{i}.{side}" for i in range(1, 9)]
    worst_fl = max(fl[n].residual for n in names)
    worst_ex = max(ex[n].residual for n in names)
    control = fl[f"ot_identities.negative_control.{side}"].passed \
        and ex[f"ot_identities.negative_control.{side}"].passed
    ok = worst_fl < 1e-12 and worst_ex == 0 and control \
        and all(ex[n].details["points"] == 20 for n in names)
    record(acceptance_log, 4, side, ok, f"float {worst_fl:.2e}, exact {worst_ex:g}")
    assert ok


def test_criterion_05_worked_example(acceptance_log):
    cs = checks("reproduce-sec22")
    ok, bad, _ = evaluate(cs, ["worked.literal_point_rejected", "worked.corrected_point",
                               "worked.B3_zero", "worked.templates"])
    worst = cs["worked.templates"].residual
    scale = cs["worked.templates"].details["scale"]
    record(acceptance_log, 5, "left", ok and worst < 1e-10,
           f"fit {worst:.1e}, scale {scale:.6f}, literal eta off M_- (corrected point used)")
    assert ok and worst < 1e-10, bad


@pytest.mark.parametrize("side", SIDES)
def test_criterion_06_nullity(side, acceptance_log):
    cs = checks("nullity", side)
    ok, bad, _ = evaluate(cs, ["nullity.test_equivalence.synthetic", f"nullity.test_equivalence.fkm.{side}",
                               f"nullity.r_lambda_generic.{side}"])
    syn = cs["nullity.test_equivalence.synthetic"].details["trials"]
    pairs = cs[f"nullity.r_lambda_generic.{side}"].details["pairs"]
    ok = ok and syn == 200 and pairs == 500
    record(acceptance_log, 6, f"{side} equivalence/r_lambda", ok,
           f"hist {cs[f'nullity.r_lambda_generic.{side}'].details['histogram']}")
    assert ok, bad


@pytest.mark.xfail(strict=True, reason="generic FKM pairs have sigma = s I with s varying per pair "
                   "and Delta_i = sqrt(1 - 2 s^2) != 0; (I/sqrt2, 0) is not observed")
@pytest.mark.parametrize("side", SIDES)
def test_criterion_06_spectral_data(side, acceptance_log):
    c = checks("nullity", side)[f"nullity.spectral_data_generic.{side}"]
    d = c.details
    record(acceptance_log, 6, f"{side} spectral", c.passed,
           f"{d['canonical_pairs']}/{d['pairs']} canonical, sigma in "
           f"[{d['smallest_sigma']:.3f}, {d['largest_sigma']:.3f}] vs 0.707")
    assert c.passed


@pytest.mark.parametrize("side", SIDES)
def test_criterion_07_kernels(side, acceptance_log):
    cs = checks("kernels", side)
    hb, hc = cs[f"kernels.B.{side}"].details["hits"], cs[f"kernels.C.{side}"].details["hits"]
    ok = hb >= 19 and hc >= 19 and cs[f"kernels.B.{side}"].details["points"] == 20
    record(acceptance_log, 7, side, ok, f"B {hb}/20, C {hc}/20")
    assert ok


@pytest.mark.parametrize("side", SIDES)
def test_criterion_08_mirror(side, acceptance_log):
    cs = checks("mirror", side)
    ok, bad, _ = evaluate(cs, [f"mirror.sharp.{side}", f"mirror.star.{side}"])
    inv = cs[f"mirror.involution.{side}"].residual
    ok = ok and inv == 0 and max(cs[f"mirror.{k}.{side}"].residual for k in ("sharp", "star")) < 1e-10
    record(acceptance_log, 8, side, ok, f"involution defect {inv:g}")
    assert ok, bad


@pytest.mark.parametrize("side", SIDES)
def test_criterion_09_patterns(side, acceptance_log):
    cs = checks("pencil", side)
    names = [f"pencil.frames.{side}", f"pattern.mtx.{side}", f"pattern.good.{side}",
             f"pattern.eqqq.{side}", f"pattern.third_columns.{side}", f"pencil.d_rows.{side}"]
    ok, bad, _ = evaluate(cs, names)
    third = cs[f"pattern.third_columns.{side}"].residual
    record(acceptance_log, 9, side, ok and third < 1e-12, f"third columns {third:.1e}")
    assert ok and third < 1e-12, bad


@pytest.mark.parametrize("side", SIDES)
def test_criterion_10_third_form(side, acceptance_log):
    ot, pen = checks("ot-identities", side), checks("pencil", side)
    pq, nrm = ot[f"third_form.pq_orthogonal.{side}"], ot[f"third_form.norm_identity.{side}"]
    ok = pq.residual < 1e-9 and nrm.residual < 1e-9 and pq.details["draws"] == 100 \
        and pq.details["points"] == 20
    ok2, bad, _ = evaluate(pen, [f"mirror_V.q_vanishes.{side}", f"mirror_V.quaternion_form.{side}"])
    product = pen[f"mirror_V.quaternion_form.{side}"].details["product"]
    ok = ok and ok2 and pen[f"mirror_V.q_vanishes.{side}"].residual < 1e-10
    record(acceptance_log, 10, side, ok, f"pq {pq.residual:.1e}, norm {nrm.residual:.1e}, product {product}")
    assert ok, bad


@pytest.mark.parametrize("side", SIDES)
def test_criterion_11_appendix(side, acceptance_log):
    cs = checks("appendix", side)
    names = [f"appendix.pencil{i}.{k}" for i in (1, 2, 3) for k in ("generic_bound", "degenerate")]
    ok, bad, _ = evaluate(cs, names + [f"appendix.singular_locus.{side}"])
    ok = ok and cs["appendix.pencil1.generic_bound"].details["trials"] == 500
    dims = [cs[f"appendix.pencil{i}.generic_bound"].details["max_dim"] for i in (1, 2, 3)]
    record(acceptance_log, 11, side, ok, f"generic max dims {dims}")
    assert ok, bad


@pytest.mark.parametrize("side", SIDES)
def test_criterion_12_frame_symmetries(side, acceptance_log):
    c = checks("pencil", side)[f"frame_symmetries.{side}"]
    record(acceptance_log, 12, side, c.passed and c.residual < 1e-10, f"residual {c.residual:.1e}")
    assert c.passed and c.residual < 1e-10


def test_product_of_generators_is_central():
    for side, sign in (("left", 1), ("right", -1)):
        mats = fkm_polynomial(side).system.mats
        assert np.array_equal(reduce(lambda a, b: a @ b, mats), sign * np.eye(32, dtype=int))
