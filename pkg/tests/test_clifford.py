from functools import reduce

import numpy as np
import pytest

from fkmverify.clifford import (build_skew_rep, clifford_residual, fkm_system,
                                lift_symmetric_system, min_module_dim, skew_rep_residual,
                                SkewRep)


@pytest.mark.parametrize("side", ["left", "right"])
def test_lifted_system_is_exact_clifford(side):
    sysm = fkm_system(side)
    assert sysm.m == 8 and sysm.half_dim == 16
    assert clifford_residual(sysm.mats) == 0
    assert all(p.dtype.kind == "i" for p in sysm.mats)


@pytest.mark.parametrize("side", ["left", "right"])
def test_skew_representation(side):
    assert skew_rep_residual(build_skew_rep(side).mats) == 0


def test_volume_elements_distinguish_the_families():
    signs = []
    for side in ("left", "right"):
        prod = reduce(lambda a, b: a @ b, fkm_system(side).mats)
        assert np.array_equal(np.abs(prod), np.eye(32, dtype=int))
        signs.append(int(prod[0, 0]))
        assert np.array_equal(prod, signs[-1] * np.eye(32, dtype=int))
    assert sorted(signs) == [-1, 1]


def test_module_dimension_table():
    assert [min_module_dim(k) for k in range(10)] == [1, 2, 4, 4, 8, 8, 8, 8, 16, 32]
    with pytest.raises(ValueError):
        min_module_dim(10)


def test_bad_side_and_bad_rep():
    with pytest.raises(ValueError):
        build_skew_rep("up")
    bad = SkewRep("left", (np.eye(2, dtype=int),))
    with pytest.raises(ValueError):
        lift_symmetric_system(bad)


def test_combination_squares_to_identity():
    sysm = fkm_system("left")
    c = np.random.default_rng(0).standard_normal(9)
    c /= np.linalg.norm(c)
    p = sysm.combination(c)
    assert np.allclose(p @ p, np.eye(32), atol=1e-12)
