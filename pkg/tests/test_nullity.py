import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fkmverify.nullity import (NotASecondForm, QuadricPoint, condition_A_blocks,
                               detect_condition_A, is_r_null_block, is_r_null_definition,
                               normalization_residual, normalize_pair, pair_tensor,
                               quadric_frame, r_lambda, random_quadric_point, rotate_tensor,
                               singular_locus_dim, synthetic_pair_tensor,
                               synthetic_spectral_data)
from fkmverify.forms import ot_identity_residuals
from fkmverify.suites import random_pair

from conftest import mplus_data


def _random_orthogonal(n, rng):
    return np.linalg.qr(rng.standard_normal((n, n)))[0]


@given(st.integers(0, 5), st.booleans(), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_block_test_equals_definition_test(r, null, seed):
    rng = np.random.default_rng(seed)
    spec, t = synthetic_pair_tensor(r, rng, null=null)
    assert is_r_null_block(t, 2, r) == null
    assert is_r_null_definition(t, 2, spec, samples=16, rng=rng) == null


def test_fkm_pairs_are_four_null(poly):
    _, t = mplus_data(poly, 0)
    rng = np.random.default_rng(1)
    for _ in range(5):
        pt, _ = pair_tensor(t, *random_pair(t.k, rng))
        assert r_lambda(pt) == 4
        spec, nt = normalize_pair(pt)
        assert spec.r == 4 and normalization_residual(spec, nt) < 1e-10
        for l in range(2, 8):
            assert is_r_null_block(nt, l, 4, 1e-8)
            assert is_r_null_definition(nt, l, spec, samples=8, tol=1e-8, rng=rng)


def test_normalization_preserves_identities(poly):
    _, t = mplus_data(poly, 2)
    spec, nt = normalize_pair(t)
    assert max(ot_identity_residuals(nt)) < 1e-12


def test_normalize_is_idempotent_on_spectral_data():
    rng = np.random.default_rng(3)
    spec, t = synthetic_pair_tensor(4, rng)
    s1, t1 = normalize_pair(t)
    s2, _ = normalize_pair(t1)
    assert np.allclose(s1.sigma, s2.sigma) and np.allclose(s1.delta_params, s2.delta_params)
    assert np.allclose(np.sort(s1.sigma), np.sort(spec.sigma))


def test_normalize_recovers_data_after_rotation():
    rng = np.random.default_rng(4)
    spec, t = synthetic_pair_tensor(3, rng)
    rt = rotate_tensor(t, _random_orthogonal(8, rng), _random_orthogonal(8, rng),
                       _random_orthogonal(7, rng))
    s, nt = normalize_pair(rt)
    assert s.r == 3 and normalization_residual(s, nt) < 1e-10
    assert np.allclose(np.sort(s.sigma), np.sort(spec.sigma))


def test_zero_b1_gives_rank_zero():
    rng = np.random.default_rng(5)
    spec, t = synthetic_pair_tensor(0, rng)
    s, _ = normalize_pair(t)
    assert s.r == 0 and s.sigma.size == 0
    assert r_lambda(t) == 0


def test_incompatible_b_and_c_rejected():
    rng = np.random.default_rng(6)
    _, t = synthetic_pair_tensor(2, rng)
    t.C[1] = 3 * t.C[1]
    with pytest.raises(NotASecondForm):
        normalize_pair(t)


def test_block_test_negative_control_and_errors():
    rng = np.random.default_rng(7)
    _, t = synthetic_pair_tensor(4, rng)
    assert is_r_null_block(t, 2, 4)
    t.B[2][0, 0] = 0.1
    assert not is_r_null_block(t, 2, 4)
    with pytest.raises(ValueError):
        is_r_null_block(t, 1, 4)


def test_rank_zero_nullity_is_condition_a():
    rng = np.random.default_rng(8)
    spec, t = synthetic_pair_tensor(0, rng, null=True)
    t.B = [np.zeros_like(b) for b in t.B]
    t.C = [np.zeros_like(c) for c in t.C]
    assert is_r_null_block(t, 2, 0)
    assert detect_condition_A(t) and condition_A_blocks(t)


def test_fkm_points_are_not_condition_a(poly):
    _, t = mplus_data(poly, 9)
    assert not detect_condition_A(t) and not condition_A_blocks(t)


def test_condition_a_characterizations_agree():
    rng = np.random.default_rng(10)
    for i in range(30):
        _, t = synthetic_pair_tensor(int(rng.integers(0, 5)), rng, extra=2)
        if i % 2:
            t.B = [np.zeros_like(b) for b in t.B]
            t.C = [np.zeros_like(c) for c in t.C]
        assert detect_condition_A(t) == condition_A_blocks(t)


def test_quadric_frames():
    n0, n1 = quadric_frame(QuadricPoint(np.array([1, 1j, 0, 0])))
    assert np.allclose(n0, [1, 0, 0, 0]) and np.allclose(n1, [0, 1, 0, 0])
    rng = np.random.default_rng(11)
    q = random_quadric_point(7, rng)
    a = quadric_frame(q)
    b = quadric_frame(QuadricPoint(3.0 * q.c))
    assert np.allclose(a, b)
    g = np.array([[u @ v for v in a] for u in a])
    assert np.abs(g - np.eye(2)).max() < 1e-12
    with pytest.raises(ValueError):
        quadric_frame(QuadricPoint(np.array([1.0, 1.0, 0.0])))
    with pytest.raises(ValueError):
        quadric_frame(QuadricPoint(np.zeros(3)))


def test_singular_locus_dimension(poly):
    _, t = mplus_data(poly, 12)
    pt, _ = pair_tensor(t, *random_pair(t.k, np.random.default_rng(0)))
    assert singular_locus_dim(pt, 1j) == 11 and singular_locus_dim(pt, -1j) == 11
    rng = np.random.default_rng(13)
    spec = synthetic_spectral_data(2, rng, equal=True)
    _, st2 = synthetic_pair_tensor(2, rng, spec=spec)
    assert singular_locus_dim(st2, 1j) == 13
    _, st0 = synthetic_pair_tensor(0, rng)
    assert singular_locus_dim(st0, 1j) == 15
    assert singular_locus_dim(st0, 0.3) == 7


def test_fkm_spectral_data_structure(poly):
    """sigma = s I and f = sqrt(1 - 2 s^2) on both Delta blocks at generic pairs."""
    _, t = mplus_data(poly, 14)
    rng = np.random.default_rng(2)
    for _ in range(5):
        pt, _ = pair_tensor(t, *random_pair(t.k, rng))
        spec, _ = normalize_pair(pt)
        s = spec.sigma[0]
        assert np.ptp(spec.sigma) < 1e-10
        assert np.allclose(spec.delta_params, np.sqrt(1 - 2 * s * s), atol=1e-8)


@pytest.mark.xfail(strict=True, reason="generic FKM pairs have sigma = s I with s < 1/sqrt2 "
                   "and Delta != 0; the canonical data (I/sqrt2, 0) is not generic")
def test_generic_spectral_data_is_canonical(poly):
    _, t = mplus_data(poly, 15)
    pt, _ = pair_tensor(t, *random_pair(t.k, np.random.default_rng(3)))
    spec, _ = normalize_pair(pt)
    assert np.allclose(spec.sigma, 1 / np.sqrt(2), atol=1e-8)
    assert np.abs(spec.delta).max() < 1e-8
