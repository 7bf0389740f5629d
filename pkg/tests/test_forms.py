from copy import deepcopy

import numpy as np
import pytest

from fkmverify.fkm import frame_from_normals, sample_mplus_exact
from fkmverify.forms import (block_decompose, cube_block_residual, expansion_consistency,
                             ot_identity_residuals, pq_identities, reassembly_residual,
                             third_form_components, verify_ot_identities)

from conftest import mplus_data


def test_blocks_reassemble_shape_operators(poly):
    frame, t = mplus_data(poly, 0)
    assert t.dims == (8, 8, 7)
    assert reassembly_residual(poly, frame, t) < 1e-12


def test_ot_identities_hold(mplus_tensors):
    for _, t in mplus_tensors:
        assert verify_ot_identities(t, tol=1e-12)["pass"]
        assert cube_block_residual(t) < 1e-12


def test_ot_identities_detect_perturbation(mplus_tensors):
    _, t = mplus_tensors[0]
    bad = deepcopy(t)
    bad.A[3] = bad.A[3] + 1e-4
    assert max(ot_identity_residuals(bad)) > 1e-6


@pytest.mark.slow
def test_ot_identities_exact(poly):
    x, normals = sample_mplus_exact(poly, seed=11)
    t = block_decompose(poly, frame_from_normals(poly, x, normals, 1))
    assert ot_identity_residuals(t) == [0.0] * 8
    assert cube_block_residual(t) == 0


def test_third_form_identities(poly):
    frame, t = mplus_data(poly, 12)
    third = third_form_components(poly, frame)
    assert third.symmetry_residual() < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(20):
        y = rng.standard_normal(23)
        a, b = pq_identities(t, third, y / np.linalg.norm(y))
        assert abs(a) < 1e-10 and abs(b) < 1e-9
    ep, eq = expansion_consistency(poly, frame, t, third, samples=3)
    assert max(ep, eq) < 1e-8
