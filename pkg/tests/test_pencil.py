import numpy as np
import pytest

from fkmverify.adapted import adapted_frame, b_blocks, d_blocks, eqqq_template, g_blocks
from fkmverify.fkm import sample_mplus
from fkmverify.pencil import (APPENDIX_LAYOUTS, BlockPencil, appendix_degenerate_dim,
                              appendix_kernel_sampler, appendix_pencil, common_column_relation,
                              common_row_relation, complex_kernel_dim, d_pencil_row_residual,
                              d_pencil_row_structure, generic_rank)


def test_generic_rank_examples():
    rng = np.random.default_rng(0)
    assert generic_rank(BlockPencil(list(eqqq_template(0.6, 0.0, 0.6, -1)))) == 2
    single = np.outer([1.0, 2, 3, 4], [1.0, 0, 1])
    assert generic_rank(BlockPencil([single])) == 1
    assert generic_rank(BlockPencil(list(rng.standard_normal((4, 4, 3))))) == 3
    with pytest.raises(ValueError):
        generic_rank(BlockPencil([single]), trials=0)


def test_generic_rank_monotone_in_trials():
    p = BlockPencil(list(np.random.default_rng(1).standard_normal((4, 4, 3))))
    ranks = [generic_rank(p, trials=t, seed=2) for t in (1, 2, 4, 8, 16)]
    assert ranks == sorted(ranks)


def test_common_column_relation():
    v = common_column_relation(BlockPencil(list(eqqq_template(0.6, 0.0, 0.6, -1))))
    assert np.allclose(np.abs(v), [0, 0, 1])
    assert common_column_relation(BlockPencil(list(np.random.default_rng(2).standard_normal((4, 4, 3))))) is None
    zero = common_column_relation(BlockPencil([np.zeros((4, 3))] * 2))
    assert zero is not None and abs(np.linalg.norm(zero) - 1) < 1e-12


def test_pencil_generators_must_conform():
    with pytest.raises(ValueError):
        BlockPencil([np.zeros((2, 2)), np.zeros((3, 2))])
    with pytest.raises(ValueError):
        BlockPencil([])


def test_fkm_pencils(poly):
    rng = np.random.default_rng(3)
    x, n0 = sample_mplus(poly, rng=rng)
    t = adapted_frame(poly, x, n0, rng=rng).tensor
    bp = BlockPencil(b_blocks(t))
    assert generic_rank(bp) == 2
    v = common_column_relation(bp)
    gens = np.array(bp.generators)
    assert np.abs(gens @ v).max() < 1e-9 * np.abs(gens).max()
    assert common_row_relation(bp) is None
    assert d_pencil_row_structure(d_blocks(t)) and d_pencil_row_structure(g_blocks(t))


def test_row_structure_controls():
    assert not d_pencil_row_structure(np.random.default_rng(4).standard_normal((4, 4, 4)))
    assert d_pencil_row_structure(np.zeros((4, 4, 4)))
    with pytest.raises(ValueError):
        d_pencil_row_residual(np.zeros((3, 4, 4)))


@pytest.mark.parametrize("lemma", [1, 2, 3])
def test_appendix_kernel_bounds(lemma):
    mx, mn = appendix_kernel_sampler(lemma, theta_seed=lemma, coeff_trials=200)
    assert mn <= mx <= 6
    assert appendix_degenerate_dim(lemma) == 7


def test_appendix_pencils_are_symmetric():
    for lemma, (nx, nz, k, _) in APPENDIX_LAYOUTS.items():
        p = appendix_pencil(lemma)
        assert len(p.R) == k + 1 and p.R[0].shape == (nx + nz, nx + nz)
        assert all(np.array_equal(r, r.T) for r in p.R)
    with pytest.raises(ValueError):
        appendix_pencil(4)
    with pytest.raises(ValueError):
        appendix_pencil(2, k=3)


def test_first_pencil_kernel_formula():
    """ker S = {(-Theta z, z) : Theta^T Theta z = 0}: dims agree on a rank-deficient Theta."""
    p = appendix_pencil(1, theta_seed=9, k=1)
    theta = p.R[1][:8, 8:]
    u, s, vt = np.linalg.svd(theta)
    s[2:] = 0
    low = u[:, :7] @ np.diag(s) @ vt
    r1 = p.R[1].copy()
    r1[:8, 8:], r1[8:, :8] = low, low.T
    sm = p.R[0] + r1
    assert complex_kernel_dim(sm) == complex_kernel_dim(low.T @ low) == 5
