"""The worked FKM example: a distinguished M_- point and its seven 8x7 blocks.

The point x* = (zeta, eta) has zeta = (e0, e1)/2 and eta = (e3, e2)/2 in
O + O.  The often-quoted eta = (e3, e4)/2 is not on M_- and is kept only to
show that it fails membership.
"""

from dataclasses import dataclass

import numpy as np

from .fkm import eval_F, stiefel_residual
from .octonions import basis_vector, oct_mul
from .patterns import match_signed_permutation

# Octonion indices spanning the two tangent eigenspaces at x*.
PLUS_INDICES = (0, 1, 3, 4, 5, 6, 7)    # a != 2
MINUS_INDICES = (0, 2, 3, 4, 5, 6, 7)   # p != 1


def _pair(a, b):
    return np.concatenate([a, b])


def worked_point(corrected=True):
    e = basis_vector
    zeta = _pair(e(0), e(1)) / 2
    eta = _pair(e(3), e(2) if corrected else e(4)) / 2
    return _pair(zeta, eta)


def _template_block(blocks):
    out = np.zeros((8, 7))
    for (r, c), m in blocks.items():
        cols = slice(0, 1) if c == 0 else slice(1 + 2 * (c - 1), 3 + 2 * (c - 1))
        out[2 * r:2 * r + 2, cols] = m
    return out


def worked_templates():
    """The seven published 8x7 blocks B_1..B_7 (rows alpha, columns p)."""
    i2 = np.eye(2)
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    k = np.array([[0.0, 1.0], [1.0, 0.0]])
    ll = np.array([[1.0, 0.0], [0.0, -1.0]])
    t = _template_block
    return np.array([
        t({(2, 2): i2, (3, 3): i2}),
        t({(2, 2): j, (3, 3): -j}),
        np.zeros((8, 7)),
        t({(0, 2): ll, (3, 1): i2}),
        t({(0, 2): k, (3, 1): -j}),
        t({(0, 3): i2, (2, 1): -ll}),
        t({(0, 3): j, (2, 1): -k}),
    ])


def worked_frame(poly):
    """Orthonormal bases of E_+*, E_-* and the normal space at x*."""
    if poly.system.side != "left":
        raise ValueError("the worked example uses right octonion multiplication (side='left')")
    e = basis_vector
    z8 = np.zeros(8)
    r2 = np.sqrt(2.0)
    plus = np.column_stack([_pair(_pair(z8, z8), _pair(oct_mul(e(1), e(a)), e(a))) / r2
                            for a in PLUS_INDICES])
    minus = np.column_stack([_pair(_pair(oct_mul(e(3), oct_mul(e(2), e(p))), e(p)),
                                   _pair(z8, z8)) / r2 for p in MINUS_INDICES])
    x = worked_point()
    normals = np.column_stack([p @ x for p in poly.mats(x)[1:]])
    return x, plus, minus, normals


@dataclass
class WorkedExample:
    literal_on_mminus: bool
    literal_residual: float
    corrected_residual: float
    frame_defect: float
    blocks: np.ndarray        # B[a, alpha, p] = -A*_alpha[a, p] / sqrt(2)
    zero_block: int
    zero_block_norm: float
    scale: float
    fit_residual: float
    matched: bool


def reproduce_worked_example(poly, tol=1e-10):
    """Build the blocks at x*, check B_3 = 0 and match the published templates."""
    lit = worked_point(corrected=False)
    lit_res = max(float(stiefel_residual(poly, lit)), abs(float(eval_F(poly, lit)) + 1.0))
    x, plus, minus, normals = worked_frame(poly)
    cor_res = max(float(stiefel_residual(poly, x)), abs(float(eval_F(poly, x)) + 1.0))
    basis = np.column_stack([plus, minus, normals, x])
    frame_defect = float(np.abs(basis.T @ basis - np.eye(basis.shape[1])).max())
    mats = poly.mats(x)[1:]
    # A*_alpha[a, p] = -<P_alpha X_a, Y_p>; the blocks are -A*/sqrt(2).
    astar = -np.einsum("ia,kij,jp->kap", minus, np.array(mats), plus).transpose(0, 2, 1)
    blocks = (-astar / np.sqrt(2.0)).transpose(1, 0, 2)
    norms = np.abs(blocks).max(axis=(1, 2))
    zero = int(np.argmin(norms))
    m = match_signed_permutation(blocks, worked_templates(), tol=tol)
    return WorkedExample(
        literal_on_mminus=lit_res < tol, literal_residual=lit_res,
        corrected_residual=cor_res, frame_defect=frame_defect, blocks=blocks,
        zero_block=zero, zero_block_norm=float(norms[zero]), scale=m.scale,
        fit_residual=m.residual, matched=m.found)
