"""Skew representations of C_7 on R^16 and the lifted Clifford system on R^32."""

from dataclasses import dataclass

import numpy as np

from .octonions import mult_matrix

# Minimal dimension of an irreducible C_k module, k = 0..9.
_MIN_MODULE_DIM = (1, 2, 4, 4, 8, 8, 8, 8, 16, 32)


def min_module_dim(k):
    if not 0 <= k <= 9:
        raise ValueError("k must lie in 0..9")
    return _MIN_MODULE_DIM[k]


@dataclass(frozen=True)
class SkewRep:
    side: str
    mats: tuple  # rho_1..rho_k

    @property
    def k(self):
        return len(self.mats)

    @property
    def dim(self):
        return self.mats[0].shape[0]


@dataclass(frozen=True)
class CliffordSystem:
    mats: tuple  # P_0..P_m
    side: str = "left"

    @property
    def m(self):
        return len(self.mats) - 1

    @property
    def half_dim(self):
        return self.mats[0].shape[0] // 2

    def combination(self, coeffs):
        return sum(c * p for c, p in zip(coeffs, self.mats))


def skew_rep_residual(mats):
    """Largest entry of rho_i rho_j + rho_j rho_i + 2 delta_ij I, or of rho_i + rho_i^T."""
    n = mats[0].shape[0]
    worst = 0
    for i, a in enumerate(mats):
        worst = max(worst, np.abs(a + a.T).max())
        for j, b in enumerate(mats):
            worst = max(worst, np.abs(a @ b + b @ a + 2 * (i == j) * np.eye(n, dtype=int)).max())
    return worst


def clifford_residual(mats):
    """Largest entry of P_a P_b + P_b P_a - 2 delta_ab I, or of P_a - P_a^T."""
    n = mats[0].shape[0]
    worst = 0
    for a, p in enumerate(mats):
        worst = max(worst, np.abs(p - p.T).max())
        for b, q in enumerate(mats):
            worst = max(worst, np.abs(p @ q + q @ p - 2 * (a == b) * np.eye(n, dtype=int)).max())
    return worst


def build_skew_rep(side="left"):
    """rho_i on O + O acting by right multiplication (x, y) -> (x e_i, y e_i).

    ``side="left"`` is the realization used by the worked example
    (right multiplication by e_i); ``side="right"`` swaps to x -> e_i x.
    The two choices give the two inequivalent C_7 modules.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    mult_side = "right" if side == "left" else "left"
    mats = []
    for i in range(1, 8):
        r = mult_matrix(i, mult_side)
        block = np.zeros((16, 16), dtype=int)
        block[:8, :8] = r
        block[8:, 8:] = r
        mats.append(block)
    return SkewRep(side=side, mats=tuple(mats))


def lift_symmetric_system(rep):
    """P_0 (c,d) = (c,-d), P_1 (c,d) = (d,c), P_{1+i} (c,d) = (rho_i d, -rho_i c)."""
    if skew_rep_residual(rep.mats) != 0:
        raise ValueError("input is not a skew Clifford representation")
    n = rep.dim
    ident = np.eye(n, dtype=int)
    zero = np.zeros((n, n), dtype=int)
    mats = [np.block([[ident, zero], [zero, -ident]]),
            np.block([[zero, ident], [ident, zero]])]
    for r in rep.mats:
        mats.append(np.block([[zero, r], [-r, zero]]))
    for p in mats:
        p.setflags(write=False)
    return CliffordSystem(mats=tuple(mats), side=rep.side)


def fkm_system(side="left"):
    return lift_symmetric_system(build_skew_rep(side))
