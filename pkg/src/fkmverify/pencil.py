"""Linear pencils of matrix blocks and the codimension-two kernel samplers.

"Generic rank" is the maximum rank over random coefficient draws.  Rank is
lower semicontinuous, so the maximum is attained on a Zariski-open set and a
handful of Gaussian draws hits it with probability one.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, joint_kernel, rank

COMPLEX_TOL = 1e-9


@dataclass
class BlockPencil:
    generators: list

    def __post_init__(self):
        self.generators = [np.asarray(g, dtype=float) for g in self.generators]
        if not self.generators:
            raise ValueError("a pencil needs at least one generator")
        shape = self.generators[0].shape
        if any(g.shape != shape for g in self.generators):
            raise ValueError("pencil generators are not conformable")

    @property
    def shape(self):
        return self.generators[0].shape

    def __call__(self, x):
        return sum(xi * g for xi, g in zip(x, self.generators))


def generic_rank(p, trials=16, seed=0, tol=DEFAULT_TOL):
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        best = max(best, rank(p(rng.standard_normal(len(p.generators))), tol))
    return best


def common_column_relation(p, tol=DEFAULT_TOL):
    """A vector v != 0 with g v = 0 for every generator g, or None."""
    ker = joint_kernel(p.generators, tol)
    if ker.shape[1] == 0:
        return None
    v = ker[:, 0]
    return v / np.linalg.norm(v)


def common_row_relation(p, tol=DEFAULT_TOL):
    return common_column_relation(BlockPencil([g.T for g in p.generators]), tol)


def xyzw_span(x):
    """The two row vectors of linear forms that span the rows of d(x)."""
    x1, x2, x3, x4 = x
    return np.array([[-x3, -x4, x1, x2], [-x4, x3, -x2, x1]])


def d_pencil_row_residual(generators, points=20, seed=0):
    """Worst relative residual of fitting each row of d(x) = sum x_i d_i by
    constant combinations of the two xyzw forms, over random x."""
    gens = np.asarray(generators, dtype=float)
    if gens.shape[0] != 4 or gens.shape[2] != 4:
        raise ValueError("need four generators with four columns")
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((points, 4))
    scale = max(float(np.abs(gens).max()), 1e-300)
    worst = 0.0
    for r in range(gens.shape[1]):
        # stacked over x: rows(x) = (alpha, beta) @ span(x)
        lhs = np.concatenate([xyzw_span(x).T for x in xs])        # (4 points, 2)
        rhs = np.concatenate([np.einsum("i,ij->j", x, gens[:, r, :]) for x in xs])
        coef, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
        worst = max(worst, float(np.abs(lhs @ coef - rhs).max()) / scale)
    return worst


def d_pencil_row_structure(generators, tol=DEFAULT_TOL, points=20, seed=0):
    return d_pencil_row_residual(generators, points, seed) <= tol


# ---------------------------------------------------------------- codimension-two samplers

# (x block size, z block size, number of theta matrices, z coordinates carrying tau terms)
APPENDIX_LAYOUTS = {
    1: (8, 7, 3, ()),
    2: (7, 7, 2, (6,)),
    3: (6, 7, 2, (5, 6)),
}


@dataclass
class AppendixPencil:
    lemma: int
    R: list   # R_0..R_k, complex symmetric (real entries here)

    def combination(self, c):
        return sum(ci * r for ci, r in zip(c, self.R))


def _independent(thetas, zcols):
    keep = [p for p in range(thetas[0].shape[1]) if p not in zcols]
    stack = np.array([th[:, keep].ravel() for th in thetas])
    return rank(stack) == len(thetas)


def appendix_pencil(lemma, theta_seed=0, k=None, attempts=100):
    """R_0 = diag(I, 0) and R_l = [[0, theta_l], [theta_l^T, tau_l]] on C^(nx + nz).

    tau_l is symmetric and supported on the rows and columns of the z
    coordinates listed in the layout; theta_l is redrawn until the restricted
    bilinear forms are linearly independent."""
    if lemma not in APPENDIX_LAYOUTS:
        raise ValueError("lemma must be 1, 2 or 3")
    nx, nz, kmax, zcols = APPENDIX_LAYOUTS[lemma]
    k = kmax if k is None else k
    if not 1 <= k <= kmax:
        raise ValueError(f"k must lie in 1..{kmax}")
    rng = np.random.default_rng(theta_seed)
    for _ in range(attempts):
        thetas = [rng.standard_normal((nx, nz)) for _ in range(k)]
        if _independent(thetas, zcols):
            break
    else:
        raise RuntimeError("could not draw independent theta matrices")
    n = nx + nz
    r0 = np.zeros((n, n))
    r0[:nx, :nx] = np.eye(nx)
    rs = [r0]
    for th in thetas:
        tau = np.zeros((nz, nz))
        for zc in zcols:
            row = rng.standard_normal(nz)
            tau[zc, :] += row
            tau[:, zc] += row
        r = np.zeros((n, n))
        r[:nx, nx:] = th
        r[nx:, :nx] = th.T
        r[nx:, nx:] = tau
        rs.append(r)
    return AppendixPencil(lemma, rs)


def complex_kernel_dim(m, tol=COMPLEX_TOL):
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return m.shape[1]
    return int(m.shape[1] - np.count_nonzero(s > tol * s[0]))


def appendix_kernel_sampler(lemma, theta_seed=0, coeff_trials=500, k=None, coeff_seed=None):
    """(max, min) kernel dimension of S = R_0 + sum c_l R_l over complex c."""
    pencil = appendix_pencil(lemma, theta_seed, k)
    rng = np.random.default_rng(theta_seed + 1 if coeff_seed is None else coeff_seed)
    dims = []
    for _ in range(coeff_trials):
        c = rng.standard_normal(len(pencil.R) - 1) + 1j * rng.standard_normal(len(pencil.R) - 1)
        dims.append(complex_kernel_dim(pencil.combination(np.concatenate([[1.0], c]))))
    return max(dims), min(dims)


def appendix_degenerate_dim(lemma, theta_seed=0):
    """Kernel dimension on the non-generic locus c = (1, 0, ..., 0), where z is free."""
    pencil = appendix_pencil(lemma, theta_seed)
    c = np.zeros(len(pencil.R), dtype=complex)
    c[0] = 1
    return complex_kernel_dim(pencil.combination(c))
