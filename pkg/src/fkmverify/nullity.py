"""Normalization of a normal pair (n_0, n_1), spectral data, r-nullity tests,
Condition A, quadric frames and the singular-locus dimension."""

from dataclasses import dataclass, field
import warnings

import numpy as np
import scipy.linalg

from .forms import SecondFormTensor
from .linalg import DEFAULT_TOL, kernel_basis


class NotASecondForm(ValueError):
    pass


@dataclass
class SpectralData:
    r: int
    sigma: np.ndarray                 # descending singular values of B_1
    delta_params: np.ndarray          # f_i of the 2x2 blocks [[0, f], [-f, 0]] of Delta
    delta: np.ndarray                 # the r x r block of A_1
    bases: dict = field(default_factory=dict)   # orthogonal basis changes per space
    marginal: bool = False


def rotate_tensor(t, qp, qm, qz, normals=None):
    """Express a tensor in new orthonormal bases given by columns of qp, qm, qz
    (and optionally a new orthonormal normal basis, rows = new normals)."""
    A = [qp.T @ a @ qm for a in t.A]
    B = [qp.T @ b @ qz for b in t.B]
    C = [qm.T @ c @ qz for c in t.C]
    mirror = None if t.mirror is None else [sum(qz[p, q] * t.mirror[p] for p in range(qz.shape[0]))
                                            for q in range(qz.shape[1])]
    if mirror is not None:
        mirror = [qp.T @ m @ qm for m in mirror]
    if normals is not None:
        A = [A[0]] + [sum(normals[i, j] * A[j + 1] for j in range(len(A) - 1)) for i in range(normals.shape[0])]
        B = [B[0]] + [sum(normals[i, j] * B[j + 1] for j in range(len(B) - 1)) for i in range(normals.shape[0])]
        C = [C[0]] + [sum(normals[i, j] * C[j + 1] for j in range(len(C) - 1)) for i in range(normals.shape[0])]
    return SecondFormTensor(A, B, C, t.eye_plus, t.eye_minus, t.eye_zero, mirror=mirror,
                            level=t.level)


def _skew_canonical(delta, tol):
    """Orthogonal R with R^T delta R = blockdiag([[0, f_i], [-f_i, 0]], 0),
    f_i > 0 ascending, zero part first."""
    n = delta.shape[0]
    if n == 0 or np.abs(delta).max() <= tol:
        return np.eye(n), np.zeros(0)
    skew = (delta - delta.T) / 2
    tform, z = scipy.linalg.schur(skew, output="real")
    blocks, zeros_ = [], []
    i = 0
    while i < n:
        if i + 1 < n and abs(tform[i + 1, i]) > tol:
            f = tform[i, i + 1]
            u, v = z[:, i], z[:, i + 1]
            if f < 0:
                u, v, f = v, u, -f
            blocks.append((f, u, v))
            i += 2
        else:
            zeros_.append(z[:, i])
            i += 1
    blocks.sort(key=lambda b: b[0])
    cols = zeros_ + [c for _, u, v in blocks for c in (u, v)]
    return np.column_stack(cols), np.array([b[0] for b in blocks])


def normalize_pair(t, tol=DEFAULT_TOL):
    """Bring (S_0, S_1) to B_1 = C_1 = diag(0, sigma), A_1 = diag(I, Delta)."""
    B1, C1, A1 = t.B[1], t.C[1], t.A[1]
    if np.abs(B1.T @ B1 - C1.T @ C1).max() > 1e-6 * max(1.0, np.abs(B1).max() ** 2):
        raise NotASecondForm("not a valid second form: B_1^T B_1 != C_1^T C_1")
    u, s, vt = np.linalg.svd(B1)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * max(smax, 1.0)))
    marginal = bool(np.any((s > tol * 1e-3) & (s <= tol * 1e3)))
    if marginal:
        warnings.warn("marginal rank decision in normalize_pair")
    npl, nmi = A1.shape
    v = vt.T
    ker_p, im_p = u[:, r:], u[:, :r]
    ker_z, im_z = v[:, r:], v[:, :r]
    sig = s[:r]
    im_m = C1 @ im_z / sig if r else np.zeros((nmi, 0))
    ker_m_guess = A1.T @ ker_p
    comp = kernel_basis(im_m.T) if r else np.eye(nmi)
    # align the kernel part of E_- with A_1^T (kernel part of E_+)
    proj = comp.T @ ker_m_guess
    pu, _, pvt = np.linalg.svd(proj, full_matrices=False)
    ker_m = comp @ (pu @ pvt)
    # canonical form of the skew block Delta within clusters of equal sigma
    delta = im_p.T @ A1 @ im_m
    rot = np.eye(r)
    params = []
    start = 0
    while start < r:
        end = start
        while end + 1 < r and abs(sig[end + 1] - sig[start]) <= 1e-8 * max(1.0, sig[start]):
            end += 1
        sl = slice(start, end + 1)
        rr, f = _skew_canonical(delta[sl, sl], 1e-8)
        rot[sl, sl] = rr
        params += list(f)
        start = end + 1
    im_p, im_m, im_z = im_p @ rot, im_m @ rot, im_z @ rot
    qp = np.hstack([ker_p, im_p])
    qm = np.hstack([ker_m, im_m])
    qz = np.hstack([ker_z, im_z])
    out = rotate_tensor(t, qp, qm, qz)
    spec = SpectralData(r=r, sigma=sig, delta_params=np.array(params),
                        delta=out.A[1][npl - r:, nmi - r:], bases={"plus": qp, "minus": qm, "zero": qz},
                        marginal=marginal)
    return spec, out


def normalization_residual(spec, t):
    """max deviation of B_1, C_1, A_1 from the canonical form."""
    r = spec.r
    npl, nmi = t.A[1].shape
    npz = t.B[1].shape[1]
    target_b = np.zeros((npl, npz))
    target_b[npl - r:, npz - r:] = np.diag(spec.sigma)
    target_a = np.zeros((npl, nmi))
    target_a[:npl - r, :nmi - r] = np.eye(npl - r, nmi - r)
    target_a[npl - r:, nmi - r:] = spec.delta
    return max(np.abs(t.B[1] - target_b).max(), np.abs(t.C[1] - target_b).max(),
               np.abs(t.A[1] - target_a).max())


def r_lambda(t, tol=DEFAULT_TOL):
    """m_+ minus dim(ker S_0 cap ker S_1), from the reassembled shape operators."""
    stack = np.vstack([t.shape(0), t.shape(1)])
    return t.B[0].shape[1] - kernel_basis(stack, tol).shape[1]


def is_r_null_block(t, l, r, tol=1e-9):
    if l < 2:
        raise ValueError("r-nullity is defined for l >= 2")
    npl = t.B[l].shape[0]
    npz = t.B[l].shape[1]
    ul_b = t.B[l][:npl - r, :npz - r]
    ul_c = t.C[l][:npl - r, :npz - r]
    return bool(max(np.abs(ul_b).max(initial=0.0), np.abs(ul_c).max(initial=0.0)) <= tol)


def constrained_point(spec_sigma, spec_delta, dims, iota, rng):
    """Random complex (x, y, z) satisfying the constraints y_1 = iota x_1,
    y_2 = -x_2, z_2 = sigma^{-1}(Delta + iota I) x_2."""
    npl, nmi, npz = dims
    r = len(spec_sigma)
    cn = lambda n: rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x1, x2, z1 = cn(npl - r), cn(r), cn(npz - r)
    y1 = iota * x1
    y2 = -x2
    z2 = np.diag(1 / np.asarray(spec_sigma)) @ (spec_delta + iota * np.eye(r)) @ x2 if r else np.zeros(0)
    return np.concatenate([x1, x2]), np.concatenate([y1, y2]), np.concatenate([z1, z2])


def p_value(t, l, x, y, z):
    """p_l / 2 = x^T A_l y + x^T B_l z + y^T C_l z (complex bilinear)."""
    return x @ t.A[l] @ y + x @ t.B[l] @ z + y @ t.C[l] @ z


def is_r_null_definition(t, l, spec, samples=64, tol=1e-9, rng=None):
    """p_l vanishes on the constraint set for both iota = +i and -i."""
    if l < 2:
        raise ValueError("r-nullity is defined for l >= 2")
    rng = np.random.default_rng(0) if rng is None else rng
    npl, nmi = t.A[l].shape
    dims = (npl, nmi, t.B[l].shape[1])
    delta = spec.delta if spec.r else np.zeros((0, 0))
    scale = max(1.0, np.abs(t.B[l]).max(), np.abs(t.A[l]).max())
    for iota in (1j, -1j):
        for _ in range(samples):
            x, y, z = constrained_point(spec.sigma, delta, dims, iota, rng)
            val = p_value(t, l, x, y, z)
            nrm = np.linalg.norm(np.concatenate([x, y, z])) ** 2
            if abs(val) > tol * scale * nrm:
                return False
    return True


def detect_condition_A(t, tol=DEFAULT_TOL):
    """All shape operators share one kernel (dim m_+) at this point."""
    npz = t.B[0].shape[1]
    k = kernel_basis(np.vstack([t.shape(a) for a in range(len(t.A))]), tol)
    return k.shape[1] == npz


def condition_A_blocks(t, tol=DEFAULT_TOL):
    return all(np.abs(t.B[a]).max() <= tol and np.abs(t.C[a]).max() <= tol
               for a in range(1, len(t.A)))


@dataclass
class QuadricPoint:
    c: np.ndarray

    def residual(self):
        return abs(np.sum(self.c ** 2)) / max(np.sum(np.abs(self.c) ** 2), 1e-300)


def quadric_frame(q, tol=1e-10):
    """Coefficient vectors of (n~_0, n~_1): Gram-Schmidt on Re and Im of c."""
    c = np.asarray(q.c, dtype=complex)
    if not np.any(c):
        raise ValueError("zero coefficient vector")
    if QuadricPoint(c).residual() > tol:
        raise ValueError("point is not on the hyperquadric")
    a, b = c.real, c.imag
    n0 = a / np.linalg.norm(a)
    b = b - (b @ n0) * n0
    return n0, b / np.linalg.norm(b)


def random_quadric_point(k, rng):
    """Random c in C^{k+1} with sum c_i^2 = 0: c = u + i v, u, v orthonormal."""
    m = np.linalg.qr(rng.standard_normal((k + 1, 2)))[0]
    scale = rng.standard_normal() + 1j * rng.standard_normal()
    return QuadricPoint(scale * (m[:, 0] + 1j * m[:, 1]))


def pair_tensor(t, n0c, n1c, rng=None):
    """Re-express t relative to a new normal frame whose first two elements are
    the unit normals with coefficients n0c and n1c (relative to n_0..n_k).

    The eigenspaces change with n_0, so this works from the reassembled
    shape operators.
    """
    k = len(t.A) - 1
    q = orthonormal_completion(np.column_stack([n0c, n1c]), k + 1)
    shapes = [sum(q[a, i] * t.shape(a) for a in range(k + 1)) for i in range(k + 1)]
    w, v = np.linalg.eigh(shapes[0])
    plus = v[:, w > 0.5]
    minus = v[:, w < -0.5]
    zero = v[:, np.abs(w) <= 0.5]
    basis = np.hstack([plus, minus, zero])
    from .forms import tensor_from_shapes
    return tensor_from_shapes([basis.T @ s @ basis for s in shapes],
                              (plus.shape[1], minus.shape[1], zero.shape[1]), level=t.level), q


def orthonormal_completion(cols, n):
    q, _ = np.linalg.qr(np.hstack([cols, np.eye(n)]))
    q = q[:, :n]
    for i in range(cols.shape[1]):
        if q[:, i] @ cols[:, i] < 0:
            q[:, i] = -q[:, i]
    return q


def singular_locus_dim(t, iota, tol=DEFAULT_TOL):
    """Complex kernel dimension of S_1 - iota S_0."""
    m = t.shape(1) - iota * t.shape(0)
    return kernel_basis(m.astype(complex), tol).shape[1]


def synthetic_spectral_data(r, rng, equal=False):
    """Random (sigma, Delta) with sigma commuting with Delta: sigma is
    constant on each 2x2 block [[0, f], [-f, 0]] of Delta, and an odd leftover
    coordinate carries Delta = 0."""
    sig = np.zeros(r)
    delta = np.zeros((r, r))
    s0 = rng.uniform(0.2, 0.7)
    params = []
    for i in range(0, r - 1, 2):
        s = s0 if equal else rng.uniform(0.2, 0.7)
        f = 0.0 if equal else rng.uniform(0.1, 0.9)
        sig[i:i + 2] = s
        delta[i, i + 1], delta[i + 1, i] = f, -f
        params.append(f)
    if r % 2:
        sig[-1] = s0 if equal else rng.uniform(0.2, 0.7)
    return SpectralData(r=r, sigma=sig, delta_params=np.array(params), delta=delta)


def synthetic_pair_tensor(r, rng, null=True, dims=(8, 8, 7), spec=None, extra=1):
    """Normalized tensor (S_0, S_1, S_2, ...) with random S_l, l >= 2, that obey
    the relations the block identities force on S_l given (sigma, Delta).

    With ``null`` the upper-left blocks of B_l and C_l vanish; otherwise they
    are random.  Returns (spec, tensor).
    """
    npl, nmi, npz = dims
    spec = synthetic_spectral_data(r, rng) if spec is None else spec
    sig, dl = np.diag(spec.sigma), spec.delta
    si = np.diag(1 / spec.sigma) if r else np.zeros((0, 0))
    a1 = np.zeros((npl, nmi))
    a1[:npl - r, :nmi - r] = np.eye(npl - r, nmi - r)
    a1[npl - r:, nmi - r:] = dl
    b1 = np.zeros((npl, npz))
    b1[npl - r:, npz - r:] = sig
    A, B, C = [np.zeros((npl, nmi)), a1], [np.zeros((npl, npz)), b1], [np.zeros((nmi, npz)), b1[:nmi].copy()]
    g = lambda *s: rng.standard_normal(s)
    for _ in range(extra):
        d, gg = g(npl - r, r), g(nmi - r, r)
        b = g(r, npz - r)
        c = g(r, r)
        kk = g(r, r)
        h = si @ (kk - kk.T)
        f = c - h
        beta = d @ si @ dl - gg @ si
        gamma = (-d @ si - gg @ si @ dl).T
        # delta + delta^T = h sigma^-1 Delta - sigma^-1 Delta h^T = m + m^T
        m = h @ si @ dl
        sk = g(r, r)
        delta = m + (sk - sk.T) / 2
        al = np.zeros((npl, nmi))
        # identity 1 for (l, 1) makes the upper-left block of A_l skew
        sq = g(npl - r, npl - r)
        al[:npl - r, :nmi - r] = ((sq - sq.T) / 2)[:, :nmi - r]
        al[:npl - r, nmi - r:] = beta
        al[npl - r:, :nmi - r] = gamma
        al[npl - r:, nmi - r:] = delta
        bl = np.zeros((npl, npz))
        bl[:npl - r, npz - r:] = d
        bl[npl - r:, :npz - r] = b
        bl[npl - r:, npz - r:] = c
        cl = np.zeros((nmi, npz))
        cl[:nmi - r, npz - r:] = gg
        cl[nmi - r:, :npz - r] = b
        cl[nmi - r:, npz - r:] = f
        if not null:
            bl[:npl - r, :npz - r] = g(npl - r, npz - r)
            cl[:nmi - r, :npz - r] = g(nmi - r, npz - r)
        A.append(al)
        B.append(bl)
        C.append(cl)
    return spec, SecondFormTensor(A, B, C, np.eye(npl), np.eye(nmi), np.eye(npz))
