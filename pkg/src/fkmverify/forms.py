"""Block form of shape operators, the Ozeki-Takeuchi identities, and the
second and third fundamental forms read off the expansion of the quartic.

Blocks follow S_a = [[0, A_a, B_a], [A_a^T, 0, C_a], [B_a^T, C_a^T, 0]]
relative to E_+, E_-, E_0 of S_{n_0}.  In float mode blocks are matrices in
orthonormal bases.  In exact mode orthonormal bases would leave Q, so blocks
are bilinear-form coordinates V_+^T S V_- in rational bases V with Gram
matrices G; a product over a space then carries G^{-1} in the middle and the
identity operator of a space has coordinates G.
"""

from dataclasses import dataclass, field
from gmpy2 import mpq

import numpy as np

from .fkm import eval_F, shape_operator_ambient
from .linalg import eye, inverse, is_exact, kernel_basis, max_abs


@dataclass
class SecondFormTensor:
    """Blocks A[a], B[a], C[a] for normals a = 0..k (index 0 is n_0).

    ``mirror`` optionally holds D[p] = (S^p_{alpha mu}), the second form at
    the mirror point x^# in the normal direction e_p, indexed by E_0.
    """

    A: list
    B: list
    C: list
    eye_plus: np.ndarray
    eye_minus: np.ndarray
    eye_zero: np.ndarray
    mirror: list = None
    level: int = 1
    frame: object = None
    gram_inv: dict = None   # exact mode: inverse Gram matrices per space

    @property
    def k(self):
        return len(self.A) - 1

    @property
    def dims(self):
        return (self.A[0].shape[0], self.A[0].shape[1], self.B[0].shape[1])

    def shape(self, a):
        """Reassembled S_a as a square matrix on E_+ + E_- + E_0 (float mode)."""
        A, B, C = self.A[a], self.B[a], self.C[a]
        zp = np.zeros((A.shape[0], A.shape[0]))
        zm = np.zeros((A.shape[1], A.shape[1]))
        zz = np.zeros((B.shape[1], B.shape[1]))
        if a == 0:
            return np.block([[np.eye(A.shape[0]), A, B], [A.T, -np.eye(A.shape[1]), C],
                             [B.T, C.T, zz]])
        return np.block([[zp, A, B], [A.T, zm, C], [B.T, C.T, zz]])

    def shape_combination(self, coeffs):
        return sum(c * self.shape(a) for a, c in enumerate(coeffs))


def tensor_from_shapes(shapes, dims, mirror=None, level=1):
    """Blocks of a list of square shape matrices in the E_+ | E_- | E_0 ordering."""
    np_, nm, nz = dims
    A, B, C = [], [], []
    for s in shapes:
        A.append(s[:np_, np_:np_ + nm].copy())
        B.append(s[:np_, np_ + nm:].copy())
        C.append(s[np_:np_ + nm, np_ + nm:].copy())
    return SecondFormTensor(A, B, C, np.eye(np_), np.eye(nm), np.eye(nz), mirror=mirror,
                            level=level)


def ambient_shapes(poly, frame):
    """Tangent-restricted ambient shape operators for every normal of the frame."""
    tp = frame.projectors["tangent"]
    return [tp @ shape_operator_ambient(poly, frame.point, frame.normals[:, a], frame.level) @ tp
            for a in range(frame.normals.shape[1])]


def block_decompose(poly, frame, with_mirror=False):
    """Second form tensor of a focal frame.

    Float frames give matrix blocks in the frame bases; exact frames give
    ambient blocks between projectors.  ``with_mirror`` also fills the
    components S^p_{alpha mu} from the third form in the direction n_0.
    """
    shapes = ambient_shapes(poly, frame)
    if frame.exact:
        n = len(frame.point)
        bases = {k: kernel_basis(eye(n, "exact") - frame.projectors[k])
                 for k in ("plus", "minus", "zero")}
        grams = {k: v.T @ v for k, v in bases.items()}
        vp, vm, vz = bases["plus"], bases["minus"], bases["zero"]
        return SecondFormTensor([vp.T @ s @ vm for s in shapes], [vp.T @ s @ vz for s in shapes],
                                [vm.T @ s @ vz for s in shapes], grams["plus"],
                                grams["minus"], grams["zero"], level=frame.level, frame=frame,
                                gram_inv={k: inverse(g) for k, g in grams.items()})
    ep, em, ez = frame.E_plus, frame.E_minus, frame.E_zero
    t = SecondFormTensor([ep.T @ s @ em for s in shapes], [ep.T @ s @ ez for s in shapes],
                         [em.T @ s @ ez for s in shapes], np.eye(ep.shape[1]),
                         np.eye(em.shape[1]), np.eye(ez.shape[1]), level=frame.level,
                         frame=frame)
    if with_mirror:
        t.mirror = mirror_components(poly, frame)
    return t


def reassembly_residual(poly, frame, t):
    """max |S_a - blocks reassembled| over all normals (float frames)."""
    tb = frame.tangent_basis()
    worst = 0.0
    for a, s in enumerate(ambient_shapes(poly, frame)):
        worst = max(worst, float(np.abs(tb.T @ s @ tb - t.shape(a)).max()))
    return worst


# ------------------------------------------------------------ OT identities

class _Op:
    """Block viewed as a map between named spaces; products insert the
    inverse Gram matrix of the shared space (identity in float mode)."""

    def __init__(self, m, left, right, gram_inv):
        self.m, self.left, self.right, self.gram_inv = m, left, right, gram_inv

    @property
    def T(self):
        return _Op(self.m.T, self.right, self.left, self.gram_inv)

    def __matmul__(self, other):
        if self.right != other.left:
            raise ValueError("incompatible spaces")
        if self.gram_inv is None:
            m = self.m @ other.m
        else:
            m = self.m @ self.gram_inv[self.right] @ other.m
        return _Op(m, self.left, other.right, self.gram_inv)

    def __add__(self, other):
        return _Op(self.m + other.m, self.left, self.right, self.gram_inv)

    def __sub__(self, other):
        return _Op(self.m - other.m, self.left, self.right, self.gram_inv)

    def __rmul__(self, c):
        return _Op(c * self.m, self.left, self.right, self.gram_inv)


def _skew_defect(op):
    return op.m + op.m.T


def _identity_terms(A, B, C, Ip, Im, i, j):
    """The eight displayed expressions for (i, j), each expected to vanish."""
    d = 1 if i == j else 0
    return [
        (A[i] @ A[j].T + A[j] @ A[i].T + 2 * (B[i] @ B[j].T + B[j] @ B[i].T) - (2 * d) * Ip).m,
        (A[i].T @ A[j] + A[j].T @ A[i] + 2 * (C[i] @ C[j].T + C[j] @ C[i].T) - (2 * d) * Im).m,
        _skew_defect(A[i] @ C[j] @ B[j].T + B[i] @ C[j].T @ A[j].T + A[j] @ C[i] @ B[j].T),
        _skew_defect(C[j] @ B[j].T @ A[i] + A[j].T @ B[i] @ C[j].T + C[i] @ B[j].T @ A[j]),
        _skew_defect(B[j].T @ A[i] @ C[j] + C[j].T @ A[j].T @ B[i] + B[j].T @ A[j] @ C[i]),
        (B[j].T @ B[i] + B[i].T @ B[j] - C[j].T @ C[i] - C[i].T @ C[j]).m,
        ((A[i] @ A[i].T + B[i] @ B[i].T) @ B[j] + B[j] @ (B[i].T @ B[i] + C[i].T @ C[i])
         + B[i] @ B[j].T @ B[i] + A[j] @ A[i].T @ B[i] + A[i] @ A[j].T @ B[i]
         + B[i] @ C[i].T @ C[j] + B[i] @ C[j].T @ C[i] - B[j]).m if i != j else None,
        (C[i].T @ A[i].T @ B[i] + B[i].T @ A[i] @ C[i]).m,
    ]


def _wrap(t):
    g = t.gram_inv
    A = [_Op(m, "plus", "minus", g) for m in t.A]
    B = [_Op(m, "plus", "zero", g) for m in t.B]
    C = [_Op(m, "minus", "zero", g) for m in t.C]
    return A, B, C, _Op(t.eye_plus, "plus", "plus", g), _Op(t.eye_minus, "minus", "minus", g)


def ot_identity_residuals(t, pairs=None):
    """Residuals of the eight displayed identities over pairs (i, j), i, j >= 1.

    Identities 3-5 are skew-symmetry statements measured as |M + M^T|.
    Identity 7 is the c_i^2 c_j coefficient of the cube identity and is
    evaluated for i != j only; its i = j counterpart is
    ``cube_block_residual``.
    """
    A, B, C, Ip, Im = _wrap(t)
    idx = range(1, len(A))
    pairs = [(i, j) for i in idx for j in idx] if pairs is None else pairs
    res = [0.0] * 8
    for i, j in pairs:
        for k, m in enumerate(_identity_terms(A, B, C, Ip, Im, i, j)):
            if m is not None:
                res[k] = max(res[k], max_abs(m))
    return res


def cube_block_residual(t):
    """max_i |A_i A_i^T B_i + B_i B_i^T B_i + B_i C_i^T C_i - B_i|, the (E_+, E_0)
    block of S_i^3 = S_i."""
    A, B, C, _, _ = _wrap(t)
    return max(max_abs((A[i] @ A[i].T @ B[i] + B[i] @ B[i].T @ B[i] + B[i] @ C[i].T @ C[i]
                        - B[i]).m) for i in range(1, len(A)))


def verify_ot_identities(t, tol=1e-12):
    res = ot_identity_residuals(t)
    return {"residuals": res, "pass": all(r <= tol for r in res)}


# ------------------------------------------------------------ p and q

def second_form_components(t, y):
    """p_a(y, y) = y^T S_a y for a tangent coordinate vector y (float mode)."""
    return np.array([y @ t.shape(a) @ y for a in range(len(t.A))])


@dataclass
class ThirdFormTensor:
    """q[a][i, j, k] = q^a(e_i, e_j, e_k) over the frame's tangent basis."""

    q: list
    basis: np.ndarray = field(repr=False, default=None)

    def cubic(self, y):
        return np.array([np.einsum("ijk,i,j,k->", qa, y, y, y) for qa in self.q])

    def symmetry_residual(self):
        worst = 0.0
        for qa in self.q:
            for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
                worst = max(worst, float(np.abs(qa - qa.transpose(perm)).max()))
        return worst


def _quartic_trilinear(poly, w, basis):
    """Phi(w, e_i, e_j, e_k) over the columns of basis."""
    u = basis.T @ w
    g = basis.T @ basis
    out = (np.einsum("i,jk->ijk", u, g) + np.einsum("j,ik->ijk", u, g)
           + np.einsum("k,ij->ijk", u, g)) / 3.0
    wt = float(poly.weight)
    for p in poly.mats(w):
        v = basis.T @ (p @ w)
        m = basis.T @ p @ basis
        out -= wt * (np.einsum("i,jk->ijk", v, m) + np.einsum("j,ik->ijk", v, m)
                     + np.einsum("k,ij->ijk", v, m)) / 3.0
    return poly.sign * out


def third_form_components(poly, frame):
    """Third fundamental form from the t-free, w-linear part -8 sum q^i w_i
    of the expansion of G(t x + y + w), G = level * f; q^w = -(1/2) Phi_G(w, ...)."""
    tb = frame.tangent_basis()
    q = [-0.5 * frame.level * _quartic_trilinear(poly, frame.normals[:, a], tb)
         for a in range(frame.normals.shape[1])]
    return ThirdFormTensor(q=q, basis=tb)


def mirror_components(poly, frame):
    """S^p_{alpha mu} = -3 q^0(e_alpha, e_mu, e_p): the second form at the mirror
    point n_0 in the normal direction e_p, read off the third form at x."""
    tb = frame.tangent_basis()
    q0 = -0.5 * frame.level * _quartic_trilinear(poly, frame.normals[:, 0], tb)
    np_, nm = frame.E_plus.shape[1], frame.E_minus.shape[1]
    return [-3.0 * q0[:np_, np_:np_ + nm, np_ + nm + p] for p in range(frame.E_zero.shape[1])]


def expansion_coefficients(poly, frame, y, w):
    """Interpolate G(t x + y + s w) on a 5x5 grid and return the t s and s
    coefficients, i.e. 8 sum p_i w_i and -8 sum q^i w_i for this (y, w)."""
    x = frame.point
    ex = is_exact(x)
    nodes = [mpq(k) for k in (-2, -1, 0, 1, 2)] if ex else [-2.0, -1.0, 0.0, 1.0, 2.0]
    vander = np.array([[n ** d for d in range(5)] for n in nodes], dtype=object if ex else float)
    vals = np.empty((5, 5), dtype=object if ex else float)
    for i, t in enumerate(nodes):
        for j, s in enumerate(nodes):
            vals[i, j] = frame.level * eval_F(poly, t * x + y + s * w)
    if ex:
        from .linalg import inverse
        vinv = inverse(vander)
    else:
        vinv = np.linalg.inv(vander)
    coef = vinv @ vals @ vinv.T   # coef[dt, ds]
    return coef[1, 1], coef[0, 1]


def expansion_consistency(poly, frame, t, third, samples=10, rng=None):
    """Compare p and q from the tensors with the interpolated expansion."""
    rng = np.random.default_rng(0) if rng is None else rng
    tb = frame.tangent_basis()
    worst_p = worst_q = 0.0
    for _ in range(samples):
        yc = rng.standard_normal(tb.shape[1])
        wc = rng.standard_normal(frame.normals.shape[1])
        c_ts, c_s = expansion_coefficients(poly, frame, tb @ yc, frame.normals @ wc)
        p = second_form_components(t, yc)
        q = third.cubic(yc)
        worst_p = max(worst_p, abs(c_ts - 8 * p @ wc))
        worst_q = max(worst_q, abs(c_s + 8 * q @ wc))
    return worst_p, worst_q


def pq_identities(t, third, y):
    """Residuals of sum p_a q_a = 0 and 16 sum q_a^2 = 16 G |y|^2 - |grad G|^2."""
    p = second_form_components(t, y)
    q = third.cubic(y)
    grad_p = np.array([2 * t.shape(a) @ y for a in range(len(t.A))])
    g = p @ p
    grad_g = 2 * p @ grad_p
    return float(p @ q), float(16 * q @ q - (16 * g * (y @ y) - grad_g @ grad_g))
