"""The FKM quartic, the Cartan-Munzner equations, focal points and frames.

The repository polynomial is f = -F_FKM with
F_FKM(x) = |x|^4 - 2 sum_a <P_a x, x>^2, so that the Clifford-Stiefel
manifold is f^{-1}(-1) = M_- and M_+ = f^{-1}(1).
"""

from dataclasses import dataclass, field
from gmpy2 import mpq

import numpy as np

from .clifford import CliffordSystem, fkm_system
from .linalg import (eigen_symmetric, exact, eye, is_exact, kernel_basis, orthonormalize,
                     rational_orthogonal, rational_unit_vector, zeros)
from .octonions import oct_conj, oct_mul


@dataclass(frozen=True)
class IsoparametricPolynomial:
    system: CliffordSystem
    sign: int = -1           # f = sign * F_FKM
    weight: object = mpq(2)   # coefficient of the sum of squares; 2 for FKM
    degree: int = 4
    multiplicities: tuple = (7, 8)   # (m_+, m_-)

    @property
    def dim(self):
        return self.system.mats[0].shape[0]

    def mats(self, like):
        if is_exact(like):
            return [exact(p) for p in self.system.mats]
        return [p.astype(float) for p in self.system.mats]


def fkm_polynomial(side="left", weight=mpq(2)):
    return IsoparametricPolynomial(system=fkm_system(side), weight=weight)


def _w(poly, x):
    return poly.weight if is_exact(x) else float(poly.weight)


def eval_F(poly, x):
    x = np.asarray(x)
    r2 = x @ x
    s = sum((x @ p @ x) ** 2 for p in poly.mats(x))
    return poly.sign * (r2 * r2 - _w(poly, x) * s)


def grad_F(poly, x):
    x = np.asarray(x)
    out = 4 * (x @ x) * x
    for p in poly.mats(x):
        px = p @ x
        out = out - 4 * _w(poly, x) * (x @ px) * px
    return poly.sign * out


def laplacian_F(poly, x):
    x = np.asarray(x)
    n = x.shape[0]
    val = 4 * (n + 2) * (x @ x)
    for p in poly.mats(x):
        px = p @ x
        tr = sum(p[i, i] for i in range(n))
        val = val - _w(poly, x) * (8 * (px @ px) + 4 * (x @ px) * tr)
    return poly.sign * val


def quartic_form_matrix(poly, a, b):
    """Matrix M with v^T M w = Phi(a, b, v, w), Phi the polarized quartic f."""
    a = np.asarray(a)
    b = np.asarray(b)
    third = mpq(1, 3) if is_exact(a) else 1.0 / 3.0
    m = third * ((a @ b) * eye(len(a), "exact" if is_exact(a) else "float64")
                 + np.outer(a, b) + np.outer(b, a))
    for p in poly.mats(a):
        pa, pb = p @ a, p @ b
        m = m - _w(poly, a) * third * ((pa @ b) * p + np.outer(pa, pb) + np.outer(pb, pa))
    return poly.sign * m


def hessian_F(poly, x):
    return 12 * quartic_form_matrix(poly, x, x)


def verify_cartan_munzner(poly, samples=1000, seed=0, mode="float64"):
    """Largest residuals of |grad f|^2 = 16|x|^6 and lap f = 8(m_- - m_+)|x|^2."""
    rng = np.random.default_rng(seed)
    mp, mm = poly.multiplicities
    g = poly.degree
    worst_grad = 0.0
    worst_lap = 0.0
    for _ in range(samples):
        if mode == "exact":
            x = np.array([mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
                          for _ in range(poly.dim)], dtype=object)
        else:
            x = rng.standard_normal(poly.dim)
        r2 = x @ x
        gr = grad_F(poly, x)
        res_grad = gr @ gr - g * g * r2 ** (g - 1)
        res_lap = laplacian_F(poly, x) - mpq(mm - mp) * g * g * r2 / 2
        scale = 1.0 if mode == "exact" else float(r2) ** 3
        worst_grad = max(worst_grad, abs(float(res_grad)) / scale)
        worst_lap = max(worst_lap, abs(float(res_lap)) / max(1.0, float(r2)))
    return {"gradient_residual": worst_grad, "laplacian_residual": worst_lap}


# ---------------------------------------------------------------- M_- points

def stiefel_residual(poly, point):
    """Largest violation of the Clifford-Stiefel conditions for (zeta, eta)."""
    point = np.asarray(point)
    h = poly.dim // 2
    zeta, eta = point[:h], point[h:]
    half = mpq(1, 2) if is_exact(point) else 0.5
    vals = [zeta @ zeta - half, eta @ eta - half, zeta @ eta]
    for p in poly.mats(point)[2:]:
        rho = p[:h, h:]
        vals.append((rho @ zeta) @ eta)
    return max(abs(float(v)) for v in vals)


def is_on_stiefel(poly, point, tol=1e-12):
    return stiefel_residual(poly, point) < tol


def _rhos(poly, like):
    h = poly.dim // 2
    return [p[:h, h:] for p in poly.mats(like)[2:]]


def sample_clifford_stiefel(poly, seed=0, rng=None, attempts=100):
    """Random float point (zeta, eta) of the Clifford-Stiefel manifold."""
    rng = np.random.default_rng(seed) if rng is None else rng
    h = poly.dim // 2
    for _ in range(attempts):
        zeta = rng.standard_normal(h)
        zeta /= np.linalg.norm(zeta) * np.sqrt(2)
        span = np.column_stack([zeta] + [r @ zeta for r in _rhos(poly, zeta)])
        comp = kernel_basis(span.T)
        if comp.shape[1] != h - 8:
            continue
        eta = comp @ rng.standard_normal(comp.shape[1])
        nrm = np.linalg.norm(eta)
        if nrm < 1e-6:
            continue
        eta /= nrm * np.sqrt(2)
        return np.concatenate([zeta, eta])
    raise RuntimeError("could not sample a Clifford-Stiefel point")


def sample_clifford_stiefel_exact(poly, seed=0, rng=None):
    """Random rational point of the Clifford-Stiefel manifold.

    zeta = (a, b) is half the sum of two columns of a rational orthogonal
    matrix; eta is written down in closed form from octonion arithmetic with
    a rational unit octonion u, so every coordinate stays in Q.
    """
    rng = np.random.default_rng(seed) if rng is None else rng
    q = rational_orthogonal(16, rng)
    zeta = (q[:, 0] + q[:, 1]) / 2
    a, b = zeta[:8], zeta[8:]
    while not any(v != 0 for v in a):
        q = rational_orthogonal(16, rng)
        zeta = (q[:, 0] + q[:, 1]) / 2
        a, b = zeta[:8], zeta[8:]
    u = rational_unit_vector(8, rng)
    na = a @ a
    if poly.system.side == "left":
        # rho_i multiplies on the right: complement is {(c, d): conj(a) c + conj(b) d = 0}
        d = oct_mul(a, u)
        c = -oct_mul(a, oct_mul(oct_conj(b), d)) / na
    else:
        # rho_i multiplies on the left: complement is {(c, d): c conj(a) + d conj(b) = 0}
        d = oct_mul(u, a)
        c = -oct_mul(oct_mul(d, oct_conj(b)), a) / na
    point = np.concatenate([zeta, c, d])
    if stiefel_residual(poly, point) != 0:
        raise RuntimeError("rational Stiefel construction failed")
    return point


# ---------------------------------------------------------------- frames

@dataclass
class FocalFrame:
    """Orthonormal adapted frame at a focal point.

    ``normals`` has n_0 as first column.  ``level`` is +1 on M_+ and -1 on
    M_-.  In float mode E_plus/E_minus/E_zero are orthonormal bases; in exact
    mode they are None and the orthogonal projectors are used instead.
    """

    point: np.ndarray
    normals: np.ndarray
    level: int
    E_plus: np.ndarray = None
    E_minus: np.ndarray = None
    E_zero: np.ndarray = None
    projectors: dict = field(default_factory=dict)

    @property
    def exact(self):
        return is_exact(self.point)

    def tangent_basis(self):
        return np.hstack([self.E_plus, self.E_minus, self.E_zero])

    def dims(self):
        if self.exact:
            from .linalg import rank
            return tuple(rank(self.projectors[k]) for k in ("plus", "minus", "zero"))
        return (self.E_plus.shape[1], self.E_minus.shape[1], self.E_zero.shape[1])


def shape_operator_ambient(poly, frame_point, normal, level):
    """Ambient symmetric matrix of the second fundamental form in direction w.

    Read off from the t-linear term 8<S(y,y), w> t of the expansion of
    G(t x + y + w) with G = level * f, i.e. S_w = (3/2) Phi_G(x, w, ., .).
    The caller restricts it to the tangent space.
    """
    scale = mpq(3, 2) if is_exact(frame_point) else 1.5
    return level * scale * quartic_form_matrix(poly, frame_point, normal)


def tangent_projector(point, normals):
    n = len(point)
    ex = is_exact(point)
    p = eye(n, "exact" if ex else "float64") - np.outer(point, point)
    for k in range(normals.shape[1]):
        p = p - np.outer(normals[:, k], normals[:, k])
    return p


def normal_space(poly, x, tol=1e-8):
    """Orthonormal basis of the normal space of the focal manifold through x.

    On x^perp the Hessian of G = f(x) f has eigenvalue -12 on normal and
    +4 on tangent directions (read off the quadratic part of the expansion).
    """
    level = 1 if eval_F(poly, x) > 0 else -1
    h = level * hessian_F(poly, x)
    w, v = np.linalg.eigh(h)
    return v[:, np.abs(w + 12) < tol * 100]


def frame_from_normals(poly, x, normals, level, tol=1e-9):
    """Adapted frame from a focal point and an orthonormal normal basis (n_0 first)."""
    x = np.asarray(x)
    tproj = tangent_projector(x, normals)
    s0 = tproj @ shape_operator_ambient(poly, x, normals[:, 0], level) @ tproj
    if is_exact(x):
        if np.any(s0 @ s0 @ s0 != s0):
            raise ValueError("shape operator does not satisfy S^3 = S")
        sq = s0 @ s0
        proj = {"plus": (sq + s0) / 2, "minus": (sq - s0) / 2, "zero": tproj - sq,
                "tangent": tproj}
        return FocalFrame(point=x, normals=normals, level=level, projectors=proj)
    tb = orthonormalize(tproj, tol)
    w, v = eigen_symmetric(tb.T @ s0 @ tb)
    vecs = tb @ v
    plus = vecs[:, np.abs(w - 1) < 1e-6]
    minus = vecs[:, np.abs(w + 1) < 1e-6]
    zero = vecs[:, np.abs(w) < 1e-6]
    if plus.shape[1] + minus.shape[1] + zero.shape[1] != tb.shape[1]:
        raise ValueError("shape operator spectrum is not {-1, 0, 1}")
    proj = {"plus": plus @ plus.T, "minus": minus @ minus.T, "zero": zero @ zero.T,
            "tangent": tproj}
    return FocalFrame(point=x, normals=normals, level=level, E_plus=plus,
                      E_minus=minus, E_zero=zero, projectors=proj)


def focal_frame_at(poly, point, tol=1e-12):
    """Frame at a Clifford-Stiefel point with normals P_a x and the explicit eigenspaces."""
    point = np.asarray(point)
    if stiefel_residual(poly, point) > tol:
        raise ValueError("point is not on the Clifford-Stiefel manifold")
    mats = poly.mats(point)
    normals = np.column_stack([p @ point for p in mats])
    if is_exact(point):
        return frame_from_normals(poly, point, normals, -1)
    h = poly.dim // 2
    p0x = mats[0] @ point
    zero = np.column_stack([p @ p0x for p in mats[1:]])
    zeta, eta = point[:h], point[h:]
    rhos = _rhos(poly, point)
    # E_+^*: (0, d) with d orthogonal to zeta, eta, rho_i zeta
    cons_plus = np.column_stack([zeta, eta] + [r @ zeta for r in rhos])
    d = orthonormalize(kernel_basis(cons_plus.T))
    plus = np.vstack([np.zeros((h, d.shape[1])), d])
    # E_-^*: (c, 0) with c orthogonal to zeta, eta, rho_i eta
    cons_minus = np.column_stack([zeta, eta] + [r @ eta for r in rhos])
    c = orthonormalize(kernel_basis(cons_minus.T))
    minus = np.vstack([c, np.zeros((h, c.shape[1]))])
    proj = {"plus": plus @ plus.T, "minus": minus @ minus.T, "zero": zero @ zero.T,
            "tangent": tangent_projector(point, normals)}
    return FocalFrame(point=point, normals=normals, level=-1, E_plus=plus,
                      E_minus=minus, E_zero=zero, projectors=proj)


def shape_operator(poly, frame, normal_coeffs, tol=1e-12):
    """S_n = -<P_n X, Y> on the tangent space of M_-, in the frame basis (22x22)."""
    c = np.asarray(normal_coeffs, dtype=float)
    if abs(c @ c - 1) > tol * 10:
        raise ValueError("normal coefficients must have unit length")
    pn = poly.system.combination(c)
    t = frame.tangent_basis()
    return -t.T @ pn @ t


def random_unit(n, rng):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def sample_mplus(poly, seed=0, rng=None):
    """Float point (x, n) of the unit normal bundle of M_+ via the mirror map.

    Draw x* on M_- and a unit normal n* there; then x = (x* + n*)/sqrt2 lies
    on M_+ with unit normal n = (x* - n*)/sqrt2.
    """
    rng = np.random.default_rng(seed) if rng is None else rng
    xs = sample_clifford_stiefel(poly, rng=rng)
    mats = poly.mats(xs)
    ns = sum(c * (p @ xs) for c, p in zip(random_unit(len(mats), rng), mats))
    return (xs + ns) / np.sqrt(2), (xs - ns) / np.sqrt(2)


def mplus_frame(poly, x, n0, tol=1e-8):
    """Adapted frame at x on M_+ with n_0 first and the other normals from the Hessian."""
    nsp = normal_space(poly, x)
    if abs(n0 @ n0 - 1) > tol or np.linalg.norm(n0 - nsp @ (nsp.T @ n0)) > tol:
        raise ValueError("n0 is not a unit normal")
    rest = nsp - np.outer(n0, n0 @ nsp)
    rest = orthonormalize(rest, 1e-6)
    return frame_from_normals(poly, x, np.column_stack([n0, rest]), 1)


def rational_clifford_rotation(poly, rng, steps=4):
    """Rational orthogonal g = prod (c I + s P_a P_b) normalizing the Clifford system."""
    n = poly.dim
    mats = poly.mats(exact(np.zeros(1, dtype=int)))
    g = eye(n, "exact")
    for _ in range(steps):
        a, b = rng.choice(len(mats), size=2, replace=False)
        p, q = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        den = p * p + q * q
        c, s = mpq(p * p - q * q, den), mpq(2 * p * q, den)
        g = (c * eye(n, "exact") + s * (mats[a] @ mats[b])) @ g
    return g


def sample_mplus_exact(poly, seed=0, rng=None):
    """Rational point x of M_+ with rational orthonormal normals.

    x = g (u, 0) with u a rational unit vector, so x is fixed by g P_0 g^T;
    the normals are g P_a g^T x for a = 1..8 (n_0 = g P_1 g^T x).
    """
    rng = np.random.default_rng(seed) if rng is None else rng
    g = rational_clifford_rotation(poly, rng)
    h = poly.dim // 2
    u = np.concatenate([rational_unit_vector(h, rng, height=2), zeros(h, "exact")])
    x = g @ u
    mats = poly.mats(x)
    normals = np.column_stack([g @ (p @ u) for p in mats[1:]])
    return x, normals
