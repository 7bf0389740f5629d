"""Quaternions, octonions and orthogonal multiplications.

Octonions are pairs of quaternions multiplied by the Cayley-Dickson rule
(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).  The basis is
e_0..e_3 = (1, i, j, k) in the first slot and e_4..e_7 = (1, i, j, k) in the
second slot, so e_4 is the adjoined unit and e_1 e_4 = e_5.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import exact, max_abs, to_float


def quat_mul(p, q):
    """Hamilton product with i*j = k; works for numeric or object arrays."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], dtype=np.asarray(p).dtype if np.asarray(p).dtype == object else None)


def quat_conj(q):
    q = np.asarray(q)
    return np.concatenate([q[:1], -q[1:]])


def _cayley_dickson(x, y):
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    first = quat_mul(a, c) - quat_mul(quat_conj(d), b)
    second = quat_mul(d, a) + quat_mul(b, quat_conj(c))
    return np.concatenate([first, second])


def _build_table():
    table = np.zeros((8, 8, 8), dtype=int)
    basis = np.eye(8, dtype=int)
    for a in range(8):
        for b in range(8):
            table[a, b] = _cayley_dickson(basis[a], basis[b])
    return table


# OCT_TABLE[a, b] holds the coefficients of e_a * e_b.
OCT_TABLE = _build_table()
OCT_TABLE.setflags(write=False)


def oct_mul(x, y):
    """Octonion product of coefficient vectors (bilinear via the basis table)."""
    x = np.asarray(x)
    y = np.asarray(y)
    return np.einsum("a,b,abc->c", x, y, OCT_TABLE.astype(x.dtype if x.dtype == object else float))


def oct_conj(x):
    x = np.asarray(x)
    return np.concatenate([x[:1], -x[1:]])


def basis_vector(a):
    v = np.zeros(8, dtype=int)
    v[a] = 1
    return v


def mult_matrix(a, side="left"):
    """Integer matrix of x -> e_a x (left) or x -> x e_a (right)."""
    if side == "left":
        return OCT_TABLE[a].T.copy()
    if side == "right":
        return OCT_TABLE[:, a].T.copy()
    raise ValueError("side must be 'left' or 'right'")


def quat_mult_matrix(a, side="left"):
    """Integer 4x4 matrix of left or right multiplication by a quaternion unit."""
    return mult_matrix(a, side)[:4, :4]


@dataclass(frozen=True)
class OrthogonalMultiplication:
    """Bilinear F: R^r x R^s -> R^n given by F(x, y) = sum_a x_a F_a y."""

    mats: tuple

    @property
    def r(self):
        return len(self.mats)

    @property
    def n(self):
        return np.asarray(self.mats[0]).shape[0]

    @property
    def s(self):
        return np.asarray(self.mats[0]).shape[1]

    def __call__(self, x, y):
        return sum(xa * (np.asarray(f) @ y) for xa, f in zip(x, self.mats))


def hurwitz_residual(mats):
    """max over a, b of |F_a^T F_b + F_b^T F_a - 2 delta_ab I|.

    Written with F_a^T F_b so that n x s blocks with n >= s are allowed; for
    square blocks this is equivalent to the row form.
    """
    mats = [np.asarray(f) for f in mats]
    s = mats[0].shape[1]
    exact_mode = mats[0].dtype == object
    ident = exact(np.eye(s, dtype=int)) if exact_mode else np.eye(s)
    worst = 0.0
    for a, fa in enumerate(mats):
        for b, fb in enumerate(mats):
            m = fa.T @ fb + fb.T @ fa - (2 * ident if a == b else 0 * ident)
            worst = max(worst, max_abs(m))
    return worst


def verify_orthogonal_multiplication(om, samples=64, tol=1e-9, rng=None):
    """Check the Hurwitz equations and sampled norm composition.

    Returns a dict with both residuals and a combined pass flag.
    """
    shapes = {np.asarray(f).shape for f in om.mats}
    if len(shapes) != 1:
        raise ValueError("component matrices must share one shape")
    rng = np.random.default_rng(0) if rng is None else rng
    hurwitz = hurwitz_residual(om.mats)
    mats = [to_float(f) for f in om.mats]
    comp = 0.0
    for _ in range(samples):
        x = rng.standard_normal(om.r)
        y = rng.standard_normal(om.s)
        fxy = sum(xa * (f @ y) for xa, f in zip(x, mats))
        lhs = fxy @ fxy
        rhs = (x @ x) * (y @ y)
        comp = max(comp, abs(lhs - rhs) / max(1.0, rhs))
    hurwitz_ok = hurwitz < tol
    comp_ok = comp < tol
    return {
        "hurwitz_residual": hurwitz,
        "composition_residual": comp,
        "hurwitz_pass": hurwitz_ok,
        "composition_pass": comp_ok,
        "agree": hurwitz_ok == comp_ok,
        "pass": hurwitz_ok and comp_ok,
    }
