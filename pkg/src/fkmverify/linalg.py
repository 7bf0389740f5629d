"""Small dense linear algebra over exact rationals or binary64.

Matrices are numpy arrays. Exact matrices use ``dtype=object`` with
``gmpy2.mpq`` entries; float matrices use float64 or complex128.
"""

from gmpy2 import mpq

import numpy as np

DEFAULT_TOL = 1e-9


def is_exact(m):
    return np.asarray(m).dtype == object


def exact(m):
    """Convert an integer/rational array to an exact Fraction array."""
    a = np.asarray(m)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        if isinstance(v, type(mpq())):
            out[idx] = v
        elif isinstance(v, (int, np.integer)):
            out[idx] = mpq(int(v))
        else:
            out[idx] = mpq(v)
    return out


def to_float(m):
    a = np.asarray(m)
    if a.dtype == object:
        return a.astype(float)
    return a


def zeros(shape, mode="float64"):
    if mode == "exact":
        return exact(np.zeros(shape, dtype=int))
    return np.zeros(shape)


def eye(n, mode="float64"):
    if mode == "exact":
        return exact(np.eye(n, dtype=int))
    return np.eye(n)


def norm(m):
    """Frobenius norm (float) of an exact or float array."""
    return float(np.linalg.norm(to_float(m)))


def max_abs(m):
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return float(max(abs(v) for v in a.flat))
    return float(np.max(np.abs(a)))


def _rref(m):
    """Reduced row echelon form over Q. Returns (rref, pivot columns)."""
    a = exact(m).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, tol=DEFAULT_TOL):
    """Exact rank over Q, or the count of singular values above tol*smax."""
    a = np.asarray(m)
    if a.size == 0:
        return 0
    if a.dtype == object:
        return len(_rref(a)[1])
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def kernel_basis(m, tol=DEFAULT_TOL):
    """Basis of the right kernel, as columns of the returned matrix.

    Exact mode returns the echelon basis (one free variable set to 1 per
    vector); float mode returns an orthonormal basis from the SVD.
    """
    a = np.asarray(m)
    cols = a.shape[1]
    if a.dtype == object:
        red, pivots = _rref(a)
        free = [c for c in range(cols) if c not in pivots]
        basis = zeros((cols, len(free)), "exact")
        for k, f in enumerate(free):
            basis[f, k] = mpq(1)
            for i, p in enumerate(pivots):
                basis[p, k] = -red[i, f]
        return basis
    if a.shape[0] == 0:
        return np.eye(cols, dtype=a.dtype)
    _, s, vh = np.linalg.svd(a)
    r = 0 if s.size == 0 or s[0] == 0 else int(np.sum(s > tol * s[0]))
    return vh[r:].conj().T


def joint_kernel(ms, tol=DEFAULT_TOL):
    """Basis of the intersection of the kernels of a family of matrices."""
    if len(ms) == 0:
        raise ValueError("no matrices")
    cols = {np.asarray(m).shape[1] for m in ms}
    if len(cols) != 1:
        raise ValueError("matrices must share the column count")
    return kernel_basis(np.vstack(ms), tol)


def orthonormalize(vs, tol=DEFAULT_TOL):
    """Orthonormal basis (columns) for the span of the columns of vs."""
    vs = to_float(vs)
    if vs.shape[1] == 0:
        return vs
    u, s, _ = np.linalg.svd(vs, full_matrices=False)
    r = 0 if s[0] == 0 else int(np.sum(s > tol * s[0]))
    return u[:, :r]


def eigen_symmetric(m, tol=DEFAULT_TOL):
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric m.

    Exact input is accepted only when m^3 = m; the eigenspaces are then the
    kernels of m - I, m + I and m, each returned with an echelon basis
    (not normalized, since normalization leaves Q).
    """
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.dtype == object:
        if np.any(a != a.T):
            raise ValueError("matrix is not symmetric")
        n = a.shape[0]
        if np.any(a @ a @ a != a):
            raise ValueError("exact eigen decomposition needs m^3 = m")
        values, vectors = [], []
        for lam in (1, 0, -1):
            k = kernel_basis(a - lam * eye(n, "exact"))
            values += [mpq(lam)] * k.shape[1]
            vectors.append(k)
        return np.array(values, dtype=object), np.hstack(vectors)
    if np.max(np.abs(a - a.T), initial=0.0) > tol * max(1.0, np.max(np.abs(a), initial=0.0)):
        raise ValueError("matrix is not symmetric")
    w, v = np.linalg.eigh((a + a.T) / 2)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigenspace_counts(values, tol=1e-8):
    """Multiplicities of the eigenvalues +1, -1 and 0 (returned as a dict)."""
    vals = to_float(np.asarray(values))
    return {
        1: int(np.sum(np.abs(vals - 1) < tol)),
        -1: int(np.sum(np.abs(vals + 1) < tol)),
        0: int(np.sum(np.abs(vals) < tol)),
    }


def rational_unit_vector(n, rng, height=7):
    """Random unit vector with rational entries (inverse stereographic map)."""
    u = [mpq(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))
         for _ in range(n - 1)]
    s = sum(v * v for v in u)
    vec = [2 * v / (1 + s) for v in u] + [(s - 1) / (1 + s)]
    return np.array(vec, dtype=object)


def rational_orthogonal(n, rng, height=3):
    """Random orthogonal matrix over Q via the Cayley transform of a skew matrix."""
    k = zeros((n, n), "exact")
    for i in range(n):
        for j in range(i + 1, n):
            v = mpq(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))
            k[i, j] = v
            k[j, i] = -v
    ident = eye(n, "exact")
    return (ident - k) @ inverse(ident + k)


def inverse(m):
    """Exact inverse over Q, float inverse otherwise."""
    a = np.asarray(m)
    if a.dtype != object:
        return np.linalg.inv(a)
    n = a.shape[0]
    red, pivots = _rref(np.hstack([a, eye(n, "exact")]))
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]
