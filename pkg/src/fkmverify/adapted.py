"""The adapted 4-null frame at a point of M_+ and the block patterns read off in it.

Layout of the adapted frame at (x, n_0):

* normals n_1, n_2, n_3 span N3, the normals whose B, C blocks vanish on the
  kernel P3 of B_1 and on the cokernels of B_1, C_1; n_3 is the unique normal
  with B = C = 0, and n_4..n_7 span the complement;
* E_+ = U | U', with U = ker B_1^T (its last two vectors spanning the common
  kernel of all B_a^T);
* E_- = W | W', with W = ker C_1^T (its first two vectors spanning the common
  kernel of all C_a^T);
* E_0 = P3 | P', with P3 = (p_1, p_2, v) and v the common kernel of all B_a.

In this frame the lower left 4x3 blocks b_a of B_a (a >= 4) take the
canonical form b(x) with first column s x and second column s K x.
"""

from dataclasses import dataclass, field

import numpy as np

from .fkm import mplus_frame, random_unit
from .forms import block_decompose
from .linalg import joint_kernel, kernel_basis
from .mirror import _frame
from .nullity import normalize_pair, orthonormal_completion
from .octonions import OrthogonalMultiplication

J2 = np.array([[0.0, -1.0], [1.0, 0.0]])
# E_+ index identified with each E_- index: mu_1, mu_2 -> alpha_3, alpha_4,
# mu_3, mu_4 -> alpha_1, alpha_2, the image part fixed
SWAP = np.array([2, 3, 0, 1, 4, 5, 6, 7])


class PatternError(ValueError):
    pass


@dataclass
class AdaptedFrame:
    frame: object
    tensor: object
    s: float
    a: float
    b: float
    sign: int
    spectral: object
    diagnostics: dict = field(default_factory=dict)


def _null_normal(t, tol):
    stack = np.array([np.concatenate([b.ravel(), c.ravel()]) for b, c in zip(t.B[1:], t.C[1:])]).T
    k = kernel_basis(stack, tol)
    if k.shape[1] != 1:
        raise PatternError(f"expected one normal with B = C = 0, found {k.shape[1]}")
    return k[:, 0]


def _procrustes(src, dst):
    """Orthogonal O minimizing |O src - dst|."""
    u, _, vt = np.linalg.svd(dst @ src.T)
    return u @ vt


def swap_matrix(block=None):
    """Documented identification E_- -> E_+ as a matrix; ``block`` (2x2)
    replaces the identity on mu_1, mu_2 -> alpha_3, alpha_4."""
    q = np.zeros((8, 8))
    q[SWAP, np.arange(8)] = 1.0
    if block is not None:
        q[2:4, 0:2] = block
    return q


def _fit_swap_block(amats):
    """Orthogonal 2x2 block O making A_a Q(O)^T skew in the least-squares sense."""
    base = swap_matrix(np.zeros((2, 2)))
    cols, rhs = [], []
    for am in amats:
        rhs.append(-(am @ base.T + base @ am.T).ravel())
    for k in range(4):
        e = np.zeros((8, 8))
        e[2 + k // 2, k % 2] = 1.0
        cols.append(np.concatenate([(am @ e.T + e @ am.T).ravel() for am in amats]))
    sol = np.linalg.lstsq(np.array(cols).T, np.concatenate(rhs), rcond=None)[0]
    u, _, vt = np.linalg.svd(sol.reshape(2, 2))
    return u @ vt


def _complex_structure_basis(k, sign):
    """Orthogonal R with R^T k R = diag(J2, sign J2) for a 4x4 complex structure k."""
    e1 = np.eye(4)[0]
    f1 = k @ e1
    rest = kernel_basis(np.vstack([e1, f1]))
    e2 = rest[:, 0]
    f2 = k @ e2
    # a pair (e, k e) gives the block J2 and (k e, e) gives -J2
    if sign < 0:
        return np.column_stack([e1, f1, f2, e2])
    return np.column_stack([e1, f1, e2, f2])


def adapted_frame(poly, x, n0, rng=None, n1=None, sign=-1, tol=1e-8):
    """Build the adapted frame at (x, n0).

    ``n1`` (ambient unit normal) defaults to a random normal orthogonal to
    n0 and to the null normal.  ``sign`` picks diag(J2, sign J2) as the form
    of the second column of b(x).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    fr = mplus_frame(poly, x, n0)
    t = block_decompose(poly, fr)
    nrm = fr.normals
    cz = _null_normal(t, tol)
    if n1 is None:
        v = random_unit(len(cz), rng)
    else:
        v = nrm[:, 1:].T @ n1
    v = v - (v @ cz) * cz
    v = v / np.linalg.norm(v)
    q = orthonormal_completion(np.column_stack([v, cz]), len(cz))
    normals = np.column_stack([nrm[:, 0], nrm[:, 1:] @ q])
    t2 = block_decompose(poly, _frame(x, normals, fr.E_plus, fr.E_minus, fr.E_zero, fr.level))
    spec, tn = normalize_pair(t2)
    if spec.r != 4:
        raise PatternError(f"pair is {spec.r}-null, expected 4")
    s = float(spec.sigma[0])
    ep = fr.E_plus @ spec.bases["plus"]
    em = fr.E_minus @ spec.bases["minus"]
    ez = fr.E_zero @ spec.bases["zero"]
    # N3 in coordinates of normals[:, 1:] (n_1 first, null normal second)
    p3, u4 = np.eye(7)[:, :3], np.eye(8)[:, :4]
    rows = [np.concatenate([(tn.B[a] @ p3).ravel(), (tn.C[a] @ p3).ravel(),
                            (tn.B[a].T @ u4).ravel(), (tn.C[a].T @ u4).ravel()])
            for a in range(1, 8)]
    n3 = kernel_basis(np.array(rows).T, tol)
    if n3.shape[1] != 3:
        raise PatternError(f"N3 has dimension {n3.shape[1]}, expected 3")
    e_1, e_z = np.eye(7)[0], np.eye(7)[1]
    proj = n3 @ n3.T - np.outer(e_1, e_1) - np.outer(e_z, e_z)
    w, vv = np.linalg.eigh(proj)
    n_2 = vv[:, -1]
    comp = kernel_basis(np.vstack([e_1, n_2, e_z]))
    # common kernel vector of all B_a inside P3
    v3 = joint_kernel(tn.B[1:], tol)
    if v3.shape[1] != 1:
        raise PatternError(f"common kernel of B_a has dimension {v3.shape[1]}")
    v3 = v3[:, 0]
    p12 = kernel_basis(np.vstack([v3, np.eye(7)[3:]]))
    pb = np.column_stack([p12, v3])

    def bn(coef):
        return sum(coef[i] * tn.B[i + 1] for i in range(7))

    def m_of(p, cols):
        return np.column_stack([bn(cols[:, j])[4:, :] @ p for j in range(cols.shape[1])])

    m1 = m_of(p12[:, 0], comp)
    comp = comp @ (m1 / s).T
    m2 = m_of(p12[:, 1], comp)
    a_par = float(np.trace(m2) / 4)
    sk = (m2 - m2.T) / 2
    b_par = float(np.sqrt(np.abs(np.linalg.eigvalsh(sk @ sk.T)).mean()))
    if b_par < tol:
        raise PatternError("second column of b(x) has no skew part")
    r = _complex_structure_basis(sk / b_par, sign)
    comp = comp @ r
    # rotate the image parts together to keep B_1 = C_1 = s I
    ncoef = np.column_stack([e_1, n_2, e_z, comp])
    ep_im = ep[:, 4:] @ r
    em_im = em[:, 4:] @ r
    ez_im = ez[:, 3:] @ r
    ez_new = np.column_stack([ez @ pb, ez_im])
    normals_new = np.column_stack([normals[:, 0], normals[:, 1:] @ ncoef])
    t3 = block_decompose(poly, _frame(x, normals_new, np.column_stack([ep[:, :4], ep_im]),
                                      np.column_stack([em[:, :4], em_im]), ez_new, fr.level))
    # U: last two span the common cokernel of the B_a
    ub = kernel_basis(np.hstack([b[:4, :] for b in t3.B[1:]]).T, tol)
    if ub.shape[1] != 2:
        raise PatternError(f"common cokernel of B_a in U has dimension {ub.shape[1]}")
    u12 = kernel_basis(ub.T)
    ucoef = np.column_stack([u12, ub])
    wb = kernel_basis(np.hstack([c[:4, :] for c in t3.C[1:]]).T, tol)
    if wb.shape[1] != 2:
        raise PatternError(f"common cokernel of C_a in W has dimension {wb.shape[1]}")
    w34 = kernel_basis(wb.T)
    # align the nonzero rows of g(x) with those of d(x)
    dsrc = np.hstack([(ucoef[:, :2].T @ t3.B[a][:4, 3:]) for a in range(4, 8)])
    gsrc = np.hstack([(w34.T @ t3.C[a][:4, 3:]) for a in range(4, 8)])
    w34 = w34 @ _procrustes(gsrc, dsrc).T
    # align the zero rows of g with those of d through the skewness of A_a
    eplus = np.column_stack([ep[:, :4] @ ucoef, ep_im])
    wpre = np.column_stack([wb, w34])
    t4 = block_decompose(poly, _frame(x, normals_new, eplus,
                                      np.column_stack([em[:, :4] @ wpre, em_im]), ez_new, fr.level))
    wb = wb @ _fit_swap_block(t4.A[1:]).T
    eminus = np.column_stack([em[:, :4] @ np.column_stack([wb, w34]), em_im])
    final = _frame(x, normals_new, eplus, eminus, ez_new, fr.level)
    tf = block_decompose(poly, final, with_mirror=True)
    diag = {"null_normal_coeffs": cz, "N3_dim": 3, "v3": v3}
    return AdaptedFrame(frame=final, tensor=tf, s=s, a=a_par, b=b_par, sign=sign,
                        spectral=spec, diagnostics=diag)



# ---------------------------------------------------------------- patterns

@dataclass
class BlockPattern:
    """Required-zero blocks.  ``splits`` maps a block kind (A, B, C) to its
    (row split, column split); ``zeros`` lists (kind, normal indices,
    row block, column block) with normal indices counted from 1."""

    name: str
    splits: dict
    zeros: list

    def check_dims(self, t):
        for kind, (rs, cs) in self.splits.items():
            mat = getattr(t, kind)[1]
            if mat.shape != (sum(rs), sum(cs)):
                raise PatternError(f"{self.name}: {kind} blocks are {mat.shape}, "
                                   f"pattern expects {(sum(rs), sum(cs))}")
        for kind, normals, rb, cb in self.zeros:
            rs, cs = self.splits[kind]
            if rb >= len(rs) or cb >= len(cs) or max(normals) > len(getattr(t, kind)) - 1:
                raise PatternError(f"{self.name}: block outside bounds")


def _block(mat, rs, cs, rb, cb):
    r0, c0 = sum(rs[:rb]), sum(cs[:cb])
    return mat[r0:r0 + rs[rb], c0:c0 + cs[cb]]


def validate_pattern(t, pattern, tol=1e-9):
    """(ok, largest entry found in a required-zero block)."""
    pattern.check_dims(t)
    worst = 0.0
    for kind, normals, rb, cb in pattern.zeros:
        rs, cs = pattern.splits[kind]
        for a in normals:
            blk = _block(getattr(t, kind)[a], rs, cs, rb, cb)
            worst = max(worst, float(np.abs(blk).max(initial=0.0)))
    return worst <= tol, worst


MTX = BlockPattern(
    "mtx",
    {"A": ((4, 4), (4, 4)), "B": ((4, 4), (3, 4)), "C": ((4, 4), (3, 4))},
    [("A", (1, 2, 3), 0, 1), ("A", (1, 2, 3), 1, 0),
     ("B", (1, 2, 3), 0, 0), ("B", (1, 2, 3), 0, 1), ("B", (1, 2, 3), 1, 0),
     ("C", (1, 2, 3), 0, 0), ("C", (1, 2, 3), 0, 1), ("C", (1, 2, 3), 1, 0),
     ("A", (4, 5, 6, 7), 0, 0), ("B", (4, 5, 6, 7), 0, 0), ("C", (4, 5, 6, 7), 0, 0)])

# at x^*: A* is E_+^* x E_-^* (7x7), B* is E_+^* x E_0^* and C* is E_-^* x E_0^* (7x8)
GOOD = BlockPattern(
    "good",
    {"A": ((3, 4), (3, 4)), "B": ((3, 4), (4, 4)), "C": ((3, 4), (4, 4))},
    [("A", (1, 2, 3, 4), 0, 0), ("A", (1, 2, 3, 4), 0, 1), ("A", (1, 2, 3, 4), 1, 0),
     ("B", (1, 2, 3, 4), 0, 1), ("B", (1, 2, 3, 4), 1, 0),
     ("C", (1, 2, 3, 4), 0, 1), ("C", (1, 2, 3, 4), 1, 0),
     ("A", (5, 6, 7, 8), 0, 0), ("B", (5, 6, 7, 8), 0, 0), ("C", (5, 6, 7, 8), 0, 0)])


def third_column_residual(t):
    """Largest entry of the third E_0 column over all B_a and C_a, a >= 1."""
    return max(float(np.abs(m[:, 2]).max()) for m in t.B[1:] + t.C[1:])


def b_blocks(t):
    """The 4x3 blocks b_a (lower left of B_a), a = 4..7."""
    return [t.B[a][4:, :3] for a in range(4, 8)]


def d_blocks(t):
    return [t.B[a][:4, 3:] for a in range(4, 8)]


def g_blocks(t):
    return [t.C[a][:4, 3:] for a in range(4, 8)]


def eqqq_template(s, a, b, sign):
    """The four 4x3 matrices b_4..b_7 of the canonical form."""
    t = np.zeros((4, 4, 3))
    t[0][:, 0] = [s, 0, 0, 0]
    t[1][:, 0] = [0, s, 0, 0]
    t[2][:, 0] = [0, 0, s, 0]
    t[3][:, 0] = [0, 0, 0, s]
    t[0][:, 1] = [a, b, 0, 0]
    t[1][:, 1] = [-b, a, 0, 0]
    t[2][:, 1] = [0, 0, a, sign * b]
    t[3][:, 1] = [0, 0, -sign * b, a]
    return t


def validate_eqqq(af, tol=1e-9):
    """Residual of the b_a against the canonical template with fitted (s, a, b)."""
    arr = np.array(b_blocks(af.tensor))
    tmpl = eqqq_template(af.s, af.a, af.b, af.sign)
    resid = float(np.abs(arr - tmpl).max())
    return resid <= tol, resid


# ---------------------------------------------------------------- (EQ)

def validate_frame_symmetries(t, tol=1e-9):
    """Residuals of B_a = Q C_a, A_a Q^T skew and A^#_p Q^T skew under the
    documented identification Q (pair swap of the cokernel planes)."""
    ok, worst = validate_pattern(t, MTX, max(tol, 1e-8))
    if not ok:
        raise PatternError(f"frame is not in the mtx layout (offending entry {worst:.3g})")
    q = swap_matrix()
    out = {
        "B_equals_QC": max(float(np.abs(t.B[a] - q @ t.C[a]).max()) for a in range(1, 8)),
        "A_skew": max(float(np.abs(t.A[a] @ q.T + q @ t.A[a].T).max()) for a in range(1, 8)),
        "z_skew": max(float(np.abs((t.A[a] @ q.T + q @ t.A[a].T)[:4, :4]).max())
                      for a in range(1, 4)),
        "c_equals_f": max(float(np.abs(t.B[a][4:, 3:] - t.C[a][4:, 3:]).max())
                          for a in range(1, 8)),
    }
    if t.mirror is not None:
        out["A_sharp_skew"] = max(float(np.abs(m @ q.T + q @ m.T).max()) for m in t.mirror)
    out["pass"] = all(v <= tol for k, v in out.items() if k != "pass")
    return out


def solve_identification(t):
    """Least-squares Q with Q C_a = B_a and A_a Q^T + Q A_a^T = 0 (frame free);
    returns (Q, equation residual, orthogonality defect)."""
    npl, nmi = t.A[0].shape
    n = npl * nmi
    basis = np.eye(n).reshape(n, npl, nmi)
    cols, rhs = [], []
    for a in range(1, len(t.A)):
        cols.append(np.array([(e @ t.C[a]).ravel() for e in basis]).T)
        rhs.append(t.B[a].ravel())
        cols.append(np.array([(t.A[a] @ e.T + e @ t.A[a].T).ravel() for e in basis]).T)
        rhs.append(np.zeros(npl * npl))
    m, r = np.vstack(cols), np.concatenate(rhs)
    sol = np.linalg.lstsq(m, r, rcond=None)[0]
    q = sol.reshape(npl, nmi)
    return q, float(np.abs(m @ sol - r).max()), float(np.abs(q @ q.T - np.eye(npl)).max())


# ---------------------------------------------------------------- [3,4,8]

def extract_348_multiplication(t, tol=1e-8):
    """F_a = (sqrt2 c_a | w_a)^T, a = 1..3, from a tensor in mtx form."""
    ok, worst = validate_pattern(t, MTX, tol)
    if not ok:
        raise PatternError(f"blocks are not in the mtx layout (offending entry {worst:.3g})")
    mats = [np.hstack([np.sqrt(2.0) * t.B[a][4:, 3:], t.A[a][4:, 4:]]).T for a in (1, 2, 3)]
    return OrthogonalMultiplication(mats)


def multiplication_from_blocks(c, w):
    """Same construction from explicit lists of 4x4 blocks c_a and w_a."""
    return OrthogonalMultiplication([np.hstack([np.sqrt(2.0) * ca, wa]).T for ca, wa in zip(c, w)])


# ---------------------------------------------------------------- V at x^*

@dataclass
class VRestriction:
    """Second and third forms at x^* on V = V_+^* + V_-^* + V_0^*.

    ``embed`` maps (x, y, z) in R^3 + R^3 + R^4 to tangent coordinates at x^*.
    """

    tensor: object
    third: object
    embed: np.ndarray

    def p(self, v):
        u = self.embed @ v
        return np.array([u @ self.tensor.shape(a) @ u for a in range(len(self.tensor.A))])

    def q(self, v):
        return self.third.cubic(self.embed @ v)


def restrict_to_V(poly, af):
    """Forms at the mirror point x^* restricted to V, from an adapted frame."""
    from .forms import third_form_components
    from .mirror import star_frame
    star = star_frame(af.frame)
    t = block_decompose(poly, star)
    third = third_form_components(poly, star)
    npl, nmi, nz = t.dims
    if (npl, nmi, nz) != (7, 7, 8):
        raise PatternError(f"unexpected eigenspace dimensions {(npl, nmi, nz)} at x^*")
    embed = np.zeros((npl + nmi + nz, 10))
    embed[0:3, 0:3] = np.eye(3)
    embed[npl:npl + 3, 3:6] = np.eye(3)
    embed[npl + nmi:npl + nmi + 4, 6:10] = np.eye(4)
    return VRestriction(t, third, embed)


def v_vanishing(vr, samples=50, rng=None):
    """max |p_j^*| (j >= 5) and max |q_j^*| (all j) over random unit v in V."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst_p = worst_q = 0.0
    for _ in range(samples):
        v = random_unit(10, rng)
        worst_p = max(worst_p, float(np.abs(vr.p(v)[5:]).max()))
        worst_q = max(worst_q, float(np.abs(vr.q(v)).max()))
    return worst_p, worst_q


def _quat_left(q):
    from .octonions import quat_mult_matrix
    return sum(c * quat_mult_matrix(i, "left") for i, c in enumerate(q))


def quaternion_form(vr, samples=50, rng=None):
    """Identify V_+^*, V_-^* with Im H, V_0^* and N^* with H and compare
    p^* = p_1 1 + p_2 i + p_3 j + p_4 k with -sqrt2 (x z + y o z) for both
    products y o z = y z and z y.  Returns residuals and the detected product.

    With A_k = P(f_k, .)/(-sqrt2) the maps V_0^* -> N^* for the basis f_k of
    V_+^*, K_2 = A_1^T A_2 and K_3 = A_1^T A_3 act on V_0^* as left
    multiplication by j and k; z = rho(q) z_0 then defines the isometry
    V_0^* -> H, and x z fixes V_+^* -> Im H with f_1 -> i.
    """
    from .octonions import quat_mul
    rng = np.random.default_rng(0) if rng is None else rng
    t = vr.tensor
    # bilinear pieces: p_j(v, v) = 2 x^T B*_j z + 2 y^T C*_j z on V (j = 1..4)
    bx = [t.B[j][:3, :4] for j in range(1, 5)]
    cy = [t.C[j][:3, :4] for j in range(1, 5)]
    # A_k: z -> (2 f_k^T B*_j z)_j / (-sqrt2)
    amaps = [np.array([2 * bx[j][k] for j in range(4)]) / -np.sqrt(2.0) for k in range(3)]
    bmaps = [np.array([2 * cy[j][k] for j in range(4)]) / -np.sqrt(2.0) for k in range(3)]
    k2 = amaps[0].T @ amaps[1]
    k3 = amaps[0].T @ amaps[2]
    rho = {0: np.eye(4), 1: k2 @ k3, 2: k2, 3: k3}
    z0 = np.eye(4)[0]
    psi_inv = np.column_stack([rho[i] @ z0 for i in range(4)])   # H -> V_0^*
    psi = psi_inv.T
    chi = _quat_left([0, 1, 0, 0]) @ psi @ amaps[0].T            # N^* -> H
    phi = np.array([[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float).T  # f_k -> i, k, -j
    phi_y = np.column_stack([chi @ bm @ psi_inv @ np.eye(4)[0] for bm in bmaps])
    iso = {
        "psi": float(np.abs(psi @ psi.T - np.eye(4)).max()),
        "chi": float(np.abs(chi @ chi.T - np.eye(4)).max()),
        "phi_y": float(np.abs(phi_y.T @ phi_y - np.eye(3)).max() + np.abs(phi_y[0]).max()),
    }
    res = {"yz": 0.0, "zy": 0.0}
    for _ in range(samples):
        v = random_unit(10, rng)
        x, y, z = v[:3], v[3:6], v[6:]
        lhs = chi @ vr.p(v)[1:5]
        qx, qy, qz = phi @ x, phi_y @ y, psi @ z
        base = quat_mul(qx, qz)
        res["yz"] = max(res["yz"], float(np.abs(lhs + np.sqrt(2.0) * (base + quat_mul(qy, qz))).max()))
        res["zy"] = max(res["zy"], float(np.abs(lhs + np.sqrt(2.0) * (base + quat_mul(qz, qy))).max()))
    detected = min(res, key=res.get)
    return {"residual_yz": res["yz"], "residual_zy": res["zy"], "isometry_defects": iso,
            "detected": detected}


def product_side_by_commutators(vr):
    """Frame-free detection: with y o z = z y the maps B_1^T B_l commute with
    the A_1^T A_k; with y o z = y z they lie in the algebra the A_1^T A_k span."""
    t = vr.tensor
    amaps = [np.array([t.B[j][k, :4] for j in range(1, 5)]) for k in range(3)]
    bmaps = [np.array([t.C[j][k, :4] for j in range(1, 5)]) for k in range(3)]
    ks = [amaps[0].T @ a for a in amaps[1:]]
    ls = [bmaps[0].T @ b for b in bmaps[1:]]
    scale = max(float(np.abs(m).max()) for m in ks + ls)
    comm = max(float(np.abs(k @ l - l @ k).max()) for k in ks for l in ls) / scale
    span = np.array([m.ravel() for m in [np.eye(4) * scale, ks[0], ks[1], ks[0] @ ks[1] / scale]]).T
    inside = 0.0
    for l in ls:
        c = np.linalg.lstsq(span, l.ravel(), rcond=None)[0]
        inside = max(inside, float(np.abs(span @ c - l.ravel()).max()) / scale)
    return {"commutator": comm, "outside_left_algebra": inside,
            "detected": "zy" if comm < inside else "yz"}
