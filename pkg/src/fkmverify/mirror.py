"""Mirror points of a point of the unit normal bundle of M_+ and the
conversion of second-form data between them.

For (x, n_0) on UN(M_+): x^# = n_0 with n^# = x, and
x^* = (x + n_0)/sqrt2 on M_- with n^* = (x - n_0)/sqrt2.
"""

from dataclasses import dataclass

import numpy as np

from .fkm import FocalFrame, tangent_projector
from .forms import SecondFormTensor, block_decompose

SQRT2 = np.sqrt(2.0)


def transport_sharp(t):
    """Data at (x^#, n^#) = (n_0, x).

    Normals at x^# are (x, e_1..e_p) with e_p the E_0 basis at x; E_+ and
    E_- are shared and the new E_0 is spanned by n_1..n_k.  Blocks:
    A^#_p = (S^p_{alpha mu}), B^#_p = (S^a_{alpha p}), C^#_p = -(S^a_{mu p}).
    """
    if t.mirror is None:
        raise ValueError("tensor lacks the mirror components S^p_{alpha mu}")
    k = t.k
    npz = t.B[0].shape[1]
    zp = np.zeros_like(t.A[0])
    A = [zp] + [t.mirror[p] for p in range(npz)]
    B = [np.zeros((t.B[0].shape[0], k))]
    C = [np.zeros((t.C[0].shape[0], k))]
    for p in range(npz):
        B.append(np.column_stack([t.B[a][:, p] for a in range(1, k + 1)]))
        C.append(-np.column_stack([t.C[a][:, p] for a in range(1, k + 1)]))
    mirror = [t.A[a] for a in range(1, k + 1)]
    return SecondFormTensor(A, B, C, np.eye(A[0].shape[0]), np.eye(A[0].shape[1]),
                            np.eye(k), mirror=mirror, level=t.level)


def transport_star(t):
    """Data at (x^*, n^*) on M_-.

    Normals at x^* are (n^*, e_1..e_8) with e_alpha the E_+ basis at x;
    E_+^* = span(n_1..n_7), E_-^* = E_0, E_0^* = E_-.  For alpha >= 1:
    A^*_alpha = -sqrt2 (S^a_{alpha p}), B^*_alpha = -(1/sqrt2)(S^a_{alpha mu}),
    C^*_alpha = -(1/sqrt2)(S^p_{alpha mu}).
    """
    if t.mirror is None:
        raise ValueError("tensor lacks the mirror components S^p_{alpha mu}")
    k = t.k
    npl, nmi = t.A[0].shape
    npz = t.B[0].shape[1]
    A = [np.zeros((k, npz))]
    B = [np.zeros((k, nmi))]
    C = [np.zeros((npz, nmi))]
    for al in range(npl):
        A.append(-SQRT2 * np.array([[t.B[a][al, p] for p in range(npz)] for a in range(1, k + 1)]))
        B.append(-np.array([[t.A[a][al, mu] for mu in range(nmi)] for a in range(1, k + 1)]) / SQRT2)
        C.append(-np.array([[t.mirror[p][al, mu] for mu in range(nmi)] for p in range(npz)]) / SQRT2)
    return SecondFormTensor(A, B, C, np.eye(k), np.eye(npz), np.eye(nmi), level=-t.level)


def _frame(point, normals, plus, minus, zero, level):
    proj = {"plus": plus @ plus.T, "minus": minus @ minus.T, "zero": zero @ zero.T,
            "tangent": tangent_projector(point, normals)}
    return FocalFrame(point=point, normals=normals, level=level, E_plus=plus, E_minus=minus,
                      E_zero=zero, projectors=proj)


def sharp_frame(frame):
    """Frame at x^# assembled from the frame at x (no eigen-decomposition)."""
    n = frame.normals
    return _frame(n[:, 0], np.column_stack([frame.point, frame.E_zero]), frame.E_plus,
                  frame.E_minus, n[:, 1:], frame.level)


def star_frame(frame):
    """Frame at x^* assembled from the frame at x."""
    x, n0 = frame.point, frame.normals[:, 0]
    xs, ns = (x + n0) / SQRT2, (x - n0) / SQRT2
    return _frame(xs, np.column_stack([ns, frame.E_plus]), frame.normals[:, 1:],
                  frame.E_zero, frame.E_minus, -frame.level)


def tensor_difference(t1, t2):
    """Largest entrywise difference between the blocks of two tensors."""
    worst = 0.0
    for x, y in ((t1.A, t2.A), (t1.B, t2.B), (t1.C, t2.C)):
        for a, b in zip(x, y):
            worst = max(worst, float(np.abs(a - b).max(initial=0.0)))
    if t1.mirror is not None and t2.mirror is not None:
        for a, b in zip(t1.mirror, t2.mirror):
            worst = max(worst, float(np.abs(a - b).max(initial=0.0)))
    return worst


@dataclass
class MirrorTriple:
    frame: FocalFrame
    tensor: SecondFormTensor
    sharp: SecondFormTensor
    star: SecondFormTensor

    @property
    def x_sharp(self):
        return self.frame.normals[:, 0], self.frame.point

    @property
    def x_star(self):
        x, n0 = self.frame.point, self.frame.normals[:, 0]
        return (x + n0) / SQRT2, (x - n0) / SQRT2


def mirror_triple(poly, frame):
    t = block_decompose(poly, frame, with_mirror=True)
    return MirrorTriple(frame, t, transport_sharp(t), transport_star(t))


def direct_sharp(poly, frame):
    return block_decompose(poly, sharp_frame(frame), with_mirror=True)


def direct_star(poly, frame):
    return block_decompose(poly, star_frame(frame))
