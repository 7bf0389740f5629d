"""Matching arrays up to signed permutations of each axis and a global scale.

The support of an array is encoded as a graph (one node per index of every
axis, one node per nonzero entry joined to its indices); graph isomorphisms
that preserve node kinds give the candidate permutations, and the signs are
then solved as a linear system over GF(2).
"""

from dataclasses import dataclass
from itertools import islice

import networkx as nx
import numpy as np


@dataclass
class SignedPermutationMatch:
    found: bool
    scale: float = 0.0
    residual: float = float("inf")
    perms: tuple = ()
    signs: tuple = ()


def _support_graph(arr, tol):
    g = nx.Graph()
    for ax, n in enumerate(arr.shape):
        for i in range(n):
            g.add_node(("ax", ax, i), kind=("ax", ax))
    for idx in zip(*np.nonzero(np.abs(arr) > tol)):
        node = ("entry",) + tuple(int(i) for i in idx)
        g.add_node(node, kind="entry")
        for ax, i in enumerate(idx):
            g.add_edge(node, ("ax", ax, int(i)))
    return g


def _solve_gf2(rows, rhs, nvars):
    """Solve rows . s = rhs over GF(2); rows are lists of variable indices."""
    mat = np.zeros((len(rows), nvars + 1), dtype=np.uint8)
    for r, (vars_, b) in enumerate(zip(rows, rhs)):
        for v in vars_:
            mat[r, v] ^= 1
        mat[r, -1] = b
    piv_row = 0
    pivots = []
    for c in range(nvars):
        hit = next((r for r in range(piv_row, len(rows)) if mat[r, c]), None)
        if hit is None:
            continue
        mat[[piv_row, hit]] = mat[[hit, piv_row]]
        for r in range(len(rows)):
            if r != piv_row and mat[r, c]:
                mat[r] ^= mat[piv_row]
        pivots.append(c)
        piv_row += 1
    if np.any(mat[piv_row:, -1]):
        return None
    sol = np.zeros(nvars, dtype=np.uint8)
    for r, c in enumerate(pivots):
        sol[c] = mat[r, -1]
    return sol


def apply_signed_permutation(arr, perms, signs):
    """out[i_0, i_1, ...] = prod s_k[i_k] * arr[perm_0[i_0], perm_1[i_1], ...]."""
    out = arr[np.ix_(*perms)]
    for ax, s in enumerate(signs):
        shape = [1] * arr.ndim
        shape[ax] = -1
        out = out * np.asarray(s).reshape(shape)
    return out


def match_signed_permutation(arr, template, tol=1e-9, max_candidates=20000):
    """Find signed permutations of every axis and a scale with scale*P(arr) = template."""
    arr = np.asarray(arr, dtype=float)
    template = np.asarray(template, dtype=float)
    if arr.shape != template.shape:
        return SignedPermutationMatch(False)
    big = max(np.abs(arr).max(initial=0), 1e-300)
    ga = _support_graph(arr, tol * big)
    gt = _support_graph(template, tol * max(np.abs(template).max(initial=0), 1e-300))
    matcher = nx.isomorphism.GraphMatcher(gt, ga, node_match=lambda u, v: u["kind"] == v["kind"])
    offsets = np.cumsum([0] + list(arr.shape))
    best = SignedPermutationMatch(False)
    for mapping in islice(matcher.isomorphisms_iter(), max_candidates):
        perms = tuple(np.array([mapping[("ax", ax, i)][2] for i in range(n)])
                      for ax, n in enumerate(arr.shape))
        moved = arr[np.ix_(*perms)]
        nz = list(zip(*np.nonzero(np.abs(template) > 0)))
        if not nz:
            return SignedPermutationMatch(True, 1.0, float(np.abs(arr).max(initial=0)), perms,
                                          tuple(np.ones(n) for n in arr.shape))
        ratios = np.array([template[i] / moved[i] for i in nz])
        mags = np.abs(ratios)
        if np.ptp(mags) > 1e-6 * mags.max():
            continue
        rows = [[offsets[ax] + int(i) for ax, i in enumerate(idx)] for idx in nz]
        rhs = [int(r < 0) ^ int(ratios[0] < 0) for r in ratios]
        sol = _solve_gf2(rows, rhs, int(offsets[-1]))
        if sol is None:
            continue
        signs = tuple(1.0 - 2.0 * sol[offsets[ax]:offsets[ax + 1]] for ax in range(arr.ndim))
        out = apply_signed_permutation(arr, perms, signs)
        scale = float((out * template).sum() / (out * out).sum())
        resid = float(np.abs(scale * out - template).max())
        if resid < best.residual:
            best = SignedPermutationMatch(resid < tol * max(1.0, np.abs(template).max()),
                                          scale, resid, perms, signs)
            if best.found:
                return best
    return best
