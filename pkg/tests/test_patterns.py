import numpy as np
from hypothesis import given, settings, strategies as st

from fkmverify.patterns import apply_signed_permutation, match_signed_permutation
from fkmverify.worked import worked_templates


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_recovers_random_signed_permutation(seed):
    rng = np.random.default_rng(seed)
    tmpl = worked_templates()
    perms = tuple(rng.permutation(n) for n in tmpl.shape)
    signs = tuple(rng.choice([-1.0, 1.0], n) for n in tmpl.shape)
    moved = 2.5 * apply_signed_permutation(tmpl, perms, signs)
    m = match_signed_permutation(moved, tmpl)
    assert m.found and abs(abs(m.scale) - 0.4) < 1e-12 and m.residual < 1e-12


def test_rejects_different_support():
    tmpl = worked_templates()
    other = tmpl.copy()
    assert other[0, 0, 0] == 0
    other[0, 0, 0] = 1.0
    assert not match_signed_permutation(other, tmpl).found


def test_rejects_shape_mismatch():
    assert not match_signed_permutation(np.eye(2), np.eye(3)).found


def test_rejects_wrong_sign_pattern():
    # a 2x2 rotation cannot be signed-permuted into the identity
    assert not match_signed_permutation(np.array([[1.0, 1.0], [1.0, -1.0]]),
                                        np.array([[1.0, 1.0], [1.0, 1.0]])).found
