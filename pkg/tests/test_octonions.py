import numpy as np
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from fkmverify.linalg import exact
from fkmverify.octonions import (OrthogonalMultiplication, basis_vector, hurwitz_residual,
                                 mult_matrix, oct_conj, oct_mul, quat_mul,
                                 verify_orthogonal_multiplication)

rationals = st.builds(mpq, st.integers(-6, 6), st.integers(1, 5))
octs = st.lists(rationals, min_size=8, max_size=8).map(lambda v: np.array(v, dtype=object))


def test_e1_e4_is_e5():
    assert np.array_equal(oct_mul(basis_vector(1), basis_vector(4)), basis_vector(5))


def test_quaternion_units():
    i, j, k = np.eye(4)[1], np.eye(4)[2], np.eye(4)[3]
    assert np.allclose(quat_mul(i, j), k)
    assert np.allclose(quat_mul(j, i), -k)


def test_imaginary_units_square_to_minus_one():
    for a in range(1, 8):
        e = basis_vector(a)
        assert np.array_equal(oct_mul(e, e), -basis_vector(0))


@given(octs, octs)
@settings(max_examples=50, deadline=None)
def test_norm_is_multiplicative(x, y):
    xy = oct_mul(x, y)
    assert xy @ xy == (x @ x) * (y @ y)


@given(octs, octs)
@settings(max_examples=50, deadline=None)
def test_alternative_law(x, y):
    assert np.all(oct_mul(oct_mul(x, x), y) == oct_mul(x, oct_mul(x, y)))


@given(octs)
@settings(max_examples=30, deadline=None)
def test_conjugate_gives_norm(x):
    p = oct_mul(x, oct_conj(x))
    assert p[0] == x @ x and all(v == 0 for v in p[1:])


def test_octonion_multiplication_satisfies_hurwitz():
    for side in ("left", "right"):
        om = OrthogonalMultiplication(tuple(exact(mult_matrix(a, side)) for a in range(8)))
        assert hurwitz_residual(om.mats) == 0
        assert verify_orthogonal_multiplication(om)["pass"]


def test_hurwitz_negative_control():
    mats = [np.eye(4), 2 * np.eye(4)]
    res = verify_orthogonal_multiplication(OrthogonalMultiplication(tuple(mats)))
    assert not res["pass"] and res["agree"]
