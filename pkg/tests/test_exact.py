from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hodge_neron.exact import (S, I, W, WB, ONE, ZERO, Matrix, Subspace, parse_scalar, format_scalar,
                               nilpotent_exp, z_sym, s_sym, to_sympy, from_sympy)

fr = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(S, fr, fr)
small = st.integers(-3, 3)


def mat(draw_rows):
    return Matrix(draw_rows, len(draw_rows[0]))


int_mats = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if not b.is_zero():
        assert (a / b) * b == a


@given(gauss, gauss)
def test_conj_is_ring_involution(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a
    assert (a * a.conj()).is_real()


@given(gauss)
def test_format_parse_roundtrip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_formal_symbols():
    x = (W + 2 * z_sym(1)) * (WB - s_sym(2))
    assert parse_scalar(str(x)) == x
    y = W * WB + 3 * I * W
    assert y.conj().conj() == y and y.conj() == W * WB - 3 * I * WB
    assert W.conj() == WB
    assert from_sympy(to_sympy(x)) == x
    assert (W * WB).instantiate(S(1, 1)) == S(2)


def test_floats_rejected():
    with pytest.raises(ValueError):
        parse_scalar("0.5")


@given(int_mats)
def test_matrix_inverse_and_kernel(rows):
    A = mat(rows)
    d = A.det()
    if d.is_zero():
        K = A.kernel()
        assert K and all(all(x.is_zero() for x in A @ v) for v in K)
        assert A.rank() + len(K) == A.ncols
    else:
        assert A @ A.inverse() == Matrix.identity(A.nrows)


@given(int_mats, int_mats)
def test_det_multiplicative(r1, r2):
    A, B = mat(r1), mat(r2)
    if A.nrows == B.nrows:
        assert (A @ B).det() == A.det() * B.det()


@given(st.integers(2, 5), st.data())
def test_exp_of_nilpotent(n, data):
    vals = data.draw(st.lists(small, min_size=n * n, max_size=n * n))
    A = Matrix([[vals[i * n + j] if j > i else 0 for j in range(n)] for i in range(n)], n)
    assert nilpotent_exp(A) @ nilpotent_exp(-A) == Matrix.identity(n)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_subspace_dimension_formula(a, b):
    U = Subspace([tuple(S(x) for x in v) for v in a], 4)
    V = Subspace([tuple(S(x) for x in v) for v in b], 4)
    assert (U + V).dim + U.intersect(V).dim == U.dim + V.dim
    assert (U + V).contains_space(U) and U.contains_space(U.intersect(V))
