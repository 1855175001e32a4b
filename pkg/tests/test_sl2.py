import pytest
from hypothesis import given, strategies as st

from hodge_neron.exact import Matrix, S, I, unit
from hodge_neron.sl2 import (Sl2Triple, grading_Y, complete_sl2, r_const, c_const, C_const, w_block,
                             solve_w_system, forward_w, primitive_decompose)
from hodge_neron.orbit import limit_triple
from hodge_neron.errors import NoTriple, IndexMismatch
from helpers import ex2, scenario
import suites


def test_r_values():
    assert r_const(1, 1, 2) == 2
    assert r_const(2, 1, 5) == 0
    assert r_const(0, 0, 7) == 1


def test_r_recursions():
    assert suites.r_recursions(12) == []


def test_string_identity_on_golden_orbits():
    bad, count = suites.r_string_identity()
    assert count > 0 and bad == []


def test_recomposition():
    assert suites.recomposition() == []


def test_c_normalization():
    assert suites.c_normalization() == []


@given(st.integers(0, 8), st.integers(0, 8))
def test_c_depends_on_string_length_only(l, b):
    if b <= l:
        assert C_const(-1, -1 - l + 1, b, 1) == C_const(-1 - l, 0, b, 1) == c_const(l, b, 1)


def test_example2_triple():
    D = ex2(I)
    T = limit_triple(D, [1, 1])
    assert T.check()
    assert T.N == Matrix.elementary(4, 1, 3, 2) + Matrix.elementary(4, 2, 4, 2)


def test_complete_sl2_rejects_wrong_grading():
    N = Matrix.elementary(2, 1, 2)
    with pytest.raises(NoTriple):
        complete_sl2(N, Matrix.identity(2))


def test_w_block_shapes():
    # (0,-1): l = 0, no equations (p >= 0) and no unknowns (q < 0)
    eqs, unk, A = w_block(0, -1)
    assert eqs == [] and unk == []
    eqs, unk, A = w_block(-1, 0)
    assert eqs == [0] and unk == [0] and A[0, 0] == 1


def test_w_roundtrip():
    bad_rt, _ = suites.w_roundtrip(100)
    assert bad_rt == []


def test_w_determinants_of_negative_blocks():
    # blocks with p, q < 0 are not unimodular in our normalization
    hn = {(-1, -1): 1}
    sol = solve_w_system(hn, {(-1, -1, 0): (S(1),)})
    assert sol.determinants[(-1, -1)] == S(0, -2)


def test_w_index_mismatch():
    with pytest.raises(IndexMismatch):
        solve_w_system({(-1, 0): 1}, {(-1, 0, 1): (S(1),)})
