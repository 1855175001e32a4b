from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hodge_neron.exact import S, ONE, ZERO, z_sym, vis_zero
from hodge_neron.normal_function import (validate_mixed_orbit, q_prime_rows, v0_lift, v0_unique, v0_plateau,
                                         singularity_class, vrone_conditions, vrone_check, graph_closure_fiber,
                                         mhs_hodge_property)
from hodge_neron.errors import ValidationError
from hodge_neron.scenario import load_scenario
from helpers import scenario

pos = st.fractions(min_value=Fraction(1, 8), max_value=64, max_denominator=8)
ints = st.integers(-6, 6)


@pytest.fixture(scope="module")
def X():
    return scenario("example3").mixed


@pytest.fixture(scope="module")
def XT():
    return scenario("torsion").mixed


def test_validate(X, XT):
    assert validate_mixed_orbit(X).ok
    assert validate_mixed_orbit(XT).ok


def test_q_prime_row(X):
    rows, labels = q_prime_rows(X)
    z1, z2 = z_sym(1), z_sym(2)
    assert labels == ["e0"]
    assert rows == [[ONE, -z1 - z2, -z1 + z2]]


def test_restriction_sum_vanishes(X):
    v = (ZERO, ZERO, ONE)
    assert vis_zero(X.N_sum([1, 1]) @ v)


@given(pos, pos)
def test_v0_axioms(y1, y2):
    sc = scenario("example3")
    X = sc.mixed
    y = (y1, y2)
    v0 = v0_lift(X, y)
    assert vis_zero(X.N_sum([S(y1), S(y2)]) @ v0)
    assert X.M[0].contains(v0) and X.F[0].contains(v0)
    assert v0[-1] == ONE and all(a.is_real() for a in v0)
    assert v0_unique(X, y)


def test_v0_value(X):
    assert v0_lift(X, (3, 1)) == (ZERO, S(Fraction(-1, 2)), ONE)


def test_v0_plateau(X):
    res = v0_plateau(X)
    assert res["bounded"] and res["C"] < float("inf")


def test_singularity_classes(X, XT):
    assert singularity_class(X).kind == "nontorsion"
    s = singularity_class(XT)
    assert (s.kind, s.order) == ("torsion", 2)


@given(ints, ints)
def test_singularity_invariant_under_lattice_shift(a, b):
    for name, expect in (("example3", ("nontorsion", None)), ("torsion", ("torsion", 2))):
        X = scenario(name).mixed
        s = singularity_class(X, (S(a), S(b), ONE))
        assert (s.kind, s.order) == expect


def test_closure_conditions(X, XT):
    rep = vrone_conditions(X, 2)
    assert rep.data["tested"] == 25
    assert len(rep.data["candidates"]) == 5
    assert all(c["v"][1] == "0" for c in rep.data["candidates"])
    assert not vrone_conditions(XT, 2).data["candidates"]


def test_graph_closure_example3(X):
    full = graph_closure_fiber(X, (1, 2))
    assert full["shape"] == "line" and not full["empty"]
    g2 = graph_closure_fiber(X, (2,))
    assert g2["shape"] == "discrete" and g2["forced"][1] == 1
    assert g2["limit"] == [str(-2 * z_sym(1))]
    g1 = graph_closure_fiber(X, (1,))
    assert g1["forced"][1] == -1 and g1["limit"] == [str(2 * z_sym(2))]


@pytest.mark.parametrize("stratum", [(1, 2), (1,), (2,)])
def test_graph_closure_torsion_empty(XT, stratum):
    g = graph_closure_fiber(XT, stratum)
    assert g["empty"] and g["shape"] == "empty"


def test_lambda_shifts_v0():
    X1 = load_scenario("example3", lam="1").mixed
    assert validate_mixed_orbit(X1).ok
    assert v0_lift(X1, (3, 1)) == (ONE, S(Fraction(-1, 2)), ONE)
    assert singularity_class(X1).kind == "nontorsion"


def test_hodge_class_property(X):
    from hodge_neron.exact import Matrix
    assert mhs_hodge_property(X.mhs, None)
    # a delta moving the Hodge class (0,0,1) is rejected
    assert not mhs_hodge_property(X.mhs, Matrix.elementary(3, 1, 3))
