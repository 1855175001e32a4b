import pytest

from hodge_neron.exact import Matrix, S, I, W, ONE, ZERO, s_sym, z_sym
from hodge_neron.neron import (f0m_presentation, relation_vector_check, fiber, singular_locus, laurent_terms,
                               tz_limit_points, zucker_witness, quotient_fiber, monodromy_analysis)
from hodge_neron.errors import NotQuasiUnipotent
from helpers import ex2, scenario


@pytest.fixture(scope="module")
def D():
    return ex2()


@pytest.fixture(scope="module")
def P(D):
    return f0m_presentation(D)


def test_presentation_example2(D, P):
    assert [(g.I, g.label) for g in P.generators] == [((), "e0"), ((1,), "e1"), ((2,), "e2")]
    assert len(P.relations) == 1
    r = P.relations[0]
    assert r.coeffs == [ZERO, -s_sym(1), s_sym(2)]
    assert P.exact
    assert relation_vector_check(D, P)


def test_presentation_example3():
    D = scenario("example3").orbit
    P = f0m_presentation(D)
    # F^1 = 0: no derivative sections, F_0 M is free on the canonical generator
    assert [g.I for g in P.generators] == [()] and P.relations == []
    assert relation_vector_check(D, P)


@pytest.mark.parametrize("stratum,dim,sing", [((1, 2), 3, True), ((1,), 2, False), ((2,), 2, False), ((), 2, False)])
def test_fiber_dimensions(P, stratum, dim, sing):
    fd = fiber(P, stratum=stratum)
    assert fd.vector_dim == dim and fd.singular == sing and fd.generic_rank == 2


def test_fiber_at_explicit_point(P):
    assert fiber(P, point=[ZERO, ZERO]).vector_dim == 3
    assert fiber(P, point=[S(1, 2), ZERO]).vector_dim == 2


def test_singular_locus(P):
    assert singular_locus(P) == [{"fixed": {"s1": "0", "s2": "0", "v1": "0", "v2": "0"}, "free": ["v0"]}]


def test_laurent_terms():
    t = laurent_terms(z_sym(1) / s_sym(2) + 3)
    assert t  # nonempty decomposition into monomials


def test_admissible_lattice_with_derivatives(D):
    la = tz_limit_points(D, (1, 2), True, 10)
    assert la.lattice == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert not la.extra and not la.empty
    # limit point of h = (h1, h2, 0, 0) is (-(h1 + h2 w), 0, 0)
    for h in ([1, 0, 0, 0], [0, 1, 0, 0], [2, -3, 0, 0]):
        assert [la.limit_value(g, h) for g in range(3)] == [-(h[0] + h[1] * W), ZERO, ZERO]


def test_zucker_continuous_parameter(D):
    la = tz_limit_points(D, (1, 2), False, 10)
    assert la.zucker["exists"]
    fam = next(f for f in la.zucker["families"] if f["continuous"])
    pts = zucker_witness(fam, "1/3+1/7*i", steps=4)
    assert len(pts) == 4


def test_zucker_absent_with_derivatives(D):
    assert tz_limit_points(D, (1, 2), True, 10).zucker is None


@pytest.mark.parametrize("stratum,shape", [((1, 2), (2, 2)), ((1,), (2, 1)), ((2,), (2, 1)), ((), (4, 0))])
def test_quotient_fibers(stratum, shape):
    D = scenario("example2").orbit
    q = quotient_fiber(D, stratum=stratum)
    assert (q["torus_rank"], q["vector_dim"]) == shape
    assert q["injective"] and q["compact"]


def test_monodromy_example1():
    sc = scenario("example1")
    rep = monodromy_analysis(sc.T, sc.F0_rank)
    assert rep.data["order"] == 6
    assert rep.data["invariant_lattice"] == []
    assert rep.data["det(T-id)"] == "1"
    assert rep.data["fiber"] == "C^1"
    assert sorted(rep.data["residues"]) == ["-1/6", "-5/6"]


def test_monodromy_unipotent_and_not_quasi_unipotent():
    rep = monodromy_analysis(Matrix.identity(2))
    assert rep.data["unipotent"] and len(rep.data["invariant_lattice"]) == 2
    with pytest.raises(NotQuasiUnipotent):
        monodromy_analysis(Matrix([[2, 1], [1, 1]], 2))
