from fractions import Fraction

import pytest

from hodge_neron.exact import Matrix, Subspace, S, I, W, ONE, ZERO, z_sym, s_sym, unit
from hodge_neron.orbit import (validate_orbit, eval_period, sigma, pairing_row, section_family, estimate_scan,
                               nplus_decay, limit_triple, z_norm, b_norm, plateau, first_plateau_level,
                               horizontality_residue)
from hodge_neron.errors import PreconditionViolated
from helpers import ex2, scenario

Z12 = z_sym(1) + z_sym(2)


@pytest.mark.parametrize("name", ["example2", "example3", "torsion"])
def test_validate_bundled_orbits(name):
    assert validate_orbit(scenario(name).orbit).ok


def test_example2_period_map():
    D = ex2()
    Phi0 = eval_period(D)[0]
    assert Phi0 == Subspace([(Z12, Z12 * W, ONE, W), (ONE, W, ZERO, ZERO)], 4)


def test_example3_period_map():
    D = scenario("example3").orbit
    assert eval_period(D)[0] == Subspace([(Z12, ONE)], 2)


def test_sections_and_pairing_rows_example2():
    D = ex2()
    v = (ZERO, ZERO, ONE, W)
    assert sigma(D, (), v) == (Z12, Z12 * W, ONE, W)
    assert sigma(D, (2,), v) == (ONE / s_sym(2), W / s_sym(2), ZERO, ZERO)
    # Q(sigma, h) = row . h with Q(x, y) = x^T G y
    row = pairing_row(D, (), v)
    assert row == (-ONE, -W, Z12, Z12 * W)
    with pytest.raises(PreconditionViolated):
        sigma(D, (1,), (ONE, W, ZERO, ZERO))


def test_section_family_example2():
    D = ex2()
    fam = section_family(D, True)
    assert sorted(I for I, v in fam) == [(), (), (1,), (2,)]
    assert len(section_family(D, False)) == 2


def test_horizontality_of_bundled_orbits():
    for name in ("example2", "example3"):
        assert horizontality_residue(scenario(name).orbit)


def test_plateau_helpers():
    assert plateau({10: 1.0, 20: 2.0, 40: 2.1})
    assert not plateau({10: 1.0, 20: 2.0, 40: 4.0})
    assert first_plateau_level({10: 1.0, 20: 2.0, 40: 2.1, 80: 2.1}) == 20


def test_z_norm_grows_linearly():
    D = scenario("example3").orbit
    h = unit(2, 1)
    assert z_norm(D, (10, 10), h) == pytest.approx(20.0)
    assert z_norm(D, (10, 10), unit(2, 0)) == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["example2", "example3"])
def test_estimate_scan_bounded(name):
    D = scenario(name).orbit
    rep = estimate_scan(D)
    assert rep.ok, rep.lines()
    assert rep.data["C"] < float("inf")


@pytest.mark.parametrize("name", ["example2", "example3"])
def test_nplus_decay_bounded(name):
    assert nplus_decay(scenario(name).orbit).ok


def test_limit_triple_scales_inversely():
    D = scenario("example3").orbit
    T1 = limit_triple(D, (1, 1))
    T2 = limit_triple(D, (2, 2))
    assert T2.Nplus.scale(2) == T1.Nplus
