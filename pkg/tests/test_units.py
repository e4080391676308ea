import math

import pytest

from models.errors import UnitSystemError
from models.units import Regime, RegimeKind, make_unit_system, rayleigh_length


def test_beam_ratio_sets_epsilon_and_momentum():
    u = make_unit_system(2e-4, RegimeKind.NONRELATIVISTIC)
    assert u.epsilon == pytest.approx(3.1831e-5, rel=1e-4)
    assert u.p0 == pytest.approx(2 * math.pi / 2e-4, rel=1e-12)
    assert u.hbar / (u.p0 * u.w0) == pytest.approx(u.epsilon, rel=1e-12)


def test_epsilon_is_one_at_two_pi():
    assert make_unit_system(2 * math.pi, "optics").epsilon == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("ratio, expected", [
    (2e-4, 15707.96),
    (math.pi, 1.0),
    (2 * math.pi, 0.5),
])
def test_rayleigh_length(ratio, expected):
    u = make_unit_system(ratio, RegimeKind.NONRELATIVISTIC)
    assert rayleigh_length(u) == pytest.approx(expected, rel=1e-6)


def test_energy_matches_each_regime():
    nonrel = make_unit_system(2e-4, RegimeKind.NONRELATIVISTIC)
    assert nonrel.E == pytest.approx(nonrel.p0 ** 2 / 2)

    rel = make_unit_system(2e-4, RegimeKind.RELATIVISTIC, 0.1)
    assert rel.p0 / (rel.mass * rel.c) == pytest.approx(0.1)
    assert rel.E == pytest.approx(math.hypot(rel.p0 * rel.c, rel.c ** 2))

    massless = make_unit_system(2e-4, RegimeKind.RELATIVISTIC, rest_mass=0.0)
    assert massless.c == 1.0
    assert massless.E == pytest.approx(massless.p0)

    optics = make_unit_system(2e-4, RegimeKind.OPTICS)
    assert optics.E == pytest.approx(optics.c * optics.k0)

    for u in (nonrel, rel, massless, optics):
        assert u.launch_energy_residual() < 1e-12


def test_launch_potential_is_folded_into_energy():
    u = make_unit_system(2e-4, RegimeKind.NONRELATIVISTIC, launch_potential=5.0)
    assert u.E == pytest.approx(u.p0 ** 2 / 2 + 5.0)
    assert u.launch_energy_residual() < 1e-12


@pytest.mark.parametrize("ratio", [0, -1.0, math.nan, math.inf, "2e-4"])
def test_bad_beam_ratio_is_rejected(ratio):
    with pytest.raises(UnitSystemError):
        make_unit_system(ratio, RegimeKind.NONRELATIVISTIC)


def test_relativistic_needs_a_momentum_scale():
    with pytest.raises(UnitSystemError):
        make_unit_system(2e-4, RegimeKind.RELATIVISTIC)
    with pytest.raises(UnitSystemError):
        make_unit_system(2e-4, RegimeKind.RELATIVISTIC, 0.0)


def test_unknown_regime():
    with pytest.raises(UnitSystemError, match="unknown regime"):
        make_unit_system(2e-4, "quantum")


def test_eikonal_switches_coupling_off():
    assert Regime(RegimeKind.OPTICS, eikonal=True, wave_coupling=0.5).coupling == 0.0
    assert Regime("optics", wave_coupling=0.5).coupling == 0.5
    with pytest.raises(ValueError):
        Regime(wave_coupling=-1.0)
