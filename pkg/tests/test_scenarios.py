import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from models.errors import ConfigError, RunawayError
from models.units import Regime, RegimeKind, make_unit_system, rayleigh_length
from potentials.fields import PotentialField
from scenarios import builders
from scenarios.builders import (
    ScenarioConfig,
    build_launch_front,
    run_scenario,
    run_scenarios,
    with_regime,
)
from scenarios.reference import (
    fraunhofer_spacing,
    gaussian_waist_reference,
    paraxial_ray_family,
    paraxial_uncertainty_product,
)
from utils.trajectory_io import trajectory_frame

SHORT = ScenarioConfig(n_rays=51, z_max_rayleigh=0.3, snapshot_every=1)


def max_gap(a, b):
    """Largest distance between the same ray at the same stored time"""
    k = min(len(a), len(b))
    pa, pb = a.paths(), b.paths()
    assert_allclose(pa["t"][:k], pb["t"][:k], rtol=1e-12)
    return float(np.max(np.hypot(pa["x"][:k] - pb["x"][:k], pa["z"][:k] - pb["z"][:k])))


def straight_line_deviation(bundle):
    paths = bundle.paths()
    return float(np.max(np.abs(paths["x"] - paths["x"][0])))


def test_waist_reference(beam_units):
    assert gaussian_waist_reference(0.0, beam_units) == pytest.approx(1.0)
    z_r = rayleigh_length(beam_units)
    assert gaussian_waist_reference(z_r, beam_units) == pytest.approx(math.sqrt(2))
    assert gaussian_waist_reference(15707.96, beam_units) == pytest.approx(1.41421, rel=1e-5)
    assert_allclose(gaussian_waist_reference(np.array([0.0, z_r]), beam_units), [1.0, math.sqrt(2)])


def test_paraxial_family_follows_the_waist_line(beam_units):
    z = np.linspace(0, 3 * rayleigh_length(beam_units), 7)
    x, px = paraxial_ray_family(1.0, z, beam_units)
    assert_allclose(x, gaussian_waist_reference(z, beam_units))
    assert px[0] == 0.0
    assert paraxial_uncertainty_product(3 * rayleigh_length(beam_units), beam_units) == \
        pytest.approx(1.5)
    assert fraunhofer_spacing(40000.0, 8.0, beam_units) == pytest.approx(1.0)


def test_gaussian_launch_front(beam_units):
    front = build_launch_front(ScenarioConfig(), beam_units)
    assert len(front) == 201
    assert front.R[100] == 1.0
    assert front.x[100] == 0.0
    assert front.R[125] == pytest.approx(math.exp(-1), rel=1e-12)
    assert_allclose(front.x, -front.x[::-1], rtol=0, atol=0)
    assert np.all(front.px == 0.0) and np.all(front.pz == beam_units.p0)
    assert front.Q[100] == pytest.approx(1.0, rel=1e-9)


def test_double_slit_launch_front(beam_units):
    cfg = ScenarioConfig(scenario="double_slit", n_rays=401, half_width=8.0)
    front = build_launch_front(cfg, beam_units)
    assert front.R.max() == pytest.approx(1.0)
    assert front.R[200] <= 1e-8
    assert front.R[np.argmin(np.abs(front.x - 4.0))] == pytest.approx(1.0, abs=1e-6)


def test_near_field_double_slit_run_completes():
    cfg = ScenarioConfig(scenario="double_slit", n_rays=201, half_width=8.0, z_max_rayleigh=0.8,
                         slit_width=2.0, slit_separation=8.0, edge_order=2, snapshot_every=50)
    bundle = run_scenario(cfg)
    stats = bundle.stats
    final = bundle.snapshots[-1]
    assert final.z[100] >= 0.8 * rayleigh_length(bundle.units)
    assert stats["max_flux_drift"] <= 1e-12
    assert stats["max_mirror_asymmetry"] <= 1e-8
    assert stats["max_energy_residual"] <= 1e-6
    assert stats["caustic_warnings"] == 0
    # Inner edges of the two slits are still apart
    assert np.all(np.diff(final.x[final.lit]) > 0)
    assert not final.lit[100]


def test_single_slit_edges(beam_units):
    cfg = ScenarioConfig(scenario="single_slit", n_rays=201, half_width=4.0, slit_width=2.0)
    front = build_launch_front(cfg, beam_units)
    at_edge = np.argmin(np.abs(front.x - 1.0))
    assert front.R[at_edge] == pytest.approx(math.exp(-1), rel=1e-9)
    assert front.R[0] < 1e-8


@pytest.mark.parametrize("changes, key", [
    ({"scenario": "triple_slit"}, "scenario.name"),
    ({"n_rays": 50}, "scenario.n_rays"),
    ({"n_rays": 49}, "scenario.n_rays"),
    ({"half_width": 2.0}, "scenario.half_width"),
    ({"z_max_rayleigh": 0.0}, "scenario.z_max_rayleigh"),
    ({"scenario": "double_slit", "slit_width": 9.0}, "scenario.slit_separation"),
    ({"edge_order": 3}, "scenario.edge_order"),
    ({"snapshot_every": 0}, "output.snapshot_every"),
    ({"dt": -1.0}, "scenario.dt"),
])
def test_invalid_scenarios(changes, key):
    with pytest.raises(ConfigError) as excinfo:
        ScenarioConfig(**changes)
    assert excinfo.value.key == key


def test_slit_half_width_may_be_narrow():
    assert ScenarioConfig(scenario="single_slit", half_width=2.0).half_width == 2.0


def test_eikonal_run_is_straight():
    bundle = run_scenario(with_regime(SHORT, eikonal=True))
    assert straight_line_deviation(bundle) == 0.0
    assert bundle.stats["max_speed_drift"] == 0.0


def test_short_gaussian_run_statistics():
    bundle = run_scenario(SHORT)
    u = bundle.units
    stats = bundle.stats
    assert bundle.snapshots[-1].z[25] >= 0.3 * rayleigh_length(u)
    assert len(bundle) == stats["steps"] + 1
    assert stats["max_flux_drift"] <= 1e-12
    assert stats["max_speed_drift"] <= 1e-8
    assert stats["max_mirror_asymmetry"] <= 1e-8
    assert stats["max_energy_residual"] <= 1e-6
    assert stats["caustic_warnings"] == 0
    assert bundle.echo["scenario"] == "gaussian"
    assert bundle.launch_flux.shape == (51,)


def test_snapshot_cadence_keeps_final_front():
    bundle = run_scenario(ScenarioConfig(n_rays=51, z_max_rayleigh=0.05, snapshot_every=7))
    steps = bundle.stats["steps"]
    assert len(bundle) == 1 + steps // 7 + (1 if steps % 7 else 0)
    assert bundle.times[-1] == pytest.approx(steps * bundle.stats["dt"])


def test_eikonal_convergence():
    base = ScenarioConfig(n_rays=51, z_max_rayleigh=0.5, snapshot_every=50)
    deviations = [straight_line_deviation(run_scenario(with_regime(base, wave_coupling=q)))
                  for q in (1.0, 0.1, 0.01, 0.0)]
    assert deviations[0] > deviations[1] > deviations[2] > deviations[3]
    assert deviations[3] == 0.0


def test_relativistic_run_reduces_to_nonrelativistic():
    classical = run_scenario(SHORT)
    dt = classical.stats["dt"]
    gaps = []
    for ratio in (0.1, 0.05):
        cfg = ScenarioConfig(n_rays=51, z_max_rayleigh=0.3, snapshot_every=1, dt=dt,
                             regime=Regime(RegimeKind.RELATIVISTIC), pc_over_rest_energy=ratio)
        gaps.append(max_gap(run_scenario(cfg), classical))
    assert 3.0 <= gaps[0] / gaps[1] <= 5.0


def test_massless_particles_match_optics_in_a_weak_field():
    ramp = PotentialField.linear_ramp(slope_x=0.01)
    massless = ScenarioConfig(n_rays=51, z_max_rayleigh=0.25, snapshot_every=1, rest_mass=0.0,
                              regime=Regime(RegimeKind.RELATIVISTIC), potential=ramp)
    optics = with_regime(massless, kind=RegimeKind.OPTICS)
    a, b = run_scenario(massless).paths(), run_scenario(optics).paths()

    scale = np.max(np.abs(a["x"]))
    worst = 0.0
    for i in range(51):
        inside = a["z"][:, i] <= b["z"][-1, i]
        x_optics = np.interp(a["z"][inside, i], b["z"][:, i], b["x"][:, i])
        worst = max(worst, float(np.max(np.abs(a["x"][inside, i] - x_optics))))
    assert worst <= 1e-6 * scale
    assert np.max(np.abs(a["px"][-1])) > 0


def test_optics_and_particles_share_geometry():
    particles = run_scenario(ScenarioConfig(n_rays=51, z_max_rayleigh=0.5, snapshot_every=10))
    light = run_scenario(with_regime(
        ScenarioConfig(n_rays=51, z_max_rayleigh=0.5, snapshot_every=10), kind=RegimeKind.OPTICS))
    k = min(len(particles), len(light))
    zr_p = rayleigh_length(particles.units)
    zr_l = rayleigh_length(light.units)
    pp, pl = particles.paths(), light.paths()
    assert_allclose(pp["x"][:k], pl["x"][:k], rtol=1e-9, atol=1e-9)
    assert_allclose(pp["z"][:k] / zr_p, pl["z"][:k] / zr_l, rtol=1e-9, atol=1e-12)


def test_concurrent_runs_are_identical():
    first, second = run_scenarios([SHORT, SHORT])
    csv_a = trajectory_frame(first).to_csv(index=False, lineterminator="\n")
    csv_b = trajectory_frame(second).to_csv(index=False, lineterminator="\n")
    assert csv_a == csv_b


def test_runaway_guard(monkeypatch):
    monkeypatch.setattr(builders, "MAX_STEPS", 3)
    with pytest.raises(RunawayError):
        run_scenario(SHORT)


def test_units_fold_in_the_launch_potential():
    cfg = ScenarioConfig(potential=PotentialField.linear_ramp(offset=2.0))
    u = cfg.units()
    assert u.E == pytest.approx(make_unit_system(2e-4, RegimeKind.NONRELATIVISTIC).E + 2.0)
