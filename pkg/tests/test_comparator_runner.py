import numpy as np
import pytest

from analyzers import ComparatorAnalyzer, FringeAnalyzer
from comparator.runner import ComparatorConfig, initial_state, run_comparator, screen_bundle
from models.errors import ConfigError

SMALL_PACKET = ComparatorConfig(points=801, box_length=40.0, sigma0=1.0, k0=1.0,
                                dt=0.005, steps=200, seeds=9)


@pytest.fixture(scope="module")
def packet_run():
    return run_comparator(SMALL_PACKET)


def test_packet_run_statistics(packet_run):
    stats = packet_run.stats
    assert stats["state"] == "packet"
    assert stats["t_final"] == pytest.approx(1.0)
    assert stats["max_norm_drift"] <= 1e-8
    assert stats["energy_drift"] <= 1e-6
    assert stats["spread_relative_error"] <= 0.01
    assert stats["order_preserved"] is True
    assert stats["continuity_residual"] <= 1e-4
    assert stats["hamilton_jacobi_residual"] <= 1e-4
    assert len(packet_run.history) == 201
    assert packet_run.paths.x.shape == (201, 9)


def test_packet_seeds_drift_with_the_packet(packet_run):
    displacement = packet_run.paths.x[-1] - packet_run.paths.x[0]
    assert np.all(displacement > 0)
    assert np.mean(displacement) == pytest.approx(1.0, rel=0.05)


def test_packet_run_passes_the_analyzer(packet_run):
    assert ComparatorAnalyzer.analyze(packet_run.stats)["status"] == "OK"


def test_stationary_mode_run():
    cfg = ComparatorConfig(points=401, box_length=20.0, state="mode", modes=(1,),
                           dt=0.05, steps=100, seeds=5)
    result = run_comparator(cfg)
    assert result.stats["max_seed_displacement"] <= 1e-9
    assert "spread_relative_error" not in result.stats
    assert result.stats["max_energy_exchange_rate"] <= 1e-9
    assert ComparatorAnalyzer.analyze(result.stats)["status"] == "OK"


def test_superposition_keeps_paths_ordered():
    cfg = ComparatorConfig(points=256, box_length=10.0, state="superposition", modes=(1, 2),
                           dt=0.05, steps=300, seeds=5)
    result = run_comparator(cfg)
    assert result.stats["order_preserved"] is True
    assert result.stats["max_seed_displacement"] > 0.1
    assert result.stats["max_norm_drift"] <= 1e-8


def test_initial_states():
    packet = initial_state(SMALL_PACKET)
    assert packet.norm == pytest.approx(1.0)
    assert (packet.x_min, packet.x_max) == (-20.0, 20.0)

    mode = initial_state(ComparatorConfig(points=128, box_length=10.0, state="mode", modes=(2,)))
    assert mode.psi[0] == mode.psi[-1] == 0.0
    assert abs(mode.psi[64]) < 0.05 * np.abs(mode.psi).max()


@pytest.mark.parametrize("changes, key", [
    ({"state": "cat"}, "comparator.state"),
    ({"points": 10}, "comparator.points"),
    ({"box_length": -1.0}, "comparator.box_length"),
    ({"sigma0": 0.0}, "comparator.sigma0"),
    ({"x0": 50.0}, "comparator.x0"),
    ({"modes": ()}, "comparator.modes"),
    ({"state": "mode", "modes": (1, 2)}, "comparator.modes"),
    ({"dt": 0.0}, "comparator.dt"),
    ({"steps": 1}, "comparator.steps"),
    ({"seeds": 0}, "comparator.seeds"),
    ({"state": "double_slit", "slit_separation": 1.0}, "scenario.slit_separation"),
    ({"state": "double_slit", "edge_order": 3}, "scenario.edge_order"),
    ({"state": "double_slit", "box_length": 8.0}, "comparator.box_length"),
    ({"state": "double_slit", "seeds": 9}, "comparator.seeds"),
])
def test_invalid_comparator_configs(changes, key):
    with pytest.raises(ConfigError) as excinfo:
        ComparatorConfig(**changes)
    assert excinfo.value.key == key


def test_double_slit_state(packet_run):
    cfg = ComparatorConfig(state="double_slit", points=801, box_length=40.0, seeds=10,
                           slit_width=2.0, slit_separation=8.0, edge_order=2)
    grid = initial_state(cfg)
    assert grid.norm == pytest.approx(1.0)
    density = grid.density
    assert abs(grid.x[np.argmax(density)]) == pytest.approx(4.0, abs=0.06)
    assert density[400] <= 1e-12 * density.max()
    with pytest.raises(ValueError, match="no slits"):
        screen_bundle(packet_run)


def slit_screen(separation):
    cfg = ComparatorConfig(state="double_slit", points=2001, box_length=100.0, dt=0.005,
                           steps=1000, seeds=2000, slit_width=2.0,
                           slit_separation=separation, edge_order=2)
    return screen_bundle(run_comparator(cfg))


@pytest.mark.slow
def test_bohm_fringes_follow_the_two_slit_law():
    spacings = {}
    for separation in (8.0, 16.0):
        screen = slit_screen(separation)
        assert screen.scenario == "double_slit"
        assert screen.n_rays == 2000
        result = FringeAnalyzer.analyze(screen, screen.units)
        assert result["status"] == "OK"
        assert result["details"]["relative_error"] <= FringeAnalyzer.TOLERANCE
        spacings[separation] = result["spacing"]
    assert spacings[8.0] / spacings[16.0] == pytest.approx(2.0, rel=0.1)
