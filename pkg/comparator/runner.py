"""Comparator runs: evolve a 1D state, trace Bohm paths, collect diagnostics"""
import logging
from dataclasses import dataclass, field

import numpy as np

from comparator.bohm import (
    bohm_energy_exchange,
    madelung_residuals,
    seed_positions,
    trace_bohm_trajectories,
)
from comparator.tdse import (
    WaveFunctionGrid,
    box_modes,
    energy_expectation,
    evolve_history,
    free_packet_spread,
    gaussian_packet,
    position_spread,
    superpose,
)
from config import defaults
from config.thresholds import ESCAPE_PROBABILITY
from models.errors import ConfigError, NodeError
from models.front import TrajectoryBundle, Wavefront
from models.units import RegimeKind, make_unit_system
from scenarios.builders import slit_pair

logger = logging.getLogger(__name__)

STATES = ("packet", "mode", "superposition", "double_slit")
# States whose probability must stay clear of the box walls
FREE_STATES = ("packet", "double_slit")


@dataclass(frozen=True)
class ComparatorConfig:
    enabled: bool = defaults.COMPARATOR_ENABLED
    points: int = defaults.COMPARATOR_POINTS
    box_length: float = defaults.COMPARATOR_BOX_LENGTH
    state: str = defaults.COMPARATOR_STATE
    sigma0: float = defaults.COMPARATOR_SIGMA0
    k0: float = defaults.COMPARATOR_K0
    x0: float = defaults.COMPARATOR_X0
    modes: tuple = defaults.COMPARATOR_MODES
    dt: float = defaults.COMPARATOR_DT
    steps: int = defaults.COMPARATOR_STEPS
    seeds: int = defaults.COMPARATOR_SEEDS
    slit_width: float = defaults.SLIT_WIDTH
    slit_separation: float = defaults.SLIT_SEPARATION
    edge_order: int = defaults.EDGE_ORDER

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.state not in STATES:
            raise ConfigError(f"unknown comparator state '{self.state}' (expected one of {STATES})",
                              key="comparator.state")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 64:
            raise ConfigError(f"points must be an integer >= 64, got {self.points!r}",
                              key="comparator.points")
        if not self.box_length > 0:
            raise ConfigError(f"box_length must be > 0, got {self.box_length}",
                              key="comparator.box_length")
        if not self.sigma0 > 0:
            raise ConfigError(f"sigma0 must be > 0, got {self.sigma0}", key="comparator.sigma0")
        if abs(self.x0) >= 0.5 * self.box_length:
            raise ConfigError(f"x0 must lie inside the box, got {self.x0}", key="comparator.x0")
        if not self.modes or any(not isinstance(n, int) or n < 1 for n in self.modes):
            raise ConfigError(f"modes must be positive integers, got {list(self.modes)}",
                              key="comparator.modes")
        if self.state == "mode" and len(self.modes) != 1:
            raise ConfigError("state 'mode' takes exactly one mode number", key="comparator.modes")
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}", key="comparator.dt")
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 2:
            raise ConfigError(f"steps must be an integer >= 2, got {self.steps!r}",
                              key="comparator.steps")
        if isinstance(self.seeds, bool) or not isinstance(self.seeds, int) or self.seeds < 1:
            raise ConfigError(f"seeds must be an integer >= 1, got {self.seeds!r}",
                              key="comparator.seeds")
        if self.state == "double_slit":
            self._check_slits()

    def _check_slits(self):
        if not (self.slit_width > 0 and self.slit_separation >= self.slit_width):
            raise ConfigError(f"slits of width {self.slit_width} need a separation of at least "
                              f"that much, got {self.slit_separation}", key="scenario.slit_separation")
        if isinstance(self.edge_order, bool) or not isinstance(self.edge_order, int) \
                or self.edge_order < 2 or self.edge_order % 2:
            raise ConfigError(f"edge_order must be an even integer >= 2, got {self.edge_order!r}",
                              key="scenario.edge_order")
        if 0.5 * (self.slit_separation + self.slit_width) >= 0.5 * self.box_length:
            raise ConfigError("slits do not fit inside the comparator box",
                              key="comparator.box_length")
        if self.seeds % 2:
            # The middle seed of an odd count lands on the central node
            raise ConfigError(f"double_slit needs an even seed count, got {self.seeds}",
                              key="comparator.seeds")

    @property
    def bounds(self):
        return -0.5 * self.box_length, 0.5 * self.box_length


@dataclass(frozen=True, eq=False)
class ComparatorResult:
    config: ComparatorConfig
    history: list
    paths: object
    stats: dict = field(default_factory=dict)


def initial_state(cfg, u=None):
    """Launch grid for the configured state"""
    x_min, x_max = cfg.bounds
    if cfg.state == "packet":
        return gaussian_packet(x_min, x_max, cfg.points, cfg.x0, cfg.sigma0, cfg.k0)
    if cfg.state == "double_slit":
        x = np.linspace(x_min, x_max, cfg.points)
        psi = slit_pair(x, cfg.slit_width, cfg.slit_separation, cfg.edge_order).astype(complex)
        psi[0] = psi[-1] = 0.0
        return WaveFunctionGrid(x_min, x_max, psi).normalized()
    modes = box_modes(x_min, x_max, cfg.points, max(cfg.modes), u=u)
    return superpose([modes[n - 1] for n in cfg.modes])


def run_comparator(cfg, u=None):
    """
    Evolve the configured state, trace Bohm seeds and measure the diagnostics

    Returns:
        ComparatorResult
    """
    grid = initial_state(cfg, u)
    # Box states touch the walls on purpose
    escape = ESCAPE_PROBABILITY if cfg.state in FREE_STATES else None
    logger.info("comparator: %s on %d points, %d steps of %.4g", cfg.state, cfg.points,
                cfg.steps, cfg.dt)
    history = evolve_history(grid, None, cfg.dt, cfg.steps, u, escape_tolerance=escape)

    seeds = seed_positions(grid, cfg.seeds)
    paths = trace_bohm_trajectories(history, seeds, u)

    norms = np.array([snapshot.norm for snapshot in history])
    energies = [energy_expectation(history[0], None, u), energy_expectation(history[-1], None, u)]
    exchange = bohm_energy_exchange(paths, u)
    stats = {
        "state": cfg.state,
        "t_final": history[-1].t,
        "max_norm_drift": float(np.max(np.abs(norms - 1.0))),
        "energy_drift": abs(energies[1] - energies[0]) / abs(energies[0]),
        "order_preserved": bool(np.all(np.diff(paths.x, axis=1) > 0)) if cfg.seeds > 1 else True,
        "max_seed_displacement": float(np.max(np.abs(paths.x - paths.x[0]))),
        "max_energy_exchange_rate": float(np.max(np.abs(exchange))),
    }
    if cfg.state == "packet":
        expected = free_packet_spread(cfg.sigma0, history[-1].t, u)
        stats["spread_relative_error"] = abs(position_spread(history[-1]) - expected) / expected
    try:
        residuals = madelung_residuals(history, None, u)
        stats["continuity_residual"] = residuals.continuity
        stats["hamilton_jacobi_residual"] = residuals.hamilton_jacobi
    except NodeError as exc:
        logger.warning("Madelung residuals skipped: %s", exc)
        stats["continuity_residual"] = None
        stats["hamilton_jacobi_residual"] = None
    return ComparatorResult(config=cfg, history=history, paths=paths, stats=stats)


def screen_bundle(result, u=None):
    """
    Bohm paths of a double_slit comparator run as a ray bundle

    Transverse time maps onto z = (p0 / m) t, and every path carries an equal
    share of the probability, so the fringe analyzer reads the paths the way
    it reads a ray screen.
    """
    if result.config.state != "double_slit":
        raise ValueError(f"comparator state '{result.config.state}' has no slits")
    u = u or make_unit_system(defaults.LAMBDA0_OVER_W0, RegimeKind.NONRELATIVISTIC)
    paths = result.paths
    n = paths.n_seeds
    snapshots = [
        Wavefront(x=x, z=np.full(n, u.p0 / u.mass * t), px=np.zeros(n), pz=np.full(n, u.p0),
                  R=np.ones(n), t=t)
        for t, x in zip(paths.t, paths.x)
    ]
    return TrajectoryBundle(
        snapshots=snapshots,
        scenario="double_slit",
        echo={"slit_separation": result.config.slit_separation, "source": "bohm"},
        units=u,
        launch_flux=np.full(n, 1.0 / n),
    )
