"""Canned launch fronts (Gaussian beam, single slit, double slit) and the run loop"""
import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from config import defaults
from config.thresholds import MAX_STEPS
from engine.dynamics import attach_diagnostics, choose_time_step, step
from engine.wavefront import front_flux
from models.errors import ConfigError, RunawayError
from models.front import TrajectoryBundle, Wavefront
from models.units import Regime, RegimeKind, make_unit_system, rayleigh_length
from potentials.fields import PotentialField

logger = logging.getLogger(__name__)

SCENARIOS = ("gaussian", "single_slit", "double_slit")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = defaults.SCENARIO
    n_rays: int = defaults.N_RAYS
    half_width: float = defaults.HALF_WIDTH
    z_max_rayleigh: float = defaults.Z_MAX_RAYLEIGH
    regime: Regime = dataclasses.field(default_factory=lambda: Regime(defaults.REGIME))
    lambda0_over_w0: float = defaults.LAMBDA0_OVER_W0
    pc_over_rest_energy: float = defaults.PC_OVER_REST_ENERGY
    rest_mass: float = defaults.REST_MASS
    slit_width: float = defaults.SLIT_WIDTH
    slit_separation: float = defaults.SLIT_SEPARATION
    edge_order: int = defaults.EDGE_ORDER
    snapshot_every: int = defaults.SNAPSHOT_EVERY
    dt: float = None
    potential: PotentialField = dataclasses.field(default_factory=PotentialField.free)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario '{self.scenario}' (expected one of {SCENARIOS})",
                              key="scenario.name")
        if isinstance(self.n_rays, bool) or not isinstance(self.n_rays, int) \
                or self.n_rays < 51 or self.n_rays % 2 == 0:
            raise ConfigError(f"n_rays must be an odd integer >= 51, got {self.n_rays!r}",
                              key="scenario.n_rays")
        min_half_width = 3.0 if self.scenario == "gaussian" else 0.0
        if not (math.isfinite(self.half_width) and self.half_width >= min_half_width
                and self.half_width > 0):
            raise ConfigError(f"half_width must be >= 3 for gaussian and > 0 otherwise, "
                              f"got {self.half_width}", key="scenario.half_width")
        if not (math.isfinite(self.z_max_rayleigh) and self.z_max_rayleigh > 0):
            raise ConfigError(f"z_max_rayleigh must be > 0, got {self.z_max_rayleigh}",
                              key="scenario.z_max_rayleigh")
        if not self.slit_width > 0:
            raise ConfigError(f"slit_width must be > 0, got {self.slit_width}",
                              key="scenario.slit_width")
        if not self.slit_separation > 0:
            raise ConfigError(f"slit_separation must be > 0, got {self.slit_separation}",
                              key="scenario.slit_separation")
        if self.scenario == "double_slit" and self.slit_separation < self.slit_width:
            raise ConfigError("slit separation smaller than slit width",
                              key="scenario.slit_separation")
        if isinstance(self.edge_order, bool) or not isinstance(self.edge_order, int) \
                or self.edge_order < 2 or self.edge_order % 2:
            raise ConfigError(f"edge_order must be an even integer >= 2, got {self.edge_order!r}",
                              key="scenario.edge_order")
        if isinstance(self.snapshot_every, bool) or not isinstance(self.snapshot_every, int) \
                or self.snapshot_every < 1:
            raise ConfigError(f"snapshot_every must be an integer >= 1, got {self.snapshot_every!r}",
                              key="output.snapshot_every")
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be > 0 when given, got {self.dt}", key="scenario.dt")

    def units(self, potential=None):
        potential = (potential or self.potential).loaded()
        V0, _ = potential.evaluate(0.0, 0.0)
        return make_unit_system(
            self.lambda0_over_w0,
            self.regime.kind,
            self.pc_over_rest_energy,
            rest_mass=self.rest_mass,
            launch_potential=float(V0),
        )

    def z_max(self, u):
        return self.z_max_rayleigh * rayleigh_length(u)

    def echo(self):
        """Plain-type view of the configuration for summaries"""
        return {
            "scenario": self.scenario,
            "n_rays": self.n_rays,
            "half_width": self.half_width,
            "z_max_rayleigh": self.z_max_rayleigh,
            "regime": self.regime.kind.value,
            "eikonal": self.regime.eikonal,
            "wave_coupling": self.regime.wave_coupling,
            "lambda0_over_w0": self.lambda0_over_w0,
            "pc_over_rest_energy": self.pc_over_rest_energy,
            "rest_mass": self.rest_mass,
            "slit_width": self.slit_width,
            "slit_separation": self.slit_separation,
            "edge_order": self.edge_order,
            "snapshot_every": self.snapshot_every,
            "dt": self.dt,
            "potential": self.potential.kind,
        }


def _super_gaussian(x, centre, half_width, order):
    return np.exp(-np.abs((x - centre) / half_width) ** order)


def slit_pair(x, slit_width, slit_separation, edge_order):
    """Two super-Gaussian apertures centred at +-slit_separation / 2"""
    half, centre = 0.5 * slit_width, 0.5 * slit_separation
    return (_super_gaussian(x, -centre, half, edge_order)
            + _super_gaussian(x, centre, half, edge_order))


def launch_profile(cfg, x, u):
    """Unnormalized launch amplitude R(x) at z = 0"""
    if cfg.scenario == "gaussian":
        return np.exp(-(x / u.w0) ** 2)
    if cfg.scenario == "single_slit":
        return _super_gaussian(x, 0.0, 0.5 * cfg.slit_width * u.w0, cfg.edge_order)
    return slit_pair(x, cfg.slit_width * u.w0, cfg.slit_separation * u.w0, cfg.edge_order)


def build_launch_front(cfg, u, potential=None):
    """
    Equispaced rays on z = 0 moving along +z with |p| = p0, R normalized to max 1

    Q and H are evaluated on the returned front.
    """
    if cfg.scenario == "double_slit" and cfg.slit_separation < cfg.slit_width:
        raise ValueError("slit separation smaller than slit width")
    potential = (potential or cfg.potential).loaded()

    x = cfg.half_width * u.w0 * np.linspace(-1.0, 1.0, cfg.n_rays)
    x = 0.5 * (x - x[::-1])
    R = launch_profile(cfg, x, u)
    R = R / R.max()
    zeros = np.zeros_like(x)
    front = Wavefront(x=x, z=zeros, px=zeros, pz=np.full_like(x, u.p0), R=R, t=0.0)
    return attach_diagnostics(front, u, potential, cfg.regime)


def _mirror_asymmetry(front):
    return float(np.max(np.abs(front.x + front.x[::-1])))


def run_scenario(cfg, progress=None):
    """
    Step the launch front until the central ray reaches z_max

    Args:
        cfg (ScenarioConfig): what to run
        progress (callable): optional progress(steps, front) hook

    Returns:
        TrajectoryBundle
    """
    potential = cfg.potential.loaded()
    u = cfg.units(potential)
    regime = cfg.regime
    front = build_launch_front(cfg, u, potential)

    dt = cfg.dt if cfg.dt is not None else choose_time_step(front, u, potential, regime)
    z_target = cfg.z_max(u)
    centre = len(front) // 2

    launch_flux = front_flux(front)
    total_flux = launch_flux.sum()
    launch_speed = front.speed
    stats = {
        "dt": dt,
        "steps": 0,
        "max_energy_residual": 0.0,
        "max_speed_drift": 0.0,
        "max_flux_drift": 0.0,
        "max_mirror_asymmetry": _mirror_asymmetry(front),
        "caustic_warnings": 0,
        "max_longitudinal_q_gradient": 0.0,
    }
    logger.info("running %s (%s, %d rays), dt=%.6g, z_max=%.6g",
                cfg.scenario, regime.kind.value, len(front), dt, z_target)

    snapshots = [front]
    steps = 0
    while front.z[centre] < z_target:
        if steps >= MAX_STEPS:
            raise RunawayError(f"central ray at z={front.z[centre]:.6g} after {steps} steps "
                               f"(target {z_target:.6g})")
        front, report = step(front, u, potential, dt, regime)
        steps += 1

        stats["max_energy_residual"] = max(stats["max_energy_residual"], report.max_energy_residual)
        stats["max_speed_drift"] = max(
            stats["max_speed_drift"], float(np.max(np.abs(front.speed - launch_speed) / launch_speed)))
        stats["max_flux_drift"] = max(
            stats["max_flux_drift"], abs(front_flux(front).sum() - total_flux) / total_flux)
        stats["max_mirror_asymmetry"] = max(stats["max_mirror_asymmetry"], _mirror_asymmetry(front))
        stats["caustic_warnings"] += int(report.caustic_flag)
        stats["max_longitudinal_q_gradient"] = max(
            stats["max_longitudinal_q_gradient"], report.max_longitudinal_q_gradient)

        if steps % cfg.snapshot_every == 0:
            snapshots.append(front)
        if progress is not None:
            progress(steps, front)

    if snapshots[-1] is not front:
        snapshots.append(front)
    stats["steps"] = steps

    return TrajectoryBundle(
        snapshots=snapshots,
        scenario=cfg.scenario,
        echo=cfg.echo(),
        units=u,
        launch_flux=launch_flux,
        stats=stats,
    )


def run_scenarios(configs, max_workers=defaults.MAX_WORKERS):
    """Independent runs on a thread pool; results keep the input order"""
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(run_scenario, configs))


def with_regime(cfg, **changes):
    """Copy of cfg with some Regime fields replaced"""
    return dataclasses.replace(cfg, regime=dataclasses.replace(cfg.regime, **changes))


__all__ = [
    "SCENARIOS",
    "ScenarioConfig",
    "RegimeKind",
    "build_launch_front",
    "launch_profile",
    "slit_pair",
    "run_scenario",
    "run_scenarios",
    "with_regime",
]
