"""Leapfrog integration of the optics, non-relativistic and relativistic ray systems

One step is palindromic: half external kick, half wave-coupling kick, drift,
amplitude transport, half wave-coupling kick, half external kick. The wave
coupling is always perpendicular to p, so its kick is applied as an exact
rotation of p; external forces are additive.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from config.thresholds import (
    CAUSTIC_WARNING_FRACTION,
    COUPLING_STEP_FACTOR,
    ENERGY_DRIFT_HARD_LIMIT,
    LONGITUDINAL_STEP_FACTOR,
    STEP_RULE_SLACK,
    STEP_SAFETY,
    TRANSVERSE_STEP_FACTOR,
)
from engine.wavefront import lit_gaps, transport_amplitude, transverse_gradient, wave_potential
from models.errors import EnergyDriftError, StepSizeError, TurningPointError
from models.front import FrontScalars
from models.units import Regime, RegimeKind, rayleigh_length
from potentials.fields import PotentialField, RefractiveIndexField

logger = logging.getLogger(__name__)

__all__ = [
    "Regime",
    "StepReport",
    "step",
    "step_nonrelativistic",
    "step_relativistic",
    "step_optics",
    "hamiltonian_residual",
    "attach_diagnostics",
    "choose_time_step",
    "check_time_step",
    "system_for",
]


@dataclass(frozen=True)
class StepReport:
    dt: float
    max_energy_residual: float
    max_speed_drift: float
    caustic_flag: bool
    max_longitudinal_q_gradient: float = 0.0


class RaySystem:
    """Regime-specific pieces of one step; subclasses fill in the physics"""

    kind = None

    def __init__(self, u, regime):
        if u.regime is not self.kind:
            raise ValueError(f"{self.kind.value} step needs a {self.kind.value} unit system, "
                             f"got {u.regime.value}")
        self.u = u
        self.regime = regime

    @property
    def coupled(self):
        return self.regime.coupling != 0.0

    def wave_potential(self, front):
        return wave_potential(front, self.u, self.regime).values

    def coupling_scale(self, x, z):
        return 1.0

    def coupling_rate(self, front, Q):
        """Signed force along each ray's normal, or None when rays are uncoupled"""
        if not self.coupled:
            return None
        return -self.coupling_scale(front.x, front.z) * transverse_gradient(front, Q).values

    def residual(self, H):
        return (H - self.u.E) / self.u.E

    def wave_diffusivity(self, front):
        """D such that the wave acceleration is (D^2 / 2) d(grad^2 R / R)/ds"""
        raise NotImplementedError


class NonRelativisticSystem(RaySystem):
    kind = RegimeKind.NONRELATIVISTIC

    def __init__(self, u, regime, potential):
        super().__init__(u, regime)
        self.potential = potential

    def external_force(self, x, z):
        _, (gx, gz) = self.potential.evaluate(x, z)
        return -gx, -gz

    def velocity(self, x, z, px, pz, dt):
        return px / self.u.mass, pz / self.u.mass

    def wave_diffusivity(self, front):
        return self.u.hbar / self.u.mass

    def hamiltonian(self, x, z, px, pz, Q):
        V, _ = self.potential.evaluate(x, z)
        return (px ** 2 + pz ** 2) / (2.0 * self.u.mass) + V + Q


class RelativisticSystem(RaySystem):
    kind = RegimeKind.RELATIVISTIC

    def __init__(self, u, regime, potential):
        super().__init__(u, regime)
        self.potential = potential

    def _kinetic_energy(self, x, z):
        V, _ = self.potential.evaluate(x, z)
        gap = self.u.E - V
        if np.any(gap <= 0):
            raise TurningPointError(f"E - V reached {float(np.min(gap)):.6g} on the front")
        return gap

    def external_force(self, x, z):
        _, (gx, gz) = self.potential.evaluate(x, z)
        return -gx, -gz

    def coupling_scale(self, x, z):
        return self.u.E / self._kinetic_energy(x, z)

    def velocity(self, x, z, px, pz, dt):
        c2 = self.u.c ** 2
        gap = self._kinetic_energy(x, z)
        # E - V is taken at the predicted midpoint of the drift
        xm = x + 0.5 * dt * c2 * px / gap
        zm = z + 0.5 * dt * c2 * pz / gap
        gap = self._kinetic_energy(xm, zm)
        return c2 * px / gap, c2 * pz / gap

    def wave_diffusivity(self, front):
        gap = float(np.min(self._kinetic_energy(front.x, front.z)))
        return self.u.hbar * self.u.c ** 2 / gap

    def hamiltonian(self, x, z, px, pz, Q):
        V, _ = self.potential.evaluate(x, z)
        c = self.u.c
        radicand = (px ** 2 + pz ** 2) * c ** 2 + (self.u.mass * c ** 2) ** 2 + 2.0 * self.u.E * Q
        if np.any(radicand <= 0):
            raise TurningPointError("relativistic Hamiltonian radicand <= 0")
        return V + np.sqrt(radicand)


class OpticalSystem(RaySystem):
    kind = RegimeKind.OPTICS

    def __init__(self, u, regime, index):
        super().__init__(u, regime)
        self.index = index

    def external_force(self, x, z):
        n, (nx, nz) = self.index.evaluate(x, z)
        scale = self.u.c * self.u.k0 * n
        return scale * nx, scale * nz

    def velocity(self, x, z, kx, kz, dt):
        factor = self.u.c / self.u.k0
        return factor * kx, factor * kz

    def wave_diffusivity(self, front):
        return self.u.c / self.u.k0

    def hamiltonian(self, x, z, kx, kz, W):
        n, _ = self.index.evaluate(x, z)
        k0 = self.u.k0
        return self.u.c / (2.0 * k0) * (kx ** 2 + kz ** 2 - (n * k0) ** 2) + W

    def residual(self, D):
        return D / (0.5 * self.u.c * self.u.k0)


def system_for(u, field, regime):
    """
    Pick the ray system for a regime

    For optics, field may be a RefractiveIndexField, or a PotentialField that
    is mapped through n = 1 - V/E.
    """
    kind = RegimeKind(regime.kind)
    if kind is RegimeKind.OPTICS:
        if field is None:
            field = RefractiveIndexField.vacuum()
        elif isinstance(field, PotentialField):
            field = RefractiveIndexField.from_potential(field, u)
        return OpticalSystem(u, regime, field)
    field = PotentialField.free() if field is None else field
    if kind is RegimeKind.RELATIVISTIC:
        return RelativisticSystem(u, regime, field)
    return NonRelativisticSystem(u, regime, field)


def _rotate(px, pz, rate, h):
    """Exact solution of dp/dt = rate * n_hat(p) over h: a clockwise rotation"""
    if rate is None:
        return px, pz
    theta = -rate * h / np.hypot(px, pz)
    cos, sin = np.cos(theta), np.sin(theta)
    return px * cos - pz * sin, px * sin + pz * cos


def _relative_motion(front, idx, ax, az):
    """Rate at which consecutive rays of idx approach or separate along their chord"""
    dx, dz = np.diff(front.x[idx]), np.diff(front.z[idx])
    return np.abs(np.diff(ax[idx]) * dx + np.diff(az[idx]) * dz) / np.hypot(dx, dz)


def _step_limit(front, system):
    """Largest dt allowed by the longitudinal, transverse and coupling step rules"""
    vx, vz = system.velocity(front.x, front.z, front.px, front.pz, 0.0)
    limit = math.inf

    vz_max = float(np.max(np.abs(vz)))
    if vz_max > 0:
        limit = LONGITUDINAL_STEP_FACTOR * rayleigh_length(system.u) / vz_max

    idx, gaps = lit_gaps(front)
    if idx.size < 2:
        return limit
    relative = _relative_motion(front, idx, vx, vz)
    moving = (relative > 0) & (gaps > 0)
    if moving.any():
        limit = min(limit, TRANSVERSE_STEP_FACTOR * float(np.min(gaps[moving] / relative[moving])))

    open_gaps = gaps[gaps > 0]
    if system.coupled and open_gaps.size:
        # Fastest ray-to-ray mode of the wave coupling
        stiffness = math.sqrt(system.regime.coupling) * system.wave_diffusivity(front)
        limit = min(limit, COUPLING_STEP_FACTOR * float(open_gaps.min()) ** 2 / stiffness)
    return limit


def _acceleration_limit(front, system):
    """dt over which neighbouring lit rays close a TRANSVERSE_STEP_FACTOR share of their gap"""
    idx, gaps = lit_gaps(front)
    if idx.size < 2:
        return math.inf
    fx, fz = system.external_force(front.x, front.z)
    rate = system.coupling_rate(front, front.Q)
    if rate is not None:
        nx, nz = front.normal
        fx, fz = fx + rate * nx, fz + rate * nz
    ax, az = system.velocity(front.x, front.z, fx, fz, 0.0)
    relative = _relative_motion(front, idx, ax, az)
    moving = (relative > 0) & (gaps > 0)
    if not moving.any():
        return math.inf
    return math.sqrt(TRANSVERSE_STEP_FACTOR * float(np.min(gaps[moving] / relative[moving])))


def choose_time_step(front, u, field, regime):
    """
    STEP_SAFETY times the tightest launch rule

    Besides the rules re-checked every step, the launch acceleration bounds
    dt, since a front launched with px = 0 has no relative transverse motion
    for the velocity rule to measure.
    """
    system = system_for(u, field, regime)
    limit = min(_step_limit(front, system), _acceleration_limit(front, system))
    if not math.isfinite(limit):
        raise ValueError("front is at rest; no step size follows from the rules")
    return STEP_SAFETY * limit


def check_time_step(front, u, field, regime, dt):
    _check_step(front, system_for(u, field, regime), dt)


def _check_step(front, system, dt):
    limit = _step_limit(front, system)
    if abs(dt) > limit * (1.0 + STEP_RULE_SLACK):
        raise StepSizeError(f"dt={abs(dt):.6g} exceeds the step rule limit {limit:.6g} "
                            f"at t={front.t:.6g}")


def _advance(front, system, dt, *, check_step=True, energy_limit=ENERGY_DRIFT_HARD_LIMIT):
    if not (math.isfinite(dt) and dt != 0):
        raise ValueError(f"dt must be finite and non-zero, got {dt}")
    if check_step:
        _check_step(front, system, dt)

    half = 0.5 * dt
    x, z = front.x, front.z

    fx, fz = system.external_force(x, z)
    px, pz = front.px + half * fx, front.pz + half * fz
    px, pz = _rotate(px, pz, system.coupling_rate(front, front.Q), half)

    vx, vz = system.velocity(x, z, px, pz, dt)
    x1, z1 = x + dt * vx, z + dt * vz

    # Amplitudes and Q are evaluated once per step, on the drifted positions
    drifted = front.replace(x=x1, z=z1, px=px, pz=pz, t=front.t + dt)
    drifted = drifted.replace(R=transport_amplitude(front, drifted).values)
    Q = system.wave_potential(drifted)
    px, pz = _rotate(px, pz, system.coupling_rate(drifted, Q), half)

    fx, fz = system.external_force(x1, z1)
    px, pz = px + half * fx, pz + half * fz

    # The closing kick changes |p|; R^2 |p| ds stays fixed tube by tube
    R = drifted.R * np.sqrt(drifted.speed / np.hypot(px, pz))
    H = system.hamiltonian(x1, z1, px, pz, Q)
    advanced = drifted.replace(px=px, pz=pz, R=R, Q=Q, H=H)

    lit = advanced.lit
    residual = float(np.max(np.abs(system.residual(H))[lit]))
    if residual > energy_limit:
        raise EnergyDriftError(f"max |H-E|/E = {residual:.3e} exceeds {energy_limit:.1e} "
                               f"at t={advanced.t:.6g}")

    speed = front.speed
    speed_drift = float(np.max(np.abs(advanced.speed - speed) / speed))
    _, gaps = lit_gaps(advanced)
    caustic_flag = bool(len(gaps) and gaps.min() < CAUSTIC_WARNING_FRACTION * np.median(gaps))
    if caustic_flag:
        logger.debug("narrow ray tube at t=%.6g (min gap %.3e)", advanced.t, gaps.min())

    travelled = np.hypot(x1 - x, z1 - z)
    moved = (travelled > 0) & lit
    along = np.abs(Q - front.Q)[moved] / travelled[moved]
    longitudinal = float(along.max()) if along.size else 0.0

    return advanced, StepReport(
        dt=dt,
        max_energy_residual=residual,
        max_speed_drift=speed_drift,
        caustic_flag=caustic_flag,
        max_longitudinal_q_gradient=longitudinal,
    )


def _regime_for(kind, regime):
    if regime is None:
        return Regime(kind)
    if RegimeKind(regime.kind) is not kind:
        raise ValueError(f"regime {regime.kind} passed to the {kind.value} stepper")
    return regime


def step_nonrelativistic(front, u, V, dt, *, regime=None, **options):
    """
    One leapfrog step of dr/dt = p/m, dp/dt = -grad(V + Q)

    Returns:
        tuple: (Wavefront, StepReport)
    """
    regime = _regime_for(RegimeKind.NONRELATIVISTIC, regime)
    return _advance(front, NonRelativisticSystem(u, regime, V), dt, **options)


def step_relativistic(front, u, V, dt, *, regime=None, **options):
    """
    One leapfrog step of dr/dt = c^2 p/(E-V), dp/dt = -grad V - E/(E-V) grad Q

    Returns:
        tuple: (Wavefront, StepReport)
    """
    regime = _regime_for(RegimeKind.RELATIVISTIC, regime)
    return _advance(front, RelativisticSystem(u, regime, V), dt, **options)


def step_optics(front, u, n, dt, *, regime=None, **options):
    """
    One leapfrog step of dr/dt = c k/k0, dk/dt = grad[(c k0/2) n^2 - W]

    n is a RefractiveIndexField, or a PotentialField mapped through 1 - V/E.
    """
    regime = _regime_for(RegimeKind.OPTICS, regime)
    return _advance(front, system_for(u, n, regime), dt, **options)


def step(front, u, field, dt, regime, **options):
    return _advance(front, system_for(u, field, regime), dt, **options)


def hamiltonian_residual(front, u, V_or_n, regime):
    """Per-ray (H - E)/E, or D/(c k0/2) in optics; uses the Q stored on the front"""
    system = system_for(u, V_or_n, regime)
    H = system.hamiltonian(front.x, front.z, front.px, front.pz, front.Q)
    return FrontScalars(system.residual(H))


def attach_diagnostics(front, u, field, regime):
    """Front with Q (or W) and H evaluated from its own amplitudes"""
    system = system_for(u, field, regime)
    Q = system.wave_potential(front)
    return front.replace(Q=Q, H=system.hamiltonian(front.x, front.z, front.px, front.pz, Q))
