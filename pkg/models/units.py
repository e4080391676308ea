"""Unit normalization and regime selection

Internal units fix hbar = 1, w0 = 1 and (for massive particles) m = 1, so the
beam ratio lambda0/w0 is the only dimensionless input. Lengths are in w0,
momenta in units where p0 = 2*pi / (lambda0/w0).
"""
import math
from dataclasses import dataclass
from enum import Enum

from models.errors import UnitSystemError


class RegimeKind(str, Enum):
    OPTICS = "optics"
    NONRELATIVISTIC = "nonrelativistic"
    RELATIVISTIC = "relativistic"


@dataclass(frozen=True)
class Regime:
    """Which Hamiltonian system drives the rays, and how strongly rays couple

    wave_coupling scales the Wave Potential (1 is the exact system); eikonal
    switches it off entirely, whatever the scale.
    """

    kind: RegimeKind = RegimeKind.NONRELATIVISTIC
    eikonal: bool = False
    wave_coupling: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", RegimeKind(self.kind))
        if not math.isfinite(self.wave_coupling) or self.wave_coupling < 0:
            raise ValueError(f"wave_coupling must be finite and >= 0, got {self.wave_coupling}")

    @property
    def coupling(self):
        return 0.0 if self.eikonal else float(self.wave_coupling)


@dataclass(frozen=True)
class UnitSystem:
    lambda0_over_w0: float
    regime: RegimeKind
    hbar: float
    mass: float
    c: float
    w0: float
    p0: float
    E: float
    epsilon: float
    launch_potential: float = 0.0

    @property
    def lambda0(self):
        return self.lambda0_over_w0 * self.w0

    @property
    def k0(self):
        return self.p0 / self.hbar

    @property
    def rest_energy(self):
        if self.regime is not RegimeKind.RELATIVISTIC:
            return 0.0
        return self.mass * self.c ** 2

    def launch_energy_residual(self):
        """Relative mismatch between E and the regime's launch-energy relation"""
        if self.regime is RegimeKind.NONRELATIVISTIC:
            expected = self.p0 ** 2 / (2.0 * self.mass) + self.launch_potential
        elif self.regime is RegimeKind.RELATIVISTIC:
            expected = self.launch_potential + math.hypot(self.p0 * self.c, self.mass * self.c ** 2)
        else:
            expected = self.hbar * self.c * self.k0
        return abs(self.E - expected) / abs(expected)


def make_unit_system(lambda0_over_w0, regime, pc_over_rest_energy=None, *,
                     rest_mass=1.0, launch_potential=0.0):
    """
    Build the constant bundle for one run

    Args:
        lambda0_over_w0 (float): beam ratio, > 0
        regime (RegimeKind | str): optics, nonrelativistic or relativistic
        pc_over_rest_energy (float): p0 c / (m0 c^2); required for massive
            relativistic particles, ignored otherwise
        rest_mass (float): 1 for massive particles, 0 for massless ones
            (relativistic regime only; c is then normalized to 1)
        launch_potential (float): V at the launch axis, folded into E

    Returns:
        UnitSystem
    """
    try:
        kind = RegimeKind(regime)
    except ValueError:
        raise UnitSystemError(f"unknown regime '{regime}'") from None

    if not (isinstance(lambda0_over_w0, (int, float)) and math.isfinite(lambda0_over_w0)
            and lambda0_over_w0 > 0):
        raise UnitSystemError(f"lambda0_over_w0 must be a positive number, got {lambda0_over_w0!r}")

    hbar = 1.0
    w0 = 1.0
    lambda0 = lambda0_over_w0 * w0
    p0 = 2.0 * math.pi * hbar / lambda0
    epsilon = lambda0_over_w0 / (2.0 * math.pi)
    mass = 1.0

    if kind is RegimeKind.NONRELATIVISTIC:
        c = math.inf
        energy = p0 ** 2 / (2.0 * mass) + launch_potential
    elif kind is RegimeKind.RELATIVISTIC:
        if rest_mass < 0:
            raise UnitSystemError(f"rest_mass must be >= 0, got {rest_mass}")
        mass = float(rest_mass)
        if mass == 0.0:
            c = 1.0
        else:
            if pc_over_rest_energy is None:
                raise UnitSystemError("relativistic regime requires pc_over_rest_energy")
            if not (math.isfinite(pc_over_rest_energy) and pc_over_rest_energy > 0):
                raise UnitSystemError(
                    f"pc_over_rest_energy must be > 0, got {pc_over_rest_energy}")
            c = p0 / (mass * pc_over_rest_energy)
        energy = launch_potential + math.hypot(p0 * c, mass * c ** 2)
    else:
        c = 1.0
        mass = 0.0
        energy = hbar * c * (p0 / hbar)

    return UnitSystem(
        lambda0_over_w0=float(lambda0_over_w0),
        regime=kind,
        hbar=hbar,
        mass=mass,
        c=c,
        w0=w0,
        p0=p0,
        E=energy,
        epsilon=epsilon,
        launch_potential=float(launch_potential),
    )


def rayleigh_length(u):
    """z_R = pi w0^2 / lambda0"""
    return math.pi * u.w0 ** 2 / u.lambda0
