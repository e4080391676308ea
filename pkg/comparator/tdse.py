"""1D time-dependent Schrodinger evolution in a hard-wall box

The grid includes both walls, where psi is held at zero; the implicit
Crank-Nicolson propagator acts on the interior points only.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import splu

from config.thresholds import (
    ESCAPE_EDGE_FRACTION,
    ESCAPE_PROBABILITY,
    MAX_PHASE_PER_STEP,
    MIN_GRID_POINTS,
    MIN_POINTS_PER_WAVELENGTH,
    NORM_DRIFT_PER_STEP,
    RESOLUTION_AMPLITUDE_FRACTION,
)
from models.errors import DomainEscapeError
from models.units import RegimeKind
from potentials.fields import PotentialField

logger = logging.getLogger(__name__)


def comparator_constants(u=None):
    """(hbar, m) for the comparator; natural units when no UnitSystem is given"""
    if u is None:
        return 1.0, 1.0
    if u.regime is not RegimeKind.NONRELATIVISTIC or not u.mass > 0:
        raise ValueError(f"comparator needs a massive non-relativistic unit system, "
                         f"got {u.regime.value} with m={u.mass}")
    return u.hbar, u.mass


@dataclass(frozen=True, eq=False)
class WaveFunctionGrid:
    """psi sampled on n_points uniform points from x_min to x_max inclusive"""

    x_min: float
    x_max: float
    psi: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        if psi.ndim != 1 or len(psi) < MIN_GRID_POINTS:
            raise ValueError(f"need a 1D grid of at least {MIN_GRID_POINTS} points, "
                             f"got shape {psi.shape}")
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")
        if not np.all(np.isfinite(psi)):
            raise ValueError("psi holds non-finite values")

    @property
    def n_points(self):
        return len(self.psi)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def density(self):
        return np.abs(self.psi) ** 2

    @property
    def norm(self):
        return float(self.density.sum() * self.dx)

    def same_grid(self, other):
        return (self.x_min, self.x_max, self.n_points) == (other.x_min, other.x_max, other.n_points)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def normalized(self):
        norm = self.norm
        if not norm > 0:
            raise ValueError("psi vanishes everywhere")
        return self.replace(psi=self.psi / math.sqrt(norm))


@dataclass(frozen=True, eq=False)
class EigenMode:
    x_min: float
    x_max: float
    values: np.ndarray
    energy: float
    omega: float
    coefficient: complex = 1.0

    def with_coefficient(self, coefficient):
        return dataclasses.replace(self, coefficient=coefficient)


def _grid_x(x_min, x_max, n_points):
    if n_points < MIN_GRID_POINTS:
        raise ValueError(f"need at least {MIN_GRID_POINTS} grid points, got {n_points}")
    return np.linspace(x_min, x_max, n_points)


def potential_on_grid(x, V=None):
    """V(x, z=0) on the grid points; None is free space"""
    if V is None:
        return np.zeros_like(x)
    if not isinstance(V, PotentialField):
        raise TypeError(f"expected a PotentialField, got {type(V).__name__}")
    values, _ = V.loaded().evaluate(x, np.zeros_like(x))
    return np.broadcast_to(values, x.shape).astype(float)


def hamiltonian_matrix(grid, V=None, u=None):
    """Sparse three-point H on the interior points (walls excluded)"""
    hbar, m = comparator_constants(u)
    kinetic = hbar ** 2 / (2.0 * m * grid.dx ** 2)
    interior = potential_on_grid(grid.x, V)[1:-1]
    size = len(interior)
    off = np.full(size - 1, -kinetic)
    return sparse.diags([off, 2.0 * kinetic + interior, off], [-1, 0, 1], format="csc")


def box_modes(x_min, x_max, n_points, count, V=None, u=None):
    """
    Lowest eigenmodes of the discrete box Hamiltonian

    Modes are normalized to sum |u|^2 dx = 1, vanish on the walls and have
    their first lobe positive.

    Returns:
        list: EigenMode, in order of increasing energy
    """
    hbar, m = comparator_constants(u)
    x = _grid_x(x_min, x_max, n_points)
    if not 1 <= count <= n_points - 2:
        raise ValueError(f"count must be in [1, {n_points - 2}], got {count}")
    dx = x[1] - x[0]
    kinetic = hbar ** 2 / (2.0 * m * dx ** 2)
    diagonal = 2.0 * kinetic + potential_on_grid(x, V)[1:-1]
    off = np.full(n_points - 3, -kinetic)
    energies, vectors = eigh_tridiagonal(diagonal, off, select="i", select_range=(0, count - 1))

    modes = []
    for energy, vector in zip(energies, vectors.T):
        values = np.zeros(n_points)
        values[1:-1] = vector / math.sqrt(dx)
        first_lobe = np.flatnonzero(np.abs(values) > 1e-3 * np.abs(values).max())[0]
        if values[first_lobe] < 0:
            values = -values
        modes.append(EigenMode(x_min, x_max, values, float(energy), float(energy) / hbar))
    return modes


def superpose(modes, t=0.0):
    """
    psi = sum c_n u_n exp(-i E_n t / hbar), coefficients normalized to sum |c_n|^2 = 1

    Raises:
        ValueError: empty list, mismatched grids or all-zero coefficients
    """
    modes = list(modes)
    if not modes:
        raise ValueError("superpose needs at least one mode")
    first = modes[0]
    for mode in modes[1:]:
        if (mode.x_min, mode.x_max, len(mode.values)) != (first.x_min, first.x_max, len(first.values)):
            raise ValueError("modes live on different grids")
    coefficients = np.array([mode.coefficient for mode in modes], dtype=complex)
    weight = math.sqrt(float(np.sum(np.abs(coefficients) ** 2)))
    if weight == 0:
        raise ValueError("all mode coefficients are zero")
    coefficients /= weight

    psi = np.zeros(len(first.values), dtype=complex)
    for c, mode in zip(coefficients, modes):
        psi += c * mode.values * np.exp(-1j * mode.omega * t)
    return WaveFunctionGrid(first.x_min, first.x_max, psi, t=t).normalized()


def gaussian_packet(x_min, x_max, n_points, x0=0.0, sigma0=1.0, k0=0.0):
    """Normalized exp(-(x-x0)^2 / (4 sigma0^2) + i k0 x); sigma0 is the spread of |psi|^2"""
    if not sigma0 > 0:
        raise ValueError(f"sigma0 must be > 0, got {sigma0}")
    x = _grid_x(x_min, x_max, n_points)
    psi = np.exp(-((x - x0) ** 2) / (4.0 * sigma0 ** 2) + 1j * k0 * x)
    psi[0] = psi[-1] = 0.0
    return WaveFunctionGrid(x_min, x_max, psi).normalized()


def shortest_wavelength(grid):
    """2 pi / max |psi'/psi| over the points carrying real amplitude"""
    amplitude = np.abs(grid.psi)
    strong = amplitude >= RESOLUTION_AMPLITUDE_FRACTION * amplitude.max()
    slope = np.abs(np.gradient(grid.psi, grid.dx))[strong] / amplitude[strong]
    k_max = float(slope.max()) if slope.size else 0.0
    return math.inf if k_max == 0 else 2.0 * math.pi / k_max


def escape_probability(grid):
    """Probability held in the two boundary strips"""
    strip = max(1, int(ESCAPE_EDGE_FRACTION * grid.n_points))
    density = grid.density
    return float((density[:strip].sum() + density[-strip:].sum()) * grid.dx)


class CrankNicolsonPropagator:
    """(1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi, factored once"""

    def __init__(self, grid, V, dt, u=None):
        hbar, _ = comparator_constants(u)
        values = potential_on_grid(grid.x, V)
        if dt * float(np.max(np.abs(values))) / hbar > MAX_PHASE_PER_STEP:
            raise ValueError(f"dt*max|V|/hbar exceeds {MAX_PHASE_PER_STEP}")
        H = hamiltonian_matrix(grid, V, u)
        identity = sparse.identity(H.shape[0], dtype=complex, format="csc")
        half = 0.5j * dt / hbar
        self.dt = dt
        self._solver = splu((identity + half * H).tocsc())
        self._explicit = (identity - half * H).tocsr()

    def step(self, grid):
        psi = np.zeros(grid.n_points, dtype=complex)
        psi[1:-1] = self._solver.solve(self._explicit @ grid.psi[1:-1])
        return grid.replace(psi=psi, t=grid.t + self.dt)


def _check_resolution(grid):
    wavelength = shortest_wavelength(grid)
    if wavelength < MIN_POINTS_PER_WAVELENGTH * grid.dx:
        raise ValueError(f"grid resolves the shortest wavelength {wavelength:.4g} with "
                         f"{wavelength / grid.dx:.1f} points, need {MIN_POINTS_PER_WAVELENGTH}")


def evolve_history(grid, V, dt, steps, u=None, *, every=1, escape_tolerance=ESCAPE_PROBABILITY):
    """
    Evolve psi and keep every `every`-th grid

    Args:
        escape_tolerance (float | None): probability allowed in the boundary
            strips; None disables the check (states meant to touch the walls)

    Returns:
        list: WaveFunctionGrid snapshots starting with the input grid
    """
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be > 0, got {dt}")
    if steps < 0 or every < 1:
        raise ValueError(f"need steps >= 0 and every >= 1, got {steps}, {every}")
    _check_resolution(grid)
    propagator = CrankNicolsonPropagator(grid, V, dt, u)

    history = [grid]
    norm = grid.norm
    warned = False
    for n in range(1, steps + 1):
        grid = propagator.step(grid)
        new_norm = grid.norm
        if not warned and abs(new_norm - norm) > NORM_DRIFT_PER_STEP * max(norm, 1.0):
            logger.warning("norm drifted by %.3e in one step at t=%.6g", new_norm - norm, grid.t)
            warned = True
        norm = new_norm
        if escape_tolerance is not None:
            escaped = escape_probability(grid)
            if escaped > escape_tolerance:
                raise DomainEscapeError(f"probability {escaped:.3e} reached the box edges "
                                        f"at t={grid.t:.6g}")
        if n % every == 0:
            history.append(grid)
    if history[-1] is not grid:
        history.append(grid)
    return history


def evolve_tdse(grid, V, dt, steps, u=None, *, escape_tolerance=ESCAPE_PROBABILITY):
    """Grid after `steps` Crank-Nicolson steps of size dt"""
    return evolve_history(grid, V, dt, steps, u, every=max(steps, 1),
                          escape_tolerance=escape_tolerance)[-1]


def energy_expectation(grid, V=None, u=None):
    """<psi|H|psi> / <psi|psi> with the same discrete H the propagator uses"""
    H = hamiltonian_matrix(grid, V, u)
    interior = grid.psi[1:-1]
    return float(np.real(np.vdot(interior, H @ interior)) / np.vdot(interior, interior).real)


def position_spread(grid):
    """Standard deviation of x under |psi|^2"""
    weights = grid.density
    x = grid.x
    mean = np.average(x, weights=weights)
    return float(np.sqrt(np.average((x - mean) ** 2, weights=weights)))


def free_packet_spread(sigma0, t, u=None):
    """sqrt(sigma0^2 + (hbar t / 2 m sigma0)^2)"""
    hbar, m = comparator_constants(u)
    return math.sqrt(sigma0 ** 2 + (hbar * t / (2.0 * m * sigma0)) ** 2)
