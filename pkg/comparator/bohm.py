"""Guidance-equation trajectories, Quantum Potential and the Madelung split

Phases enter only through increments between neighbouring samples, reduced
modulo pi: a real wave function that changes sign carries no flow.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from comparator.tdse import comparator_constants, energy_expectation, potential_on_grid
from config.thresholds import MADELUNG_WINDOW, MIN_WINDOW_SHARE, NODE_FLOOR
from engine.wavefront import sampled_laplacian_ratio
from models.errors import NodeError


def _reduced(phase):
    """Phase differences folded into [-pi/2, pi/2)"""
    return (phase + 0.5 * math.pi) % math.pi - 0.5 * math.pi


def _nodes(psi):
    amplitude = np.abs(psi)
    return amplitude < NODE_FLOOR * amplitude.max()


def guidance_field(grid, u=None):
    """
    v = (hbar/m) dS/dx on every grid point, masked at and next to nodes

    dS/dx is the mean of the two neighbouring phase increments over dx,
    which is exact for plane waves resolved below a quarter wavelength.
    """
    hbar, m = comparator_constants(u)
    psi = grid.psi
    increments = _reduced(np.angle(psi[1:] * np.conj(psi[:-1])))

    velocity = np.zeros(grid.n_points)
    velocity[1:-1] = (hbar / m) * (increments[:-1] + increments[1:]) / (2.0 * grid.dx)

    nodes = _nodes(psi)
    mask = nodes.copy()
    mask[1:] |= nodes[:-1]
    mask[:-1] |= nodes[1:]
    mask[0] = mask[-1] = True
    return np.ma.masked_array(velocity, mask=mask)


def guidance_velocity(grid, x, u=None):
    """
    Guidance velocity at arbitrary positions, linear between grid points

    Raises:
        NodeError: a neighbouring grid point is a node
        ValueError: x outside the box
    """
    field = guidance_field(grid, u)
    positions = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(positions < grid.x_min) or np.any(positions > grid.x_max):
        raise ValueError(f"positions outside [{grid.x_min}, {grid.x_max}]")

    offset = (positions - grid.x_min) / grid.dx
    left = np.clip(np.floor(offset).astype(int), 0, grid.n_points - 2)
    weight = offset - left
    mask = np.ma.getmaskarray(field)
    blocked = (mask[left] & (weight < 1.0)) | (mask[left + 1] & (weight > 0.0))
    if blocked.any():
        where = positions[blocked][0]
        raise NodeError(f"guidance undefined near x={where:.6g} at t={grid.t:.6g} (node)")

    values = field.filled(0.0)
    velocity = (1.0 - weight) * values[left] + weight * values[left + 1]
    return float(velocity[0]) if np.ndim(x) == 0 else velocity


def quantum_potential(grid, u=None):
    """
    Q_B = -(hbar^2 / 2m) R''/R with R = |psi|

    Uses the log-amplitude kernel of the ray fronts; nodes are masked.
    """
    hbar, m = comparator_constants(u)
    amplitude = np.abs(grid.psi)
    ratio = sampled_laplacian_ratio(grid.x, amplitude, where=f"t={grid.t:.6g}")
    return np.ma.masked_array(-(hbar ** 2 / (2.0 * m)) * ratio, mask=_nodes(grid.psi))


class MadelungResiduals(NamedTuple):
    continuity: float
    hamilton_jacobi: float


def _uniform_step(history):
    if len(history) < 3:
        raise ValueError(f"need at least 3 snapshots, got {len(history)}")
    first = history[0]
    if any(not grid.same_grid(first) for grid in history[1:]):
        raise ValueError("snapshots live on different grids")
    times = np.array([grid.t for grid in history])
    steps = np.diff(times)
    if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * steps.mean():
        raise ValueError("snapshots must be equally spaced in time")
    return float(steps.mean())


def _window(psi, where):
    """Interior points where |psi| is well above zero; one contiguous run"""
    amplitude = np.abs(psi)
    inside = amplitude >= MADELUNG_WINDOW * amplitude.max()
    inside[0] = inside[-1] = False
    points = np.flatnonzero(inside)
    if points.size < max(3, MIN_WINDOW_SHARE * len(psi)):
        raise NodeError(f"only {points.size} points carry amplitude at {where}")
    if points[-1] - points[0] + 1 != points.size:
        raise NodeError(f"a node splits the amplitude window at {where}")
    return points


def madelung_residuals(history, V=None, u=None):
    """
    Worst violations of the discrete continuity and Hamilton-Jacobi equations

    With psi_i = R_i exp(i S_i / hbar) and the three-point H, the split
    S_t + K + V + Q = 0, P_t + div j = 0 holds exactly between neighbours
    when Q uses the signed neighbour amplitudes and K = hbar^2/(2 m dx^2)
    sum R_nb (1 - cos dS_nb / hbar) / R. Time derivatives are centered.

    Continuity is normalized by max P * |<H>| / hbar, Hamilton-Jacobi by |<H>|.

    Raises:
        NodeError: a node inside the evaluated window
    """
    dt = _uniform_step(history)
    hbar, m = comparator_constants(u)
    first = history[0]
    dx = first.dx
    potential = potential_on_grid(first.x, V)
    energy = abs(energy_expectation(first, V, u))
    if energy == 0:
        raise ValueError("<H> vanishes; residuals cannot be normalized")
    hopping = hbar ** 2 / (2.0 * m * dx ** 2)

    continuity = 0.0
    hamilton_jacobi = 0.0
    for before, now, after in zip(history, history[1:], history[2:]):
        psi = now.psi
        points = _window(psi, f"t={now.t:.6g}")
        density = np.abs(psi) ** 2

        density_rate = (np.abs(after.psi) ** 2 - np.abs(before.psi) ** 2) / (2.0 * dt)
        current = (hbar / m) * np.imag(np.conj(psi[:-1]) * psi[1:]) / dx
        divergence = np.zeros_like(density)
        divergence[1:-1] = (current[1:] - current[:-1]) / dx
        scale = density.max() * energy / hbar
        continuity = max(continuity, float(np.max(np.abs(density_rate + divergence)[points]) / scale))

        R = np.abs(psi)
        raw = np.angle(psi[1:] * np.conj(psi[:-1]))
        reduced = _reduced(raw)
        # Neighbour amplitude carries the sign flip that the reduction removed
        signed = np.where(np.isclose(np.abs(raw - reduced), math.pi), -1.0, 1.0)
        rho_plus = (R[1:] * signed)[points]
        rho_minus = (R[:-1] * signed)[points - 1]
        r_plus = reduced[points]
        r_minus = reduced[points - 1]
        centre = R[points]

        quantum = -hopping * (rho_plus + rho_minus - 2.0 * centre) / centre
        kinetic = hopping * (rho_plus * (1.0 - np.cos(r_plus)) + rho_minus * (1.0 - np.cos(r_minus))) / centre
        phase_rate = hbar * np.angle(after.psi[points] * np.conj(before.psi[points])) / (2.0 * dt)
        residual = phase_rate + kinetic + potential[points] + quantum
        hamilton_jacobi = max(hamilton_jacobi, float(np.max(np.abs(residual)) / energy))

    return MadelungResiduals(continuity, hamilton_jacobi)


@dataclass(frozen=True, eq=False)
class BohmPaths:
    """x of every seed at every stored time: x has shape (n_times, n_seeds)"""

    t: np.ndarray
    x: np.ndarray

    @property
    def n_seeds(self):
        return self.x.shape[1]


def trace_bohm_trajectories(history, seeds, u=None):
    """
    Integrate dx/dt = v(x, t) through a stored history

    Each step is a midpoint rule with v linearly interpolated in time between
    the two stored grids.

    Raises:
        NodeError: a path runs into a node
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=float))
    if seeds.size == 0:
        raise ValueError("no seeds to trace")
    if len(history) < 1:
        raise ValueError("empty history")

    positions = [seeds.copy()]
    x = seeds.copy()
    for now, nxt in zip(history, history[1:]):
        dt = nxt.t - now.t
        half = x + 0.5 * dt * guidance_velocity(now, x, u)
        midpoint = 0.5 * (guidance_velocity(now, half, u) + guidance_velocity(nxt, half, u))
        x = x + dt * midpoint
        positions.append(x.copy())
    return BohmPaths(t=np.array([grid.t for grid in history]), x=np.stack(positions))


def bohm_energy_exchange(paths, u=None):
    """d(m v^2 / 2)/dt along every path, from finite differences of x(t)"""
    _, m = comparator_constants(u)
    if len(paths.t) < 3:
        raise ValueError("need at least 3 stored times")
    velocity = np.gradient(paths.x, paths.t, axis=0)
    return np.gradient(0.5 * m * velocity ** 2, paths.t, axis=0)


def seed_positions(grid, count):
    """Seeds at the (k + 1/2)/count quantiles of |psi|^2"""
    if count < 1:
        raise ValueError(f"need at least one seed, got {count}")
    cumulative = np.cumsum(grid.density)
    cumulative /= cumulative[-1]
    levels = (np.arange(count) + 0.5) / count
    return np.interp(levels, cumulative, grid.x)


def bohm_columns(history, paths, V=None, u=None):
    """
    Path samples in the trajectory CSV schema (z = pz = 0)

    Returns:
        dict: column name -> flat array, rows ordered by (t, ray_id)
    """
    hbar, m = comparator_constants(u)
    n_times, n_seeds = paths.x.shape
    columns = {name: [] for name in ("t", "ray_id", "x", "z", "px", "pz", "R", "Q", "H")}
    for grid, x in zip(history, paths.x):
        v = guidance_velocity(grid, x, u)
        R = np.interp(x, grid.x, np.abs(grid.psi))
        Q = np.interp(x, grid.x, quantum_potential(grid, u).filled(np.nan))
        V_here = np.interp(x, grid.x, potential_on_grid(grid.x, V))
        columns["t"].append(np.full(n_seeds, grid.t))
        columns["ray_id"].append(np.arange(n_seeds))
        columns["x"].append(x)
        columns["z"].append(np.zeros(n_seeds))
        columns["px"].append(m * v)
        columns["pz"].append(np.zeros(n_seeds))
        columns["R"].append(R)
        columns["Q"].append(Q)
        columns["H"].append(0.5 * m * v ** 2 + V_here + Q)
    return {name: np.concatenate(values) for name, values in columns.items()}
