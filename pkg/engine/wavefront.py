"""Wave Potential on a discretized front and flux-conserving amplitude transport

Derivatives are taken purely along the front (arclength s), in log-amplitude
form: grad^2 R / R = u'' + u'^2 with u = ln R.

Only lit rays (launch intensity above the floor) shape the Wave Potential.
Each contiguous run of lit rays is a segment. Inside a segment u'' is the
centered derivative of the centered u', which leaves a ray-to-ray sawtooth
in ln R without any restoring or amplifying response. The EDGE_RAYS rays at
either end of a segment, and every dark ray, take the ratio from a quadratic
least-squares fit to the centered values next to the nearest segment end.
"""
import numpy as np
from numpy.polynomial import Polynomial

from config.thresholds import EDGE_RAYS, FIT_RAYS, MIN_RAYS_LAPLACIAN
from models.errors import CausticError, DegenerateFrontError
from models.front import FrontScalars, lit_mask
from models.units import RegimeKind


def lit_segments(lit):
    """Index arrays of the contiguous runs of lit rays, in ray order"""
    idx = np.flatnonzero(lit)
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1) + 1
    return np.split(idx, breaks)


def _usable_segments(lit, where):
    segments = [seg for seg in lit_segments(lit) if len(seg) >= MIN_RAYS_LAPLACIAN]
    if not segments:
        raise DegenerateFrontError(
            f"no run of {MIN_RAYS_LAPLACIAN} lit rays at {where} "
            f"({int(np.count_nonzero(lit))} lit in total)")
    return segments


def _edge_count(n):
    """Rays at each end of an n-ray segment that fall back to the end fit"""
    return min(EDGE_RAYS, (n - 3) // 2)


def log_amplitude_laplacian(s, R):
    """
    u'' + u'^2 for u = ln R sampled on a strictly increasing, nonuniform s

    Both derivatives are second-order centered gradients, u'' being the
    gradient of u'; the result is exact for a quadratic u. R must be positive.
    """
    s = np.asarray(s, dtype=float)
    u = np.log(np.asarray(R, dtype=float))
    n = len(s)
    if n < MIN_RAYS_LAPLACIAN:
        raise DegenerateFrontError(f"need at least {MIN_RAYS_LAPLACIAN} samples, got {n}")
    if np.any(np.diff(s) <= 0):
        raise DegenerateFrontError("arclength is not strictly increasing")
    du = np.gradient(u, s, edge_order=2)
    d2u = np.gradient(du, s, edge_order=2)
    return d2u + du ** 2


def _end_fits(s, values, segment):
    """Quadratic fits to the centered values behind the two ends of a segment"""
    k = _edge_count(len(segment))
    centered = segment[k:len(segment) - k]
    fits = []
    for rays in (centered[:FIT_RAYS], centered[-FIT_RAYS:]):
        fits.append(Polynomial.fit(s[rays], values[rays], min(2, len(rays) - 1)))
    return fits, k


def _fill_from_fits(s, source, out, segments, derivative=False):
    """
    Write the end-fit value (or slope) into every ray outside the centered cores

    Rays between two segments use the nearer segment end, the mean of both
    at a tie.
    """
    def evaluate(fit, rays):
        return (fit.deriv() if derivative else fit)(s[rays])

    ends = []
    for seg in segments:
        (left, right), k = _end_fits(s, source, seg)
        if k:
            out[seg[:k]] = evaluate(left, seg[:k])
            out[seg[-k:]] = evaluate(right, seg[-k:])
        ends.append((seg[0], seg[-1], left, right))

    first, last = ends[0], ends[-1]
    before = np.arange(0, first[0])
    out[before] = evaluate(first[2], before)
    after = np.arange(last[1] + 1, len(s))
    out[after] = evaluate(last[3], after)
    for (_, stop, _, right), (start, _, left, _) in zip(ends, ends[1:]):
        gap = np.arange(stop + 1, start)
        if gap.size == 0:
            continue
        from_left = evaluate(right, gap)
        from_right = evaluate(left, gap)
        to_left, to_right = gap - stop, start - gap
        out[gap] = np.where(to_left < to_right, from_left,
                            np.where(to_right < to_left, from_right, 0.5 * (from_left + from_right)))
    return out


def laplacian_ratio(front):
    """Per-ray grad^2 R / R along the front"""
    n = len(front)
    if n < MIN_RAYS_LAPLACIAN:
        raise DegenerateFrontError(f"need at least {MIN_RAYS_LAPLACIAN} rays, got {n}")
    return FrontScalars(
        sampled_laplacian_ratio(front.s, front.R, lit=front.lit, where=f"t={front.t:.6g}"))


def sampled_laplacian_ratio(s, R, lit=None, where="profile"):
    """
    grad^2 R / R of any sampled amplitude profile

    lit defaults to the intensity floor applied to R itself.
    """
    s = np.asarray(s, dtype=float)
    R = np.asarray(R, dtype=float)
    if lit is None:
        if not (R.size and R.max() > 0):
            raise DegenerateFrontError(f"profile carries no amplitude (max R <= 0) at {where}")
        lit = lit_mask(R)
    segments = _usable_segments(lit, where)

    ratio = np.zeros(len(R))
    for seg in segments:
        ratio[seg] = log_amplitude_laplacian(s[seg], R[seg])
    return _fill_from_fits(s, ratio, ratio, segments)


def wave_potential_from_ratio(ratio, u, regime):
    """Regime formula applied to grad^2 R / R, scaled by the wave coupling"""
    ratio = np.asarray(ratio, dtype=float)
    kind = RegimeKind(regime.kind)
    if kind is RegimeKind.NONRELATIVISTIC:
        Q = -(u.hbar ** 2 / (2.0 * u.mass)) * ratio
    elif kind is RegimeKind.RELATIVISTIC:
        Q = -(u.hbar ** 2 * u.c ** 2) * ratio / (2.0 * u.E)
    else:
        Q = -(u.c / (2.0 * u.k0)) * ratio
    return regime.coupling * Q


def wave_potential(front, u, regime):
    """
    Wave Potential per ray: Q (particles) or W (optics)

    Returns zeros without touching the amplitudes when the coupling is off.
    """
    if regime.coupling == 0.0:
        return FrontScalars(np.zeros(len(front)))
    return FrontScalars(wave_potential_from_ratio(laplacian_ratio(front).values, u, regime))


def transverse_gradient(front, f):
    """
    df/ds with the stencil layout of the Wave Potential

    Centered rays of each lit segment use the nonuniform gradient over the
    segment; segment ends and dark rays use the slope of the end fit.
    """
    values = np.asarray(f, dtype=float)
    if values.shape != (len(front),):
        raise ValueError(f"expected {len(front)} per-ray values, got shape {values.shape}")
    s = front.s
    segments = _usable_segments(front.lit, f"t={front.t:.6g}")
    grad = np.zeros(len(front))
    for seg in segments:
        if np.any(np.diff(s[seg]) <= 0):
            raise DegenerateFrontError(f"duplicate s values (zero spacing) at t={front.t:.6g}")
        grad[seg] = np.gradient(values[seg], s[seg], edge_order=2)
    return FrontScalars(_fill_from_fits(s, values, grad, segments, derivative=True))


def _gaps(front, idx):
    """Distance between consecutive rays of idx measured along their mean normal"""
    nx, nz = front.normal
    mx = nx[idx[:-1]] + nx[idx[1:]]
    mz = nz[idx[:-1]] + nz[idx[1:]]
    norm = np.hypot(mx, mz)
    with np.errstate(divide="ignore", invalid="ignore"):
        gaps = (np.diff(front.x[idx]) * mx + np.diff(front.z[idx]) * mz) / norm
    return np.where(norm > 0, gaps, -np.inf)


def lit_gaps(front):
    """
    Gaps between consecutive lit rays

    Returns:
        tuple: (lit ray indices, gaps between them)
    """
    idx = np.flatnonzero(front.lit)
    if idx.size < 2:
        return idx, np.empty(0)
    return idx, _gaps(front, idx)


def tube_widths(front):
    """
    Per-ray tube width

    Inside a lit segment: mean of the adjacent gaps, half-gap at the segment
    ends. Dark rays and lone lit rays carry no tube (width 0). Any two
    consecutive lit rays out of order, across segments too, are a caustic.
    """
    idx, gaps = lit_gaps(front)
    if idx.size < 2:
        raise DegenerateFrontError(f"need two lit rays for a ray tube, got {idx.size}")
    crossed = ~(gaps > 0)
    if crossed.any():
        i = int(np.flatnonzero(crossed)[0])
        raise CausticError(f"rays {idx[i]} and {idx[i + 1]} crossed at t={front.t:.6g}")

    widths = np.zeros(len(front))
    for seg in lit_segments(front.lit):
        if len(seg) < 2:
            continue
        inner = _gaps(front, seg)
        widths[seg[0]] = 0.5 * inner[0]
        widths[seg[-1]] = 0.5 * inner[-1]
        widths[seg[1:-1]] = 0.5 * (inner[:-1] + inner[1:])
    return widths


def front_flux(front):
    """R^2 |p| ds per tube"""
    return front.R ** 2 * front.speed * tube_widths(front)


def transport_amplitude(front_prev, front_next):
    """
    Amplitudes on front_next that keep R^2 |p| ds fixed tube by tube

    Rays without a tube keep R^2 |p| fixed.
    """
    if len(front_prev) != len(front_next):
        raise ValueError(
            f"ray count changed between fronts ({len(front_prev)} -> {len(front_next)})")
    prev_widths = tube_widths(front_prev)
    next_widths = tube_widths(front_next)
    tube = prev_widths > 0
    ratio = front_prev.speed / front_next.speed
    ratio = np.where(tube, ratio * prev_widths / np.where(tube, next_widths, 1.0), ratio)
    return FrontScalars(front_prev.R * np.sqrt(ratio))
