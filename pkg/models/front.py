"""Ray, wavefront and trajectory containers"""
import dataclasses
from dataclasses import dataclass, field

import numpy as np

from config.thresholds import INTENSITY_FLOOR


def lit_mask(R, floor=INTENSITY_FLOOR):
    """Rays whose R^2 exceeds floor * max(R^2); all dark when nothing carries amplitude"""
    R = np.asarray(R, dtype=float)
    peak = R.max() if R.size else 0.0
    if not peak > 0:
        return np.zeros(R.shape, dtype=bool)
    return R ** 2 > floor * peak ** 2


@dataclass(frozen=True)
class RayState:
    x: float
    z: float
    px: float
    pz: float
    R: float
    Q: float = 0.0
    H: float = 0.0


@dataclass(frozen=True)
class FrontScalars:
    """Per-ray real numbers aligned with a Wavefront's ray ordering"""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, item):
        return self.values[item]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


_RAY_FIELDS = ("x", "z", "px", "pz", "R", "Q", "H")


@dataclass(frozen=True, eq=False)
class Wavefront:
    """
    Equal-time front of rays, stored column-wise

    Rays keep their launch ordering for the whole run. The arclength s is
    measured along the polyline through the ray positions, starting at the
    first ray. lit marks the rays that carry flux; it is fixed at launch
    and defaults to lit_mask(R).
    """

    x: np.ndarray
    z: np.ndarray
    px: np.ndarray
    pz: np.ndarray
    R: np.ndarray
    Q: np.ndarray = None
    H: np.ndarray = None
    t: float = 0.0
    lit: np.ndarray = None

    def __post_init__(self):
        n = len(np.atleast_1d(self.x))
        for name in _RAY_FIELDS:
            value = getattr(self, name)
            column = np.zeros(n) if value is None else np.array(value, dtype=float, ndmin=1)
            if column.shape != (n,):
                raise ValueError(f"column '{name}' has shape {column.shape}, expected ({n},)")
            column.setflags(write=False)
            object.__setattr__(self, name, column)
        if n == 0:
            raise ValueError("a wavefront needs at least one ray")
        if np.any(self.R < 0) or not np.all(np.isfinite(self.R)):
            raise ValueError("amplitudes must be finite and >= 0")
        if np.any((self.px == 0) & (self.pz == 0)):
            raise ValueError("every ray needs a non-zero momentum")
        object.__setattr__(self, "t", float(self.t))
        lit = lit_mask(self.R) if self.lit is None else np.array(self.lit, dtype=bool, ndmin=1)
        if lit.shape != (n,):
            raise ValueError(f"lit mask has shape {lit.shape}, expected ({n},)")
        lit.setflags(write=False)
        object.__setattr__(self, "lit", lit)

    @classmethod
    def from_rays(cls, rays, t=0.0):
        rays = list(rays)
        columns = {name: [getattr(ray, name) for ray in rays] for name in _RAY_FIELDS}
        return cls(t=t, **columns)

    def __len__(self):
        return len(self.x)

    @property
    def rays(self):
        return tuple(
            RayState(*(float(getattr(self, name)[i]) for name in _RAY_FIELDS))
            for i in range(len(self))
        )

    @property
    def s(self):
        seg = np.hypot(np.diff(self.x), np.diff(self.z))
        return np.concatenate(([0.0], np.cumsum(seg)))

    @property
    def speed(self):
        return np.hypot(self.px, self.pz)

    @property
    def normal(self):
        """In-plane unit vectors perpendicular to p, pointing toward increasing ray index"""
        speed = self.speed
        return self.pz / speed, -self.px / speed

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class TrajectoryBundle:
    """Time-ordered snapshots of one run plus the echo of what produced it"""

    snapshots: list
    scenario: str = "gaussian"
    echo: dict = field(default_factory=dict)
    units: object = None
    launch_flux: np.ndarray = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        snapshots = list(self.snapshots)
        object.__setattr__(self, "snapshots", snapshots)
        if snapshots:
            times = np.array([front.t for front in snapshots])
            if np.any(np.diff(times) <= 0):
                raise ValueError("snapshot times must be strictly increasing")
            counts = {len(front) for front in snapshots}
            if len(counts) != 1:
                raise ValueError(f"ray count changes across snapshots: {sorted(counts)}")
        if self.launch_flux is not None:
            object.__setattr__(self, "launch_flux", np.asarray(self.launch_flux, dtype=float))

    def __len__(self):
        return len(self.snapshots)

    @property
    def n_rays(self):
        return len(self.snapshots[0]) if self.snapshots else 0

    @property
    def times(self):
        return np.array([front.t for front in self.snapshots])

    def paths(self):
        """
        Per-ray path samples

        Returns:
            dict: {"t": (n_snap,), "x"|"z"|"px"|"pz"|"R"|"Q"|"H": (n_snap, n_rays)}
        """
        out = {"t": self.times}
        for name in _RAY_FIELDS:
            out[name] = np.stack([getattr(front, name) for front in self.snapshots])
        return out
