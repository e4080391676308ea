"""Stationary external potentials V(r) and refractive-index fields n(r)"""
import dataclasses
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.interpolate import RegularGridInterpolator

from models.errors import ConfigError, EvanescentError, OutOfDomainError

POTENTIAL_KINDS = ("free", "linear_ramp", "harmonic", "step_smoothed", "custom_tabulated")
TABLE_COLUMNS = ["x", "z", "V"]
DEFAULT_SMOOTHING = 0.02  # w0 / 50

_PARAM_DEFAULTS = {
    "free": {},
    "linear_ramp": {"slope_x": 0.0, "slope_z": 0.0, "offset": 0.0},
    "harmonic": {"stiffness": 1.0, "center": 0.0},
    "step_smoothed": {
        "height": 1.0,
        "position": 0.0,
        "width": math.inf,
        "smoothing": DEFAULT_SMOOTHING,
        "axis": "z",
    },
    "custom_tabulated": {},
}


@dataclass(frozen=True, eq=False)
class TabulatedGrid:
    """V sampled on a rectangular (x, z) grid; V has shape (len(x), len(z))"""

    x: np.ndarray
    z: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        z = np.asarray(self.z, dtype=float)
        V = np.asarray(self.V, dtype=float)
        if V.shape != (len(x), len(z)):
            raise ValueError(f"V has shape {V.shape}, expected {(len(x), len(z))}")
        if len(x) < 2 or len(z) < 2:
            raise ValueError("tabulated grid needs at least two samples per axis")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(z) <= 0):
            raise ValueError("grid coordinates must be strictly increasing")
        if not np.all(np.isfinite(V)):
            raise ValueError("tabulated V must be finite")
        grad_x = np.gradient(V, x, axis=0)
        grad_z = np.gradient(V, z, axis=1)
        for name, value in (("x", x), ("z", z), ("V", V)):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_interpolators", tuple(
            RegularGridInterpolator((x, z), values, method="linear", bounds_error=True)
            for values in (V, grad_x, grad_z)
        ))

    def __call__(self, x, z):
        x, z = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
        points = np.stack([x.ravel(), z.ravel()], axis=-1)
        try:
            V, gx, gz = (interp(points).reshape(x.shape) for interp in self._interpolators)
        except ValueError as e:
            raise OutOfDomainError(
                f"query outside tabulated grid x in [{self.x[0]}, {self.x[-1]}], "
                f"z in [{self.z[0]}, {self.z[-1]}]") from e
        return V, (gx, gz)


@dataclass(frozen=True)
class PotentialField:
    kind: str = "free"
    params: tuple = ()
    source: str = None
    table: TabulatedGrid = dataclasses.field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ValueError(f"unknown potential kind '{self.kind}' (expected one of {POTENTIAL_KINDS})")
        defaults = _PARAM_DEFAULTS[self.kind]
        given = dict(self.params)
        unknown = set(given) - set(defaults)
        if unknown:
            raise ValueError(f"{self.kind} does not take parameters {sorted(unknown)}")
        merged = tuple((name, given.get(name, default)) for name, default in defaults.items())
        object.__setattr__(self, "params", merged)

        p = dict(merged)
        if self.kind == "step_smoothed":
            if not p["smoothing"] > 0:
                raise ValueError("step_smoothed needs a smoothing length > 0")
            if p["axis"] not in ("x", "z"):
                raise ValueError(f"step axis must be 'x' or 'z', got {p['axis']!r}")
            if not p["width"] > 0:
                raise ValueError("step width must be > 0")
        for name, value in p.items():
            if isinstance(value, float) and math.isnan(value):
                raise ValueError(f"parameter {name} is NaN")
        if self.kind == "custom_tabulated" and self.table is None and self.source is None:
            raise ValueError("custom_tabulated needs a table or a source file")

    @classmethod
    def free(cls):
        return cls("free")

    @classmethod
    def linear_ramp(cls, slope_x=0.0, slope_z=0.0, offset=0.0):
        return cls("linear_ramp", (("slope_x", slope_x), ("slope_z", slope_z), ("offset", offset)))

    @classmethod
    def harmonic(cls, stiffness, center=0.0):
        return cls("harmonic", (("stiffness", stiffness), ("center", center)))

    @classmethod
    def step_smoothed(cls, height, position, smoothing=DEFAULT_SMOOTHING, width=math.inf, axis="z"):
        return cls("step_smoothed", (("height", height), ("position", position),
                                     ("width", width), ("smoothing", smoothing), ("axis", axis)))

    @classmethod
    def tabulated(cls, x, z, V, source=None):
        return cls("custom_tabulated", source=source, table=TabulatedGrid(x, z, V))

    @classmethod
    def from_csv(cls, path):
        return cls.tabulated(*load_tabulated_csv(path), source=str(path))

    def param(self, name):
        return dict(self.params)[name]

    def loaded(self):
        """Same field with its table read from disk when only a source path is known"""
        if self.kind == "custom_tabulated" and self.table is None:
            return PotentialField.from_csv(self.source)
        return self

    def evaluate(self, x, z):
        """
        V and grad V at (x, z); arrays broadcast

        Returns:
            tuple: (V, (dV/dx, dV/dz))
        """
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        zeros = np.zeros(np.broadcast(x, z).shape)
        p = dict(self.params)

        if self.kind == "free":
            return zeros, (zeros.copy(), zeros.copy())

        if self.kind == "linear_ramp":
            V = p["offset"] + p["slope_x"] * x + p["slope_z"] * z + zeros
            return V, (zeros + p["slope_x"], zeros + p["slope_z"])

        if self.kind == "harmonic":
            dx = x - p["center"] + zeros
            return 0.5 * p["stiffness"] * dx ** 2, (p["stiffness"] * dx, zeros.copy())

        if self.kind == "step_smoothed":
            along = (x if p["axis"] == "x" else z) + zeros
            ell = p["smoothing"]
            rise = np.tanh((along - p["position"]) / ell)
            V = 0.5 * p["height"] * (1.0 + rise)
            slope = 0.5 * p["height"] / ell * (1.0 - rise ** 2)
            if math.isfinite(p["width"]):
                fall = np.tanh((along - p["position"] - p["width"]) / ell)
                V = V - 0.5 * p["height"] * (1.0 + fall)
                slope = slope - 0.5 * p["height"] / ell * (1.0 - fall ** 2)
            if p["axis"] == "x":
                return V, (slope, zeros.copy())
            return V, (zeros.copy(), slope)

        return self.loaded().table(x, z)


def evaluate(field, x, z):
    return field.evaluate(x, z)


def load_tabulated_csv(path):
    """
    Read a tabulated potential: header x,z,V and one row per grid node

    Returns:
        tuple: (x, z, V) with V shaped (len(x), len(z))
    """
    frame = pd.read_csv(path)
    if list(frame.columns) != TABLE_COLUMNS:
        raise ConfigError(f"{path}: expected header {','.join(TABLE_COLUMNS)}, "
                          f"got {','.join(map(str, frame.columns))}", key="potential.file")
    if frame.duplicated(subset=["x", "z"]).any():
        raise ConfigError(f"{path}: duplicate grid nodes", key="potential.file")
    xs = np.unique(frame["x"].to_numpy(dtype=float))
    zs = np.unique(frame["z"].to_numpy(dtype=float))
    if len(frame) != len(xs) * len(zs):
        raise ConfigError(f"{path}: grid is not rectangular ({len(frame)} rows for "
                          f"{len(xs)} x {len(zs)} nodes)", key="potential.file")
    grid = frame.pivot(index="x", columns="z", values="V").reindex(index=xs, columns=zs)
    return xs, zs, grid.to_numpy(dtype=float)


@dataclass(frozen=True)
class RefractiveIndexField:
    """n(r) = 1 - V(r)/E, the index seen by massless particles of energy E"""

    potential: PotentialField = dataclasses.field(default_factory=PotentialField.free)
    energy: float = 1.0

    @classmethod
    def vacuum(cls):
        return cls()

    @classmethod
    def from_potential(cls, potential, u):
        if not u.E > 0:
            raise ValueError(f"refractive index needs E > 0, got {u.E}")
        return cls(potential, u.E)

    def evaluate(self, x, z):
        """
        Returns:
            tuple: (n, (dn/dx, dn/dz))
        """
        V, (gx, gz) = self.potential.evaluate(x, z)
        n = 1.0 - V / self.energy
        if np.any(n <= 0):
            raise EvanescentError(f"refractive index reached {float(np.min(n)):.6g} <= 0")
        return n, (-gx / self.energy, -gz / self.energy)


def refractive_index_from_potential(field, u, x, z):
    """n = 1 - V(x, z)/E for massless particles"""
    n, _ = RefractiveIndexField.from_potential(field, u).evaluate(x, z)
    return n
