"""Trajectory CSV files

One row per (snapshot, ray), ordered by (t, ray_id). Floats are written
with repr precision so that reading a file back reproduces every value.
"""
import numpy as np
import pandas as pd

from models.errors import TrajectoryIOError
from models.front import TrajectoryBundle, Wavefront

TRAJECTORY_HEADER = "t,ray_id,x,z,px,pz,R,Q,H,source"
COLUMNS = TRAJECTORY_HEADER.split(",")
SOURCES = ("exact", "bohm")


def _write_frame(frame, path):
    try:
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise TrajectoryIOError(f"cannot write {path}: {e.strerror}") from e


def trajectory_frame(bundle, source="exact"):
    """Bundle as a DataFrame in file column order"""
    if len(bundle) == 0 or bundle.n_rays == 0:
        raise ValueError("cannot write an empty bundle")
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}, got {source!r}")
    n = bundle.n_rays
    columns = {"t": np.repeat(bundle.times, n), "ray_id": np.tile(np.arange(n), len(bundle))}
    for name in COLUMNS[2:-1]:
        columns[name] = np.concatenate([getattr(front, name) for front in bundle.snapshots])
    columns["source"] = source
    return pd.DataFrame(columns, columns=COLUMNS)


def write_trajectories(bundle, path):
    """Write an exact-trajectory bundle to path"""
    _write_frame(trajectory_frame(bundle), path)


def write_bohm_trajectories(columns, path):
    """Write Bohm path samples (see comparator.bohm.bohm_columns) with source=bohm"""
    frame = pd.DataFrame({name: columns[name] for name in COLUMNS[:-1]}, columns=COLUMNS)
    if frame.empty:
        raise ValueError("cannot write empty Bohm paths")
    frame["source"] = "bohm"
    _write_frame(frame, path)


def read_trajectories(path, source="exact", **bundle_fields):
    """
    Read the rows of one source back into a TrajectoryBundle

    Raises:
        TrajectoryIOError: unreadable file, wrong header or ragged snapshots
    """
    try:
        with open(path, encoding="utf-8") as handle:
            header = handle.readline().rstrip("\n")
        frame = pd.read_csv(path, dtype={"source": str}, float_precision="round_trip")
    except OSError as e:
        raise TrajectoryIOError(f"cannot read {path}: {e.strerror}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise TrajectoryIOError(f"{path}: not a trajectory CSV ({e})") from e
    if header != TRAJECTORY_HEADER:
        raise TrajectoryIOError(f"{path}: expected header '{TRAJECTORY_HEADER}', got '{header}'")

    frame = frame[frame["source"] == source]
    if frame.empty:
        raise TrajectoryIOError(f"{path}: no rows with source={source}")

    snapshots = []
    n_rays = None
    lit = None
    for t, rows in frame.groupby("t", sort=True):
        rows = rows.sort_values("ray_id")
        if n_rays is None:
            n_rays = len(rows)
        if len(rows) != n_rays or not np.array_equal(rows["ray_id"].to_numpy(), np.arange(n_rays)):
            raise TrajectoryIOError(f"{path}: snapshot t={t!r} does not hold rays 0..{n_rays - 1}")
        try:
            # The launch snapshot fixes which rays carry flux
            front = Wavefront(t=float(t), lit=lit, **{
                name: rows[name].to_numpy(dtype=float) for name in COLUMNS[2:-1]
            })
            lit = front.lit
            snapshots.append(front)
        except ValueError as e:
            raise TrajectoryIOError(f"{path}: invalid snapshot t={t!r}: {e}") from e
    return TrajectoryBundle(snapshots=snapshots, **bundle_fields)
