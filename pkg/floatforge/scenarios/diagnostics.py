"""
Diagnostics and Output Writers
------------------------------

Per-sample body diagnostics, the ``diagnostics.csv`` writer/reader, legacy
VTK grid snapshots and the discrete-volume sweep of a travelling sphere.

``diagnostics.csv`` columns, in this order:

    step, body, x, y, z, qx, qy, qz, qw, heel_deg,
    vx, vy, vz, wx, wy, wz, fx, fy, fz, tx, ty, tz, covered_cells

Floats are written with 17 significant digits, so reading the file back
reproduces the in-memory values exactly.

Author: FloatForge Developers
License: MIT
"""

import logging
import os
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from floatforge.bodies.dynamics import BodyState, RigidBody
from floatforge.bodies.shapes import Sphere
from floatforge.coupling.mapping import map_body_to_grid
from floatforge.coupling.simulation import Simulation
from floatforge.lattice.topology import DomainTopology

logger = logging.getLogger(__name__)

COLUMNS = [
    "step", "body",
    "x", "y", "z",
    "qx", "qy", "qz", "qw",
    "heel_deg",
    "vx", "vy", "vz",
    "wx", "wy", "wz",
    "fx", "fy", "fz",
    "tx", "ty", "tz",
    "covered_cells",
]

INTEGER_COLUMNS = ("step", "covered_cells")

CSV_NAME = "diagnostics.csv"
ECHO_NAME = "config.echo"
SNAPSHOT_PATTERN = "snapshot_{:06d}.vtk"


def heel_axis(body: RigidBody) -> int:
    """
    World axis the heel angle is measured about.

    A body whose rotation is frozen about all but one axis heels about that
    axis; otherwise the x axis is used.
    """
    free = [axis for axis, frozen in enumerate(body.constraints.rotation) if not frozen]
    return free[0] if len(free) == 1 else 0


class BodyDiagnostics:
    """
    Time series of body states, forces and covered-cell counts.

    Example:
        >>> diagnostics = BodyDiagnostics()
        >>> diagnostics.record(sim)
        >>> diagnostics.to_frame()[["step", "vx"]]
    """

    def __init__(self) -> None:
        self._rows: List[Dict[str, object]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def record(self, sim: Simulation, offset: int = 0) -> None:
        """Append one row per body for the current time of ``sim`` (plus ``offset``)."""
        for index, body in enumerate(sim.bodies):
            state = body.state
            force, torque = sim.forces[index]
            row = {"step": int(sim.time) + offset, "body": body.name}
            row.update(zip(("x", "y", "z"), state.position.tolist()))
            row.update(zip(("qx", "qy", "qz", "qw"), state.orientation.tolist()))
            row["heel_deg"] = body.heel_angle(heel_axis(body))
            row.update(zip(("vx", "vy", "vz"), state.velocity.tolist()))
            row.update(zip(("wx", "wy", "wz"), state.angular_velocity.tolist()))
            row.update(zip(("fx", "fy", "fz"), np.asarray(force, dtype=float).tolist()))
            row.update(zip(("tx", "ty", "tz"), np.asarray(torque, dtype=float).tolist()))
            row["covered_cells"] = sim.covered_cells(index)
            self._rows.append(row)

    def last(self, body: Optional[str] = None) -> Optional[Dict[str, object]]:
        """Most recent row, optionally for one body."""
        for row in reversed(self._rows):
            if body is None or row["body"] == body:
                return dict(row)
        return None

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self._rows, columns=COLUMNS)
        return frame.astype({"step": "int64", "covered_cells": "int64", "body": "object"})


def write_diagnostics(frame: pd.DataFrame, path: str) -> str:
    """Write a diagnostics frame as CSV with 17 significant digits."""
    try:
        frame.to_csv(path, index=False, columns=COLUMNS, float_format="%.17g", lineterminator="\n")
    except OSError as exc:
        raise OSError(f"cannot write diagnostics to '{path}': {exc.strerror or exc}") from exc
    return path


def read_diagnostics(path: str) -> pd.DataFrame:
    """Read ``diagnostics.csv`` back with exact float round-trip."""
    dtypes = {name: "float64" for name in COLUMNS if name not in INTEGER_COLUMNS + ("body",)}
    dtypes.update({name: "int64" for name in INTEGER_COLUMNS}, body="object")
    return pd.read_csv(path, float_precision="round_trip", dtype=dtypes)


def write_config_echo(echo: str, out_dir: str) -> str:
    path = os.path.join(out_dir, ECHO_NAME)
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(echo)
    except OSError as exc:
        raise OSError(f"cannot write config echo to '{path}': {exc.strerror or exc}") from exc
    return path


def write_outputs(
    out_dir: str,
    echo: Optional[str],
    diagnostics: BodyDiagnostics,
    extra: Optional[Dict[str, pd.DataFrame]] = None,
) -> List[str]:
    """
    Write the config echo, ``diagnostics.csv`` and optional extra tables.

    The config echo is written first (skipped if ``echo`` is None because
    the caller already wrote it). Extra tables (e.g. the stability
    curve) are written as ``<name>.csv`` with the same float format.

    Returns:
        List of written paths.
    """
    written = []
    if echo is not None:
        written.append(write_config_echo(echo, out_dir))
    os.makedirs(out_dir, exist_ok=True)
    written.append(write_diagnostics(diagnostics.to_frame(), os.path.join(out_dir, CSV_NAME)))
    for name, frame in (extra or {}).items():
        path = os.path.join(out_dir, f"{name}.csv")
        try:
            frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        except OSError as exc:
            raise OSError(f"cannot write '{path}': {exc.strerror or exc}") from exc
        written.append(path)
    logger.info("Wrote %d output files to %s", len(written), out_dir)
    return written


def snapshot_steps(steps: int, every: int) -> List[int]:
    """Times at which snapshots are taken during a run of ``steps`` steps."""
    if every <= 0:
        return []
    return list(range(0, steps, every))


def _write_block(handle, values: np.ndarray, fmt: str) -> None:
    np.savetxt(handle, values, fmt=fmt)


def write_vtk_snapshot(sim: Simulation, path: str) -> str:
    """
    Legacy ASCII VTK snapshot of the grid.

    STRUCTURED_POINTS with one cell per lattice cell and CELL_DATA arrays
    ``state`` (0 gas, 1 interface, 2 liquid, 3 obstacle), ``fill``,
    ``density`` and ``velocity``.
    """
    nx, ny, nz = sim.topology.shape
    n = nx * ny * nz
    # VTK orders cells with x varying fastest.
    state = sim.cells.state.reshape(n, order="F").astype(np.int64)
    fill = sim.cells.phi.reshape(n, order="F")
    density = sim.rho.reshape(n, order="F")
    velocity = np.stack([sim.u[a].reshape(n, order="F") for a in range(3)], axis=1)
    try:
        with open(path, "w", encoding="ascii", newline="\n") as handle:
            handle.write("# vtk DataFile Version 3.0\n")
            handle.write(f"floatforge snapshot step {sim.time}\n")
            handle.write("ASCII\nDATASET STRUCTURED_POINTS\n")
            handle.write(f"DIMENSIONS {nx + 1} {ny + 1} {nz + 1}\n")
            handle.write("ORIGIN 0 0 0\nSPACING 1 1 1\n")
            handle.write(f"CELL_DATA {n}\n")
            handle.write("SCALARS state int 1\nLOOKUP_TABLE default\n")
            _write_block(handle, state.reshape(-1, 1), "%d")
            handle.write("SCALARS fill double 1\nLOOKUP_TABLE default\n")
            _write_block(handle, fill.reshape(-1, 1), "%.9g")
            handle.write("SCALARS density double 1\nLOOKUP_TABLE default\n")
            _write_block(handle, density.reshape(-1, 1), "%.12g")
            handle.write("VECTORS velocity double\n")
            _write_block(handle, velocity, "%.9g")
    except OSError as exc:
        raise OSError(f"cannot write snapshot '{path}': {exc.strerror or exc}") from exc
    return path


class SnapshotWriter:
    """Writes a VTK snapshot whenever the simulation time is a multiple of ``every``."""

    def __init__(self, out_dir: str, every: int) -> None:
        self.out_dir = out_dir
        self.every = int(every)
        self.written: List[str] = []

    def __call__(self, sim: Simulation) -> None:
        if self.every <= 0 or sim.time % self.every:
            return
        os.makedirs(self.out_dir, exist_ok=True)
        path = os.path.join(self.out_dir, SNAPSHOT_PATTERN.format(sim.time))
        self.written.append(write_vtk_snapshot(sim, path))


def sweep_voxel_volume(
    radius: float = 5.0,
    speed: float = 1e-4,
    steps: int = 10000,
    axis: int = 0,
    progress: bool = False,
) -> np.ndarray:
    """
    Covered-cell count of a sphere travelling along a grid axis.

    The sphere starts with its centre on a cell corner and moves ``speed``
    cells per step; the count per step shows the staircase error of the
    discrete volume around the ideal 4/3 pi r³.

    Returns:
        Integer array with one count per step, starting at step 0.
    """
    if axis not in (0, 1, 2):
        raise ValueError(f"axis must be 0, 1 or 2, got {axis}")
    side = 2 * int(np.ceil(radius)) + 4
    shape = [side, side, side]
    shape[axis] += int(np.ceil(abs(speed) * steps)) + 1
    topology = DomainTopology(tuple(shape))
    start = np.full(3, side / 2.0)
    body = RigidBody("sweep", Sphere(radius), 1.0, BodyState(start))
    direction = np.zeros(3)
    direction[axis] = 1.0 if speed >= 0 else -1.0
    if speed < 0:
        start[axis] += abs(speed) * steps

    counts = np.empty(int(steps), dtype=np.int64)
    iterator = range(int(steps))
    if progress:
        iterator = tqdm(iterator, desc="sweep", unit="step", leave=False)
    for t in iterator:
        body.state.position = start + direction * abs(speed) * t
        counts[t] = int(np.count_nonzero(map_body_to_grid(body, topology)))
    return counts


def voxel_volume_summary(counts: Sequence[int], radius: float) -> Dict[str, float]:
    """Mean, extremes and relative error of a covered-cell series."""
    counts = np.asarray(counts, dtype=np.float64)
    ideal = 4.0 / 3.0 * np.pi * radius ** 3
    mean = float(counts.mean()) if counts.size else float("nan")
    return {
        "ideal": ideal,
        "mean": mean,
        "min": float(counts.min()) if counts.size else float("nan"),
        "max": float(counts.max()) if counts.size else float("nan"),
        "relative_error": (mean - ideal) / ideal,
    }
