"""CSV output for diagnostics and field snapshots."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .model import Grid, State

HEAD_COLUMNS = ("t", "mass_p", "mean_p", "linf_p_minus_1", "l2_p_minus_1")
TAIL_COLUMNS = (
    "w12_c", "w12_w_minus_1", "linf_c", "grad_w_l2_sq", "F", "G",
    "min_p", "max_p", "min_w", "max_w",
)
EXTRA_COLUMNS = (
    "mean_p_minus_1", "l2_p_minus_mean_sq", "l1_w_minus_1", "fisher_p", "p_grad_w_sq",
    "p_abs_w_minus_1", "p_grad_c_sq", "int_p_wdev", "int_logistic",
)


def _fmt(x: float) -> str:
    # repr is the shortest string that round-trips exactly
    return repr(float(x))


def _lr_name(r: float) -> str:
    return "lr_inf" if math.isinf(r) else f"lr_{r:g}"


def csv_columns(lr=(2.0, 4.0)) -> list[str]:
    return [*HEAD_COLUMNS, *(_lr_name(float(r)) for r in lr), *TAIL_COLUMNS, *EXTRA_COLUMNS]


def write_csv(trajectory, path, lr=None) -> None:
    """One header row, then one row per record, every float in round-trip form."""
    records = trajectory.records if hasattr(trajectory, "records") else list(trajectory)
    if lr is None:
        lr = tuple(records[0].lr_norms) if records else (2.0, 4.0)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(csv_columns(lr))
        for rec in records:
            row = [getattr(rec, c) for c in HEAD_COLUMNS]
            row += [rec.lr_norms[float(r)] for r in lr]
            row += [getattr(rec, c) for c in TAIL_COLUMNS]
            row += [getattr(rec, c) for c in EXTRA_COLUMNS]
            writer.writerow([_fmt(x) for x in row])


def read_csv(path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_snapshot(state: State, grid: Grid, path) -> None:
    """Cell-centre samples: columns ``x`` (and ``y`` in 2D), ``p``, ``c``, ``w``."""
    state.check(grid)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    coords = [m.ravel() for m in grid.mesh()]
    names = ["x", "y"][: grid.dim]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([*names, "p", "c", "w"])
        for row in zip(*coords, state.p.ravel(), state.c.ravel(), state.w.ravel()):
            writer.writerow([_fmt(x) for x in row])
