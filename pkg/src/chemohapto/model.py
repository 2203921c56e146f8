"""Model parameters, the discrete domain and the simulation state.

The state is stored in perturbation form around the homogeneous
equilibrium ``(p, c, w) = (1, 0, 1)``: ``State.u = p - 1`` and
``State.v = w - 1``.  Late-time deviations fall far below the spacing of
doubles near 1, so carrying ``p`` and ``w`` directly would put a floor of
roughly 1e-16 under every decay curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


class ShapeError(ValueError):
    """Field shape does not match the grid."""


@dataclass(frozen=True)
class Params:
    """The five positive model constants."""

    alpha: float = 0.5
    rho: float = 0.5
    lam: float = 1.0
    mu: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "rho", "lam", "mu", "gamma"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"parameter {name} must be positive, got {value!r}")


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred grid on an interval or an axis-aligned rectangle."""

    lengths: tuple[float, ...]
    cells: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(float(x) for x in np.atleast_1d(self.lengths))
        cells = tuple(int(n) for n in np.atleast_1d(self.cells))
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "cells", cells)
        if len(lengths) not in (1, 2) or len(cells) != len(lengths):
            raise ValueError("grid must be 1D or 2D with one cell count per axis")
        if any(not np.isfinite(x) or x <= 0 for x in lengths):
            raise ValueError(f"grid lengths must be positive, got {lengths}")
        if any(n < 4 for n in cells):
            raise ValueError(f"need at least 4 cells per axis, got {cells}")

    @classmethod
    def interval(cls, length: float = 1.0, cells: int = 256) -> Grid:
        return cls((length,), (cells,))

    @classmethod
    def rectangle(cls, lx: float = 1.0, ly: float = 1.0, nx: int = 96, ny: int = 96) -> Grid:
        return cls((lx, ly), (nx, ny))

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.lengths, self.cells))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def measure(self) -> float:
        """|Omega|."""
        return float(np.prod(self.lengths))

    def centers(self, axis: int = 0) -> np.ndarray:
        h = self.spacing[axis]
        return (np.arange(self.cells[axis]) + 0.5) * h

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Cell-centre coordinate arrays broadcast to the field shape."""
        return np.meshgrid(*(self.centers(a) for a in range(self.dim)), indexing="ij")

    def integrate(self, values) -> float:
        """Midpoint quadrature of a cell-centred field."""
        return float(np.sum(values) * self.cell_volume)

    def check(self, values, name: str = "field") -> np.ndarray:
        arr = np.asarray(values, dtype=float)
        if arr.shape != self.shape:
            raise ShapeError(f"{name} has shape {arr.shape}, grid expects {self.shape}")
        return arr


@dataclass
class State:
    """Cell-centred fields in perturbation form plus the simulation time.

    ``u = p - 1``, ``c`` and ``v = w - 1``.  Use :meth:`from_fields` to build a
    state from ``p, c, w`` directly.
    """

    u: np.ndarray
    c: np.ndarray
    v: np.ndarray
    t: float = 0.0

    @classmethod
    def from_fields(cls, p, c, w, t: float = 0.0) -> State:
        p = np.asarray(p, dtype=float)
        w = np.asarray(w, dtype=float)
        return cls(p - 1.0, np.array(c, dtype=float), w - 1.0, float(t))

    @property
    def p(self) -> np.ndarray:
        return 1.0 + self.u

    @property
    def w(self) -> np.ndarray:
        return 1.0 + self.v

    @property
    def shape(self) -> tuple[int, ...]:
        return self.u.shape

    def copy(self) -> State:
        return replace(self, u=self.u.copy(), c=self.c.copy(), v=self.v.copy())

    def check(self, grid: Grid) -> None:
        grid.check(self.u, "p")
        grid.check(self.c, "c")
        grid.check(self.v, "w")


@dataclass
class InitialReport:
    nonneg_ok: bool
    p0_nonzero_ok: bool
    haptotaxis_smallness_ok: bool
    min_w0: float
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.nonneg_ok and self.p0_nonzero_ok and self.haptotaxis_smallness_ok


def haptotaxis_threshold(params: Params) -> float:
    """Lower bound ``1 - 1/rho`` that ``w0`` must exceed for convergence."""
    return 1.0 - 1.0 / params.rho


def validate_initial_data(state: State, params: Params, grid: Grid | None = None) -> InitialReport:
    """Check nonnegativity, ``p0 != 0`` and ``min w0 > 1 - 1/rho``.

    The state is never modified.
    """
    if grid is not None:
        state.check(grid)
    elif not (state.u.shape == state.c.shape == state.v.shape):
        raise ShapeError("p, c and w must share one shape")

    p, c, w = state.p, state.c, state.w
    details = []
    nonneg = True
    for name, arr in (("p0", p), ("c0", c), ("w0", w)):
        lo = float(np.min(arr))
        if lo < 0:
            nonneg = False
            details.append(f"{name} is negative somewhere (min {lo:.6g})")
    p_nonzero = bool(np.max(p) > 0)
    if not p_nonzero:
        details.append("p0 vanishes identically")
    min_w0 = float(np.min(w))
    threshold = haptotaxis_threshold(params)
    small_ok = min_w0 > threshold
    if not small_ok:
        details.append(f"min w0 = {min_w0:.6g} does not exceed 1 - 1/rho = {threshold:.6g}")
    return InitialReport(nonneg, p_nonzero, small_ok, min_w0, details)


def steady_state(grid: Grid) -> State:
    """The homogeneous equilibrium (1, 0, 1) at t = 0."""
    zeros = np.zeros(grid.shape)
    return State(zeros.copy(), zeros.copy(), zeros.copy(), 0.0)
