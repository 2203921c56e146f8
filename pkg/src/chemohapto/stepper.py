"""First-order Lie splitting for the coupled system.

One step is: exact exponential relaxation of ``w`` with ``p`` frozen,
explicit upwind transport of ``p``, exact logistic and uptake reactions,
then a theta-scheme diffusion solve for ``p`` and ``c`` (tridiagonal per
axis; sequential axis sweeps in 2D).  The linear ``-c`` decay commutes
with the Neumann Laplacian and is applied as the exact factor ``e^{-dt}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import diagnostics
from .discretization import chemo_hapto_velocity, transport_divergence
from .model import Grid, Params, State


class SolverError(RuntimeError):
    """The implicit diffusion solve failed."""


class DivergenceError(FloatingPointError):
    """A field became NaN or infinite."""

    def __init__(self, message: str, field_name: str = "", step: int = -1, t: float = math.nan):
        super().__init__(message)
        self.field_name = field_name
        self.step = step
        self.t = t


@dataclass(frozen=True)
class StepConfig:
    dt: float = 1e-2
    theta: float = 1.0
    positivity_floor: float = 0.0
    cfl_safety: float = 0.25
    max_dt: float = 0.1
    auto_clamp: bool = False

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not 0.5 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0.5, 1], got {self.theta}")
        if not 0.0 < self.cfl_safety < 1.0:
            raise ValueError(f"cfl_safety must lie in (0, 1), got {self.cfl_safety}")
        if self.positivity_floor < 0:
            raise ValueError("positivity_floor must be nonnegative")
        if not self.max_dt > 0:
            raise ValueError("max_dt must be positive")


@dataclass
class StepReport:
    t_new: float
    min_p: float
    negative_clips: int
    direct_solve: bool = True
    substeps: int = 1
    # exact time integrals over the step, used by the bound monitors
    int_p_wdev: float = 0.0
    int_logistic: float = 0.0


def stable_dt(state: State, params: Params, grid: Grid, cfl_safety: float = 0.25,
              max_dt: float = 0.1) -> float:
    """Largest step allowed by the transport CFL and the reaction cap."""
    dt = max_dt
    for h, vel in zip(grid.spacing, chemo_hapto_velocity(state, params, grid)):
        vmax = float(np.max(np.abs(vel)))
        if vmax > 0:
            dt = min(dt, cfl_safety * h / vmax)
    pmax = max(float(np.max(state.p)), 1.0)
    return min(dt, 1.0 / (2.0 * params.lam * pmax))


def relax_w_deviation(v, p, gamma: float, dt: float) -> np.ndarray:
    """``(w - 1)`` after ``dt`` of ``w_t = gamma p (1 - w)`` with ``p`` frozen."""
    return v * np.exp(-gamma * np.maximum(p, 0.0) * dt)


def step_w_exact(state: State, params: Params, dt: float) -> np.ndarray:
    """``w_new = 1 + (w - 1) exp(-gamma p dt)`` per cell."""
    return 1.0 + relax_w_deviation(state.v, state.p, params.gamma, dt)


def logistic_deviation(u, lam: float, dt: float) -> np.ndarray:
    """``p - 1`` after ``dt`` of ``p_t = lam p (1 - p)``, exact per cell."""
    decay = math.exp(-lam * dt)
    return u * decay / (1.0 - u * math.expm1(-lam * dt))


@lru_cache(maxsize=64)
def _banded(n: int, h: float, coef: float) -> np.ndarray:
    """Banded storage of ``I - coef * D`` with the Neumann second difference D."""
    r = coef / (h * h)
    ab = np.zeros((3, n))
    ab[0, 1:] = -r
    ab[2, :-1] = -r
    ab[1, :] = 1.0 + 2.0 * r
    ab[1, 0] = ab[1, -1] = 1.0 + r
    ab.setflags(write=False)
    return ab


def _second_difference(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    g = np.diff(values, axis=axis) / h
    pad = [(0, 0)] * values.ndim
    pad[axis] = (1, 1)
    return np.diff(np.pad(g, pad), axis=axis) / h


def diffuse(values: np.ndarray, grid: Grid, dt: float, theta: float) -> np.ndarray:
    """Theta-scheme step of ``u_t = Laplacian u``, one tridiagonal solve per axis."""
    out = values
    for axis, (n, h) in enumerate(zip(grid.cells, grid.spacing)):
        rhs = out
        if theta < 1.0:
            rhs = out + (1.0 - theta) * dt * _second_difference(out, axis, h)
        moved = np.moveaxis(rhs, axis, 0)
        flat = moved.reshape(n, -1)
        try:
            sol = scipy.linalg.solve_banded((1, 1), _banded(n, h, theta * dt), flat,
                                            check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SolverError(f"diffusion solve failed on axis {axis}: {exc}") from exc
        out = np.moveaxis(sol.reshape(moved.shape), 0, axis)
    return out


def _single_step(state: State, params: Params, grid: Grid, dt: float, theta: float,
                 floor: float) -> tuple[State, StepReport]:
    vol = grid.cell_volume
    p_start = state.p

    # 1. w relaxes exactly with p frozen; the matching time integral of
    #    p |w - 1| over the substep is |v| (1 - e^{-gamma p dt}) / gamma.
    v_new = relax_w_deviation(state.v, p_start, params.gamma, dt)
    int_p_wdev = float(np.sum(np.abs(state.v) - np.abs(v_new))) * vol / params.gamma
    mid = replace(state, v=v_new)

    # 2. explicit upwind transport of p
    u = state.u - dt * transport_divergence(mid, params, grid)

    # 3. exact logistic growth, then TAF uptake with the step-averaged p
    mass_before = float(np.sum(u)) * vol
    u = logistic_deviation(u, params.lam, dt)
    int_logistic = (float(np.sum(u)) * vol - mass_before) / params.lam
    p_mid = 0.5 * (p_start + (1.0 + u))
    c = state.c * np.exp(-params.mu * dt * np.maximum(p_mid, 0.0))

    # 4. implicit diffusion; exact linear decay of c
    u = diffuse(u, grid, dt, theta)
    c = diffuse(c, grid, dt, theta) * math.exp(-dt)

    clips = 0
    low_p = u < floor - 1.0
    if low_p.any():
        clips += int(low_p.sum())
        u = np.where(low_p, floor - 1.0, u)
    low_c = c < floor
    if low_c.any():
        clips += int(low_c.sum())
        c = np.where(low_c, floor, c)

    new = State(u, c, v_new, state.t + dt)
    report = StepReport(new.t, float(np.min(new.p)), clips,
                        int_p_wdev=int_p_wdev, int_logistic=int_logistic)
    return new, report


def _check_finite(state: State, step_index: int) -> None:
    for name, arr in (("p", state.u), ("c", state.c), ("w", state.v)):
        if not np.all(np.isfinite(arr)):
            raise DivergenceError(
                f"non-finite values in {name} at step {step_index} (t={state.t:.6g})",
                field_name=name, step=step_index, t=state.t)


def step(state: State, params: Params, grid: Grid, cfg: StepConfig,
         dt: float | None = None, step_index: int = -1) -> tuple[State, StepReport]:
    """Advance one step of size ``dt`` (default ``cfg.dt``).

    With ``cfg.auto_clamp`` the step is split into equal substeps that each
    respect :func:`stable_dt`.
    """
    dt = cfg.dt if dt is None else dt
    nsub = 1
    if cfg.auto_clamp:
        limit = stable_dt(state, params, grid, cfg.cfl_safety, cfg.max_dt)
        nsub = max(1, math.ceil(dt / limit - 1e-12))
    sub = dt / nsub
    total = StepReport(state.t, math.inf, 0, substeps=nsub)
    for _ in range(nsub):
        state, rep = _single_step(state, params, grid, sub, cfg.theta, cfg.positivity_floor)
        _check_finite(state, step_index)
        total.negative_clips += rep.negative_clips
        total.int_p_wdev += rep.int_p_wdev
        total.int_logistic += rep.int_logistic
        total.min_p = min(total.min_p, rep.min_p)
    total.t_new = state.t
    return state, total


@dataclass
class Trajectory:
    """Diagnostic records of one run plus optional field snapshots."""

    records: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    grid: Grid | None = None
    params: Params | None = None
    kappa: float = 1.0
    dt: float = math.nan
    clips: int = 0
    final: State | None = None

    def __len__(self):
        return len(self.records)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    def lr_column(self, r: float) -> np.ndarray:
        return np.array([rec.lr_norms[r] for rec in self.records])


def _steps_per(interval: float, dt: float, what: str) -> int:
    k = round(interval / dt)
    if k < 1 or abs(k * dt - interval) > 1e-9 * max(1.0, interval):
        raise ValueError(f"{what} {interval} is not a whole number of steps of {dt}")
    return k


def run(state0: State, params: Params, grid: Grid, cfg: StepConfig, horizon: float,
        cadence: float, *, kappa: float | None = None, lr=(2.0, 4.0),
        snapshot_cadence: float | None = None, snapshot_times=()) -> Trajectory:
    """Step from ``state0`` to ``horizon``, recording diagnostics every ``cadence``.

    ``cadence`` and ``snapshot_cadence`` must be whole multiples of
    ``cfg.dt``; a shorter final step lands exactly on ``horizon``.
    Snapshots are taken at every ``snapshot_cadence`` and at the step
    boundaries nearest to each of ``snapshot_times``.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    state0.check(grid)
    dt = cfg.dt
    if kappa is None:
        choice = diagnostics.choose_kappa(params, state0.w)
        kappa = choice.kappa if choice.valid else (params.rho ** 2 + 2.0) / (2.0 * params.gamma)

    rec_every = _steps_per(cadence, dt, "record cadence")
    snap_every = _steps_per(snapshot_cadence, dt, "snapshot cadence") if snapshot_cadence else 0
    snap_steps = {round(t / dt) for t in snapshot_times}

    traj = Trajectory(grid=grid, params=params, kappa=kappa, dt=dt)
    int_p_wdev = 0.0
    int_logistic = 0.0

    def observe(st: State, n: int, force: bool = False):
        if force or n % rec_every == 0:
            rec = diagnostics.record(st, params, grid, kappa, lr=lr)
            rec.int_p_wdev = int_p_wdev
            rec.int_logistic = int_logistic
            traj.records.append(rec)
        if (snap_every and n % snap_every == 0) or n in snap_steps:
            traj.snapshots.append(st.copy())

    state = state0.copy()
    nfull = int(math.floor(horizon / dt + 1e-9))
    tail = horizon - nfull * dt
    observe(state, 0)
    n = 0
    while n < nfull:
        n += 1
        try:
            state, rep = step(state, params, grid, cfg, step_index=n)
        except DivergenceError as exc:
            raise DivergenceError(f"{exc} [run failed near t={state.t + dt:.6g}]",
                                  exc.field_name, n, state.t + dt) from exc
        except SolverError as exc:
            raise SolverError(f"{exc} [run failed near t={state.t + dt:.6g}]") from exc
        state.t = state0.t + n * dt
        traj.clips += rep.negative_clips
        int_p_wdev += rep.int_p_wdev
        int_logistic += rep.int_logistic
        observe(state, n, force=(n == nfull and tail <= 1e-12 * max(1.0, horizon)
                                 and n % rec_every != 0))
    if tail > 1e-12 * max(1.0, horizon):
        state, rep = step(state, params, grid, cfg, dt=tail, step_index=n + 1)
        state.t = state0.t + horizon
        traj.clips += rep.negative_clips
        int_p_wdev += rep.int_p_wdev
        int_logistic += rep.int_logistic
        observe(state, -1, force=True)
    traj.final = state
    return traj
