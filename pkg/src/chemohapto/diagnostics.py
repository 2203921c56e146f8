"""Norms, transformed variables, the Lyapunov pair (F, G) and rate fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .discretization import cell_face_product, gradient_faces
from .model import Grid, Params, State, haptotaxis_threshold

# Floor for p in |grad p|^2 / p.
P_FLOOR = 1e-14


@dataclass
class DiagRecord:
    t: float
    mass_p: float
    mean_p: float
    linf_p_minus_1: float
    l2_p_minus_1: float
    lr_norms: dict
    w12_c: float
    w12_w_minus_1: float
    linf_c: float
    grad_w_l2_sq: float
    F: float
    G: float
    min_p: float
    max_p: float
    min_w: float
    max_w: float
    # extras beyond the fixed CSV prefix
    mean_p_minus_1: float = 0.0
    l2_p_minus_mean_sq: float = 0.0
    l1_w_minus_1: float = 0.0
    fisher_p: float = 0.0
    p_grad_w_sq: float = 0.0
    p_abs_w_minus_1: float = 0.0
    p_grad_c_sq: float = 0.0
    int_p_wdev: float = 0.0
    int_logistic: float = 0.0


@dataclass
class KappaChoice:
    epsilon1: float
    kappa: float
    valid: bool


@dataclass
class RateFit:
    rate: float
    intercept: float
    r_squared: float
    window: tuple
    samples: int = 0


@dataclass
class Violation:
    monitor: str
    value: float
    bound: float

    @property
    def excess(self) -> float:
        return self.value - self.bound

    def __str__(self):
        return f"{self.monitor}: {self.value:.6g} exceeds {self.bound:.6g}"


def transform_q(state: State, params: Params) -> np.ndarray:
    """``q = p (c + 1)^(-alpha) exp(-rho w)``."""
    return state.p * (state.c + 1.0) ** (-params.alpha) * np.exp(-params.rho * state.w)


def transform_z(state: State, params: Params) -> np.ndarray:
    """``z = p exp(-rho w)``; equals ``exp(-rho)`` at equilibrium."""
    return state.p * np.exp(-params.rho * state.w)


def _p_log_p_minus_p(u: np.ndarray) -> np.ndarray:
    p = 1.0 + u
    safe = np.where(p > P_FLOOR, u, 0.0)
    return np.where(p > P_FLOOR, p * (np.log1p(safe) - 1.0), 0.0)


def lyapunov_F(state: State, params: Params, grid: Grid, kappa: float) -> float:
    """Lyapunov functional

    ``kappa int |grad w|^2 + int p (ln p - 1) + rho int p (w - 1)
    - gamma kappa int p (w - 1)^2``.

    The haptotactic weight ``rho`` on the third integral is what makes
    ``dF/dt`` equal :func:`dissipation_G` along solutions.
    """
    gw = gradient_faces(state.v, grid)
    grad_w_sq = cell_face_product(gw, gw)
    p, v = state.p, state.v
    integrand = (
        kappa * grad_w_sq
        + _p_log_p_minus_p(state.u)
        + params.rho * p * v
        - params.gamma * kappa * p * v * v
    )
    return grid.integrate(integrand)


def _dissipation_terms(state: State, params: Params, grid: Grid, kappa: float) -> dict:
    a, r, lam, g = params.alpha, params.rho, params.lam, params.gamma
    p, c, v, u = state.p, state.c, state.v, state.u
    gp = gradient_faces(state.u, grid)
    gc = gradient_faces(c, grid)
    gw = gradient_faces(v, grid)
    gp2 = cell_face_product(gp, gp)
    gpgc = cell_face_product(gp, gc)
    gcgw = cell_face_product(gc, gw)
    gw2 = cell_face_product(gw, gw)
    gc2 = cell_face_product(gc, gc)
    one_minus_p = -u
    logp = np.where(p > P_FLOOR, np.log1p(np.where(p > P_FLOOR, u, 0.0)), 0.0)
    integ = grid.integrate
    return {
        "fisher": integ(gp2 / np.maximum(p, P_FLOOR)),
        "chemo_cross": integ(a / (1.0 + c) * gpgc),
        "mixed": integ((-2.0 * a * g * kappa * v + a * r) * p / (1.0 + c) * gcgw),
        "hapto": integ((r * r - 2.0 * g * kappa - 2.0 * r * g * kappa * v) * p * gw2),
        "logistic_entropy": lam * integ(p * one_minus_p * logp),
        "logistic_w": lam * r * integ(p * one_minus_p * v),
        "production": -g * r * integ(p * p * v),
        "kappa_lower": 2.0 * g * g * kappa * integ(p * p * v * v)
        - lam * g * kappa * integ(p * one_minus_p * v * v),
        "p_grad_w_sq": integ(p * gw2),
        "p_grad_c_sq": integ(p * gc2),
    }


def dissipation_G(state: State, params: Params, grid: Grid, kappa: float) -> float:
    """Time derivative of :func:`lyapunov_F` along solutions, all eight terms."""
    return _combine(_dissipation_terms(state, params, grid, kappa))


def _combine(t: dict) -> float:
    return (
        -t["fisher"] + t["chemo_cross"] + t["mixed"] + t["hapto"]
        + t["logistic_entropy"] + t["logistic_w"] + t["production"] + t["kappa_lower"]
    )


def choose_kappa(params: Params, w0) -> KappaChoice:
    """Pick ``kappa`` with ``rho^2 - 2 gamma kappa eps1 = -2`` when ``min w0 > 1 - 1/rho``."""
    min_w0 = float(np.min(w0))
    if not min_w0 > haptotaxis_threshold(params):
        return KappaChoice(math.nan, math.nan, False)
    eps1 = 1.0 - params.rho * max(0.0, 1.0 - min_w0)
    eps1 = min(1.0, max(eps1, np.finfo(float).tiny))
    kappa = (params.rho ** 2 + 2.0) / (2.0 * params.gamma * eps1)
    return KappaChoice(eps1, kappa, True)


def lr_norm(values, grid: Grid, r: float) -> float:
    values = np.abs(np.asarray(values))
    if math.isinf(r):
        return float(np.max(values))
    return grid.integrate(values ** r) ** (1.0 / r)


def record(state: State, params: Params, grid: Grid, kappa: float, lr=(2.0, 4.0)) -> DiagRecord:
    """Evaluate every monitored quantity on one state."""
    p, u, c, v = state.p, state.u, state.c, state.v
    measure = grid.measure
    gc = gradient_faces(c, grid)
    gw = gradient_faces(v, grid)
    grad_c_sq = grid.integrate(cell_face_product(gc, gc))
    grad_w_sq = grid.integrate(cell_face_product(gw, gw))
    mean_u = grid.integrate(u) / measure
    terms = _dissipation_terms(state, params, grid, kappa)
    G = _combine(terms)
    mass = grid.integrate(p)
    return DiagRecord(
        t=float(state.t),
        mass_p=mass,
        mean_p=mass / measure,
        linf_p_minus_1=float(np.max(np.abs(u))),
        l2_p_minus_1=lr_norm(u, grid, 2.0),
        lr_norms={float(r): lr_norm(u, grid, float(r)) for r in lr},
        w12_c=math.sqrt(grid.integrate(c * c) + grad_c_sq),
        w12_w_minus_1=math.sqrt(grid.integrate(v * v) + grad_w_sq),
        linf_c=float(np.max(np.abs(c))),
        grad_w_l2_sq=grad_w_sq,
        F=lyapunov_F(state, params, grid, kappa),
        G=G,
        min_p=float(np.min(p)),
        max_p=float(np.max(p)),
        min_w=float(np.min(state.w)),
        max_w=float(np.max(state.w)),
        mean_p_minus_1=mean_u,
        l2_p_minus_mean_sq=grid.integrate((u - mean_u) ** 2),
        l1_w_minus_1=grid.integrate(np.abs(v)),
        fisher_p=terms["fisher"],
        p_grad_w_sq=terms["p_grad_w_sq"],
        p_abs_w_minus_1=grid.integrate(p * np.abs(v)),
        p_grad_c_sq=terms["p_grad_c_sq"],
    )


def _uniform_spacing(times: np.ndarray) -> float:
    steps = np.diff(times)
    delta = float(np.mean(steps))
    if np.max(np.abs(steps - delta)) > 1e-9 * max(1.0, delta):
        raise ValueError("records are not at a uniform cadence")
    return delta


def mean_ode_residual(trajectory, lam: float | None = None, measure: float | None = None):
    """Residual of the mean-value equation at each interior record.

    ``d(pbar)/dt + lam pbar (pbar - 1) + lam/|Omega| ||p - pbar||_2^2`` with the
    time derivative by centred differences.  Returns ``(times, residuals)``.
    """
    records = trajectory.records
    if len(records) < 3:
        raise ValueError("mean_ode_residual needs at least 3 records")
    lam = trajectory.params.lam if lam is None else lam
    measure = trajectory.grid.measure if measure is None else measure
    times = np.array([r.t for r in records])
    # a trailing partial step would break the centred difference
    if len(times) > 3 and not np.isclose(times[-1] - times[-2], times[1] - times[0]):
        times = times[:-1]
        records = records[:-1]
    delta = _uniform_spacing(times)
    dev = np.array([r.mean_p_minus_1 for r in records])
    spread = np.array([r.l2_p_minus_mean_sq for r in records])
    pbar = 1.0 + dev
    deriv = (dev[2:] - dev[:-2]) / (2.0 * delta)
    inner = slice(1, -1)
    residual = deriv + lam * pbar[inner] * dev[inner] + lam / measure * spread[inner]
    return times[inner], residual


def fit_decay_rate(times, values, window=None) -> RateFit:
    """Least-squares line through ``(t, ln value)``; ``rate = -slope``.

    ``window`` defaults to the last half of the sampled interval.  Only
    positive values inside the window are used; at least 8 are required.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is None:
        t_end = float(times.max())
        window = (0.5 * t_end, t_end)
    lo, hi = window
    mask = (times >= lo - 1e-12) & (times <= hi + 1e-12) & (values > 0) & np.isfinite(values)
    if mask.sum() < 8:
        raise ValueError(f"need at least 8 positive samples in window {window}, got {int(mask.sum())}")
    t, y = times[mask], np.log(values[mask])
    if np.ptp(y) == 0:
        return RateFit(0.0, float(y[0]), 1.0, (lo, hi), int(mask.sum()))
    fit = stats.linregress(t, y)
    return RateFit(-float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2), (lo, hi),
                   int(mask.sum()))


@dataclass
class MonitorSlack:
    mass_rel: float = 1e-3
    c_abs: float = 1e-8
    w_abs: float = 0.0
    wdev_integral_rel: float = 1e-3


def bound_monitors(rec: DiagRecord, initial: DiagRecord, params: Params, measure: float,
                   slack: MonitorSlack | None = None) -> list[Violation]:
    """Check the a-priori bounds of one record against the run's initial record.

    Monitors: mass ``<= max(int p0, |Omega|)``; ``max c <= max c0 e^{-t}``;
    ``0 <= w <= max(max w0, 1)``; running ``int int p |w - 1|`` against
    ``||w0 - 1||_1 / gamma``.
    """
    slack = slack or MonitorSlack()
    out = []
    mass_bound = max(initial.mass_p, measure) * (1.0 + slack.mass_rel)
    if rec.mass_p > mass_bound:
        out.append(Violation("mass", rec.mass_p, mass_bound))
    c_bound = initial.linf_c * math.exp(-(rec.t - initial.t)) + slack.c_abs
    if rec.linf_c > c_bound:
        out.append(Violation("c_sup", rec.linf_c, c_bound))
    w_upper = max(initial.max_w, 1.0) + slack.w_abs
    if rec.max_w > w_upper:
        out.append(Violation("w_upper", rec.max_w, w_upper))
    if rec.min_w < -slack.w_abs:
        out.append(Violation("w_lower", -rec.min_w, slack.w_abs))
    wdev_bound = initial.l1_w_minus_1 / params.gamma * (1.0 + slack.wdev_integral_rel)
    if rec.int_p_wdev > wdev_bound:
        out.append(Violation("p_wdev_integral", rec.int_p_wdev, wdev_bound))
    return out


def trajectory_violations(trajectory, slack: MonitorSlack | None = None) -> list[Violation]:
    """All monitor violations across a trajectory, first record as reference."""
    first = trajectory.records[0]
    out = []
    for rec in trajectory.records:
        out.extend(bound_monitors(rec, first, trajectory.params, trajectory.grid.measure, slack))
    return out
