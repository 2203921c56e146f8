"""RK4 reference for spatially homogeneous data.

With every gradient zero the system collapses to
``p' = lam p (1 - p)``, ``c' = -c - mu p c``, ``w' = gamma p (1 - w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .model import Params


@dataclass(frozen=True)
class OdeState:
    p: float
    c: float
    w: float
    t: float = 0.0

    def __post_init__(self):
        if min(self.p, self.c, self.w) < 0:
            raise ValueError("OdeState components must be nonnegative")


def _rhs(params: Params, y: np.ndarray) -> np.ndarray:
    p, c, w = y
    return np.array([
        params.lam * p * (1.0 - p),
        -c - params.mu * p * c,
        params.gamma * p * (1.0 - w),
    ])


def ode_oracle(params: Params, init: OdeState, T: float, dt_ode: float) -> list[OdeState]:
    """Classical RK4 from ``init.t`` to ``init.t + T``; the last step may be shorter."""
    if dt_ode <= 0:
        raise ValueError("dt_ode must be positive")
    n = int(math.floor(T / dt_ode + 1e-9))
    steps = [dt_ode] * n
    rest = T - n * dt_ode
    if rest > 1e-12 * max(1.0, T):
        steps.append(rest)
    y = np.array([init.p, init.c, init.w], dtype=float)
    t = init.t
    out = [init]
    for h in steps:
        k1 = _rhs(params, y)
        k2 = _rhs(params, y + 0.5 * h * k1)
        k3 = _rhs(params, y + 0.5 * h * k2)
        k4 = _rhs(params, y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        out.append(OdeState(*(float(x) for x in np.maximum(y, 0.0)), t))
    return out


def closed_form_w(series: list[OdeState], params: Params) -> np.ndarray:
    """``1 - (1 - w0) exp(-gamma int_0^t p)`` with Simpson quadrature of ``p``.

    Needs a uniformly sampled series.
    """
    t = np.array([s.t for s in series])
    p = np.array([s.p for s in series])
    integral = cumulative_simpson(p, x=t, initial=0.0)
    return 1.0 - (1.0 - series[0].w) * np.exp(-params.gamma * integral)


def logistic_exact(p0: float, lam: float, t):
    """Closed-form logistic solution ``p0 / (p0 + (1 - p0) e^{-lam t})``."""
    return p0 / (p0 + (1.0 - p0) * np.exp(-lam * np.asarray(t)))
