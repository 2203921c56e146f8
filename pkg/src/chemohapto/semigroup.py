"""Neumann heat semigroup on an interval via cosine expansions.

Cell-centred samples on ``(0, L)`` are expanded in ``cos(k pi x / L)``,
``k = 0..n-1``; that basis is exactly orthogonal under the midpoint sum, so
analysis and synthesis are a DCT-II / DCT-III pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from .model import Grid, Params, State


@dataclass
class CosineExpansion:
    length: float
    coefficients: np.ndarray

    @property
    def modes(self) -> int:
        return len(self.coefficients) - 1

    @property
    def eigenvalues(self) -> np.ndarray:
        k = np.arange(len(self.coefficients))
        return (k * math.pi / self.length) ** 2


def lambda1(length: float) -> float:
    """First nonzero Neumann eigenvalue of ``-d^2/dx^2`` on ``(0, length)``."""
    if length <= 0:
        raise ValueError("length must be positive")
    return (math.pi / length) ** 2


def _require_1d(grid: Grid) -> None:
    if grid.dim != 1:
        raise ValueError("the spectral semigroup is implemented on intervals only")


def to_expansion(values, grid: Grid) -> CosineExpansion:
    _require_1d(grid)
    values = grid.check(values)
    n = grid.cells[0]
    coeffs = fft.dct(values, type=2) / n
    coeffs[0] *= 0.5
    return CosineExpansion(grid.lengths[0], coeffs)


def from_expansion(expansion: CosineExpansion, grid: Grid) -> np.ndarray:
    _require_1d(grid)
    n = grid.cells[0]
    coeffs = np.zeros(n)
    m = min(n, len(expansion.coefficients))
    coeffs[:m] = expansion.coefficients[:m]
    scaled = coeffs * 0.5
    scaled[0] = coeffs[0]
    return fft.dct(scaled, type=3)


def gradient_from_expansion(expansion: CosineExpansion, grid: Grid) -> np.ndarray:
    """Exact derivative of the cosine series at the cell centres."""
    _require_1d(grid)
    x = grid.centers()
    k = np.arange(len(expansion.coefficients))
    wave = k * math.pi / expansion.length
    return -np.sin(np.outer(x, wave)) @ (expansion.coefficients * wave)


def heat_apply(expansion: CosineExpansion, tau: float) -> CosineExpansion:
    """Apply ``exp(tau Laplacian)``: mode ``k`` is damped by ``exp(-(k pi/L)^2 tau)``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    damped = expansion.coefficients * np.exp(-expansion.eigenvalues * tau)
    return CosineExpansion(expansion.length, damped)


def heat(values, grid: Grid, tau: float) -> np.ndarray:
    return from_expansion(heat_apply(to_expansion(values, grid), tau), grid)


def _norm(values, grid: Grid, r: float) -> float:
    values = np.abs(values)
    if math.isinf(r):
        return float(np.max(values))
    return grid.integrate(values ** r) ** (1.0 / r)


@dataclass
class DecayReport:
    taus: np.ndarray
    ratios: np.ndarray
    k_empirical: float
    gradient: bool
    l2_norms: np.ndarray
    sigma: float
    bounded: bool = True
    l2_monotone: bool = True
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.bounded and self.l2_monotone


def verify_decay_estimates(phi, grid: Grid, taus, p_exp: float = math.inf, q_exp: float = 2.0,
                           gradient: bool = False) -> DecayReport:
    """Empirical constant in the Neumann heat smoothing estimates for mean-zero ``phi``.

    At every ``tau`` the ratio
    ``||S(tau) phi||_p / ((1 + tau^-sigma) e^{-lambda1 tau} ||phi||_q)`` is
    computed, with ``S`` the heat semigroup (or its gradient when
    ``gradient`` is set) and ``sigma = (1/q - 1/p)/2`` (plus 1/2 for the
    gradient).  The maximum ratio is the empirical constant.
    """
    _require_1d(grid)
    phi = grid.check(phi)
    scale = max(1.0, float(np.max(np.abs(phi))))
    if abs(grid.integrate(phi)) > 1e-10 * scale:
        raise ValueError("phi must have zero mean")
    taus = np.asarray(taus, dtype=float)
    if np.any(taus <= 0) or np.any(np.diff(taus) <= 0):
        raise ValueError("taus must be positive and increasing")
    if not 1 <= q_exp <= p_exp:
        raise ValueError("need 1 <= q <= p")

    sigma = 0.5 * (1.0 / q_exp - (0.0 if math.isinf(p_exp) else 1.0 / p_exp))
    if gradient:
        sigma += 0.5
    lam1 = lambda1(grid.lengths[0])
    expansion = to_expansion(phi, grid)
    # drop the roundoff-level constant mode; it would dominate at large tau
    coeffs = expansion.coefficients.copy()
    coeffs[0] = 0.0
    expansion = CosineExpansion(expansion.length, coeffs)
    base = _norm(phi, grid, q_exp)
    ratios, l2 = [], []
    for tau in taus:
        evolved = heat_apply(expansion, tau)
        field_ = gradient_from_expansion(evolved, grid) if gradient else from_expansion(evolved, grid)
        envelope = (1.0 + tau ** (-sigma)) * math.exp(-lam1 * tau) * base
        ratios.append(_norm(field_, grid, p_exp) / envelope)
        l2.append(_norm(from_expansion(evolved, grid), grid, 2.0))
    ratios = np.array(ratios)
    l2 = np.array(l2)
    report = DecayReport(taus, ratios, float(np.max(ratios)), gradient, l2, sigma)
    report.bounded = bool(np.all(np.isfinite(ratios)))
    report.l2_monotone = bool(np.all(np.diff(l2) <= 1e-14 * max(1.0, l2[0])))
    if not report.bounded:
        report.notes.append("non-finite ratio")
    if not report.l2_monotone:
        report.notes.append("L2 norm increased")
    return report


def variation_of_constants_c(snapshots, c0, t: float, params: Params, grid: Grid) -> np.ndarray:
    """Rebuild ``c(t)`` from the Duhamel formula for ``c_t = Lap c - c + f``.

    ``f = -mu p c`` is taken from ``snapshots`` (states at uniformly spaced
    times covering ``[0, t]``); the time integral uses the trapezoidal rule.
    """
    _require_1d(grid)
    snaps = sorted(snapshots, key=lambda s: s.t)
    times = np.array([s.t for s in snaps])
    if len(snaps) < 2:
        raise ValueError("need at least two snapshots")
    step = np.diff(times)
    if np.max(np.abs(step - step.mean())) > 1e-9 * max(1.0, step.mean()):
        raise ValueError("snapshots must be uniformly spaced")
    if abs(times[0]) > 1e-12 or times[-1] < t - 1e-9 * max(1.0, t):
        raise ValueError(f"snapshots cover [{times[0]}, {times[-1]}], need [0, {t}]")
    keep = times <= t + 1e-9 * max(1.0, t)
    snaps = [s for s, k in zip(snaps, keep) if k]
    times = times[keep]
    if abs(times[-1] - t) > 1e-9 * max(1.0, t):
        raise ValueError(f"no snapshot at t = {t}")

    out = math.exp(-t) * heat(c0, grid, t)
    weights = np.full(len(times), step.mean())
    weights[0] *= 0.5
    weights[-1] *= 0.5
    for snap, s, wgt in zip(snaps, times, weights):
        forcing = -params.mu * snap.p * snap.c
        out += wgt * math.exp(-(t - s)) * heat(forcing, grid, t - s)
    return out
