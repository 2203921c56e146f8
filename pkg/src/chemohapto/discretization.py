"""Finite-volume spatial operators with zero-flux boundaries.

Face arrays carry one entry per face along their axis, boundary faces
included, so a field with ``n`` cells along axis ``a`` has face arrays with
``n + 1`` entries along ``a``.  Boundary faces are always exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Grid, Params, State


@dataclass
class Rhs:
    dp: np.ndarray
    dc: np.ndarray
    dw: np.ndarray


def _pad_faces(interior: np.ndarray, axis: int) -> np.ndarray:
    pad = [(0, 0)] * interior.ndim
    pad[axis] = (1, 1)
    return np.pad(interior, pad)


def _interior_diff(values: np.ndarray, axis: int) -> np.ndarray:
    return np.diff(values, axis=axis)


def _left_right(values: np.ndarray, axis: int):
    n = values.shape[axis]
    left = np.take(values, np.arange(n - 1), axis=axis)
    right = np.take(values, np.arange(1, n), axis=axis)
    return left, right


def gradient_faces(values, grid: Grid) -> list[np.ndarray]:
    """Per-axis face differences ``(right - left) / h``; boundary faces 0."""
    values = np.asarray(values, dtype=float)
    return [
        _pad_faces(_interior_diff(values, a) / h, a)
        for a, h in enumerate(grid.spacing)
    ]


def divergence(fluxes: list[np.ndarray], grid: Grid) -> np.ndarray:
    """Cell divergence of face fluxes: flux differences over the cell width."""
    out = np.zeros(grid.shape)
    for a, (flux, h) in enumerate(zip(fluxes, grid.spacing)):
        out += np.diff(flux, axis=a) / h
    return out


def laplacian_neumann(values, grid: Grid) -> np.ndarray:
    """3-point (1D) / 5-point (2D) Laplacian with reflecting ghost cells."""
    return divergence(gradient_faces(values, grid), grid)


def face_mean(values, axis: int) -> np.ndarray:
    """Arithmetic mean of the two cells adjacent to each face.

    Boundary faces take the value of their single neighbour.
    """
    values = np.asarray(values, dtype=float)
    left, right = _left_right(values, axis)
    mid = 0.5 * (left + right)
    first = np.take(values, [0], axis=axis)
    last = np.take(values, [values.shape[axis] - 1], axis=axis)
    return np.concatenate([first, mid, last], axis=axis)


def advective_flux_upwind(p, velocity_faces: list[np.ndarray], grid: Grid) -> list[np.ndarray]:
    """Upwind flux ``v * p_upstream`` on every interior face."""
    p = np.asarray(p, dtype=float)
    fluxes = []
    for a, vel in enumerate(velocity_faces):
        left, right = _left_right(p, a)
        v_int = np.take(vel, np.arange(1, vel.shape[a] - 1), axis=a)
        flux = np.where(v_int >= 0, v_int * left, v_int * right)
        fluxes.append(_pad_faces(flux, a))
    return fluxes


def chemo_hapto_velocity(state: State, params: Params, grid: Grid) -> list[np.ndarray]:
    """Face velocity ``alpha/(1 + c_face) grad c + rho grad w``.

    ``grad w`` is taken from ``v = w - 1``; the constant shift does not matter.
    """
    grad_c = gradient_faces(state.c, grid)
    grad_w = gradient_faces(state.v, grid)
    velocity = []
    for a in range(grid.dim):
        c_face = face_mean(state.c, a)
        velocity.append(params.alpha / (1.0 + c_face) * grad_c[a] + params.rho * grad_w[a])
    return velocity


def transport_divergence(state: State, params: Params, grid: Grid) -> np.ndarray:
    """``div(p * velocity)`` with the upwind flux."""
    velocity = chemo_hapto_velocity(state, params, grid)
    return divergence(advective_flux_upwind(state.p, velocity, grid), grid)


def assemble_rhs(state: State, params: Params, grid: Grid) -> Rhs:
    """Semidiscrete right-hand sides of the three equations."""
    state.check(grid)
    p = state.p
    dp = (
        laplacian_neumann(state.u, grid)
        - transport_divergence(state, params, grid)
        - params.lam * p * state.u
    )
    dc = laplacian_neumann(state.c, grid) - state.c - params.mu * p * state.c
    dw = -params.gamma * p * state.v
    return Rhs(dp, dc, dw)


def cell_face_product(a_faces: list[np.ndarray], b_faces: list[np.ndarray]) -> np.ndarray:
    """Cell value of ``grad a . grad b`` from face gradients.

    Per axis the two face products bounding a cell are averaged, then the
    axes are summed.
    """
    total = None
    for axis, (fa, fb) in enumerate(zip(a_faces, b_faces)):
        prod = fa * fb
        left, right = _left_right(prod, axis)
        part = 0.5 * (left + right)
        total = part if total is None else total + part
    return total
