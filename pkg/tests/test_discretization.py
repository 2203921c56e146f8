import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chemohapto import Grid, Params, State, steady_state
from chemohapto.discretization import (advective_flux_upwind, assemble_rhs, chemo_hapto_velocity,
                                       divergence, face_mean, gradient_faces, laplacian_neumann,
                                       transport_divergence)
from chemohapto.scenarios import manufactured_exact, manufactured_errors, manufactured_state


def test_boundary_faces_are_zero(grid64, bump64, params):
    (g,) = gradient_faces(bump64.c, grid64)
    assert g.shape == (65,) and g[0] == 0 and g[-1] == 0
    (vel,) = chemo_hapto_velocity(bump64, params, grid64)
    (flux,) = advective_flux_upwind(bump64.p, [vel], grid64)
    assert flux[0] == 0 and flux[-1] == 0


def test_face_mean_boundary_takes_neighbour():
    m = face_mean(np.array([1.0, 3.0, 5.0]), 0)
    np.testing.assert_allclose(m, [1.0, 2.0, 4.0, 5.0])


def test_equilibrium_rhs_is_zero():
    for g in (Grid.interval(1.0, 32), Grid.rectangle(1.0, 2.0, 12, 10)):
        rhs = assemble_rhs(steady_state(g), Params(), g)
        for part in (rhs.dp, rhs.dc, rhs.dw):
            assert np.max(np.abs(part)) == 0.0


def test_constant_data_reduce_to_ode(params):
    g = Grid.interval(1.0, 16)
    s = State.from_fields(np.full(16, 0.5), np.full(16, 1.0), np.full(16, 0.8))
    rhs = assemble_rhs(s, params, g)
    np.testing.assert_allclose(rhs.dp, 0.25)
    np.testing.assert_allclose(rhs.dc, -1.5)
    np.testing.assert_allclose(rhs.dw, 0.1)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, 24, elements=st.floats(0.0, 3.0)),
       arrays(np.float64, 24, elements=st.floats(0.0, 2.0)),
       arrays(np.float64, 24, elements=st.floats(0.0, 1.5)))
def test_transport_and_diffusion_conserve_mass(p, c, w):
    g = Grid.interval(2.0, 24)
    s = State.from_fields(p, c, w)
    assert abs(g.integrate(transport_divergence(s, Params(), g))) < 1e-11 * (1 + np.max(p))
    assert abs(g.integrate(laplacian_neumann(p, g))) < 1e-10 * (1 + np.max(p))


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (6, 5), elements=st.floats(-1.0, 1.0)))
def test_divergence_of_zero_flux_boundary_sums_to_zero_2d(a):
    g = Grid.rectangle(1.0, 1.0, 6, 5)
    lap = divergence(gradient_faces(a, g), g)
    np.testing.assert_allclose(lap, laplacian_neumann(a, g))
    assert abs(g.integrate(lap)) < 1e-11


def test_upwind_uses_upstream_cell():
    g = Grid.interval(1.0, 4)
    p = np.array([1.0, 2.0, 3.0, 4.0])
    vel = np.array([0.0, 1.0, -1.0, 1.0, 0.0])
    (flux,) = advective_flux_upwind(p, [vel], g)
    np.testing.assert_allclose(flux, [0.0, 1.0, -3.0, 3.0, 0.0])


def test_manufactured_operators_match_sympy(params):
    x = sp.symbols("x")
    p = 1 + sp.Rational(3, 10) * sp.cos(sp.pi * x)
    c = sp.Rational(1, 2) + sp.Rational(1, 5) * sp.cos(2 * sp.pi * x)
    w = sp.Rational(4, 5) + sp.Rational(1, 10) * sp.cos(sp.pi * x)
    a, r, lam, mu = (sp.nsimplify(v) for v in (params.alpha, params.rho, params.lam, params.mu))
    exprs = {
        "p_diffusion_reaction": sp.diff(p, x, 2) + lam * p * (1 - p),
        "c_diffusion_reaction": sp.diff(c, x, 2) - c - mu * p * c,
        "transport": sp.diff(p * (a / (1 + c) * sp.diff(c, x) + r * sp.diff(w, x)), x),
    }
    xs = np.linspace(0.013, 0.987, 41)
    hand = manufactured_exact(xs, params)
    for key, expr in exprs.items():
        ref = sp.lambdify(x, expr, "numpy")(xs)
        np.testing.assert_allclose(hand[key], ref, atol=1e-12)


def test_manufactured_state_is_the_sympy_profile(params):
    g = Grid.interval(1.0, 8)
    s = manufactured_state(g)
    x = g.centers()
    np.testing.assert_allclose(s.p, 1 + 0.3 * np.cos(np.pi * x))


def test_manufactured_error_orders():
    e32, e64 = manufactured_errors(32), manufactured_errors(64)
    assert np.log2(e32["p_diffusion_reaction"] / e64["p_diffusion_reaction"]) > 1.9
    assert np.log2(e32["transport"] / e64["transport"]) > 0.9


def test_2d_separable_reduces_to_1d(params):
    g1 = Grid.interval(1.0, 16)
    g2 = Grid.rectangle(1.0, 1.0, 16, 6)
    x = g1.centers()
    fields = (1 + 0.2 * np.cos(np.pi * x), 0.4 + 0.1 * np.cos(2 * np.pi * x), 0.9 + 0.05 * np.cos(np.pi * x))
    s1 = State.from_fields(*fields)
    s2 = State.from_fields(*(np.repeat(f[:, None], 6, axis=1) for f in fields))
    r1, r2 = assemble_rhs(s1, params, g1), assemble_rhs(s2, params, g2)
    for a1, a2 in ((r1.dp, r2.dp), (r1.dc, r2.dc), (r1.dw, r2.dw)):
        np.testing.assert_allclose(a2, np.repeat(a1[:, None], 6, axis=1), atol=1e-12)
