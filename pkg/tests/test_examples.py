"""Hand-evaluated reference values for individual operations."""

import math
from dataclasses import replace

import numpy as np
import pytest

from chemohapto import Grid, Params, State, StepConfig, steady_state, validate_initial_data
from chemohapto.diagnostics import (DiagRecord, bound_monitors, choose_kappa, dissipation_G,
                                    fit_decay_rate, lyapunov_F, record, transform_q, transform_z)
from chemohapto.discretization import (advective_flux_upwind, chemo_hapto_velocity,
                                       gradient_faces, laplacian_neumann)
from chemohapto.io import write_csv
from chemohapto.scenarios import scenario_config, simulate
from chemohapto.semigroup import lambda1, heat, to_expansion, variation_of_constants_c
from chemohapto.stepper import stable_dt, step_w_exact


def const(g, p, c, w):
    return State.from_fields(np.full(g.shape, p), np.full(g.shape, c), np.full(g.shape, w))


def test_initial_data_flags():
    g = Grid.interval(1.0, 8)
    assert validate_initial_data(steady_state(g), Params(rho=1.0), g).ok
    assert not validate_initial_data(const(g, 0, 0, 1), Params(), g).p0_nonzero_ok
    rep = validate_initial_data(const(g, 1, 0, 0.4), Params(rho=2.0), g)
    assert not rep.haptotaxis_smallness_ok


def test_laplacian_eigenfunction():
    g = Grid.interval(1.0, 128)
    x = g.centers()
    exact = -math.pi ** 2 * np.cos(math.pi * x)
    err = np.max(np.abs(laplacian_neumann(np.cos(math.pi * x), g) - exact)) / math.pi ** 2
    assert err <= 1e-3


def test_gradient_faces():
    g = Grid.interval(1.0, 16)
    (lin,) = gradient_faces(g.centers(), g)
    np.testing.assert_allclose(lin[1:-1], 1.0)
    assert lin[0] == lin[-1] == 0
    g = Grid.interval(1.0, 128)
    (cosg,) = gradient_faces(np.cos(math.pi * g.centers()), g)
    xf = np.linspace(0, 1, 129)[1:-1]
    assert np.max(np.abs(cosg[1:-1] + math.pi * np.sin(math.pi * xf))) / math.pi <= 1e-3


def test_two_cell_upwind():
    g = Grid.interval(1.0, 4)
    p = np.array([2.0, 4.0, 4.0, 4.0])
    (f,) = advective_flux_upwind(p, [np.array([0, 1.0, 0, 0, 0])], g)
    assert f[1] == 2.0
    # signed flux: the upstream value 4 carried leftwards
    (f,) = advective_flux_upwind(p, [np.array([0, -1.0, 0, 0, 0])], g)
    assert f[1] == -4.0


def test_velocity_examples():
    g = Grid.interval(1.0, 8)
    x = g.centers()
    s = State.from_fields(np.ones(8), np.zeros(8), 1 + 0.3 * x)
    (vel,) = chemo_hapto_velocity(s, Params(rho=0.5), g)
    np.testing.assert_allclose(vel[1:-1], 0.5 * 0.3)
    c = np.array([1.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0])
    s = State.from_fields(np.ones(8), c, np.ones(8))
    (vel,) = chemo_hapto_velocity(s, Params(alpha=2.0), g)
    (gc,) = gradient_faces(c, g)
    assert vel[1] == pytest.approx(2.0 / 3.0 * gc[1])


def test_stable_dt_example():
    g = Grid.interval(0.16, 16)  # spacing 0.01
    c = np.zeros(16)
    w = np.ones(16)
    w[8:] += 0.01 * 2 / 0.5  # one face with rho * dw/dx = 2
    s = State.from_fields(np.full(16, 0.1), c, w)
    assert stable_dt(s, Params(rho=0.5), g, cfl_safety=0.5, max_dt=1.0) == pytest.approx(0.0025)
    assert stable_dt(steady_state(g), Params(), g, max_dt=0.07) == 0.07


def test_w_exact_examples():
    g = Grid.interval(1.0, 4)
    s = State.from_fields(np.array([1.0, 0.0, 2.0, 1.0]), np.zeros(4), np.array([0.0, 0.3, 1.0, 0.0]))
    w = step_w_exact(s, Params(gamma=1.0), math.log(2))
    np.testing.assert_allclose(w, [0.5, 0.3, 1.0, 0.5])


def test_transforms():
    g = Grid.interval(1.0, 4)
    assert transform_q(const(g, 2, 0, 0), Params()) == pytest.approx(2.0)
    np.testing.assert_allclose(transform_q(const(g, 2, 1, 0), Params(alpha=1.0)), 1.0)
    np.testing.assert_allclose(transform_z(const(g, 4, 0, 1), Params(rho=math.log(2))), 2.0)


def test_F_and_G_examples():
    g = Grid.interval(1.0, 8)
    assert lyapunov_F(steady_state(g), Params(), g, 3.0) == pytest.approx(-1.0)
    assert lyapunov_F(const(g, 2, 0, 1), Params(), g, 3.0) == pytest.approx(2 * (math.log(2) - 1))
    lam = 1.7
    assert dissipation_G(const(g, 2, 0, 1), Params(lam=lam), g, 1.0) == pytest.approx(
        -2 * lam * math.log(2))


def test_kappa_examples():
    p = Params(rho=0.5, gamma=2.0)
    for w0 in (1.0, 1.5):
        ch = choose_kappa(p, np.full(4, w0))
        assert ch.epsilon1 == 1.0 and ch.kappa == pytest.approx((0.25 + 2) / 4)
    assert not choose_kappa(Params(rho=2.0), np.full(4, 0.4)).valid


def test_record_constant_three():
    g = Grid.interval(1.0, 8)
    rec = record(const(g, 3, 0, 1), Params(), g, 1.0)
    assert (rec.mass_p, rec.mean_p, rec.l2_p_minus_1) == pytest.approx((3.0, 3.0, 2.0))


def test_fit_examples():
    t = np.arange(1.0, 11.0)
    fit = fit_decay_rate(t, np.exp(-2 * t), window=(1, 10))
    assert abs(fit.rate - 2) <= 1e-10 and abs(fit.r_squared - 1) <= 1e-10
    fit = fit_decay_rate(t, 5 * np.exp(-0.7 * t), window=(1, 10))
    assert fit.rate == pytest.approx(0.7) and fit.intercept == pytest.approx(math.log(5))


def test_corrupted_mass_record():
    g = Grid.interval(1.0, 8)
    first = record(steady_state(g), Params(), g, 1.0)
    bad = DiagRecord(**{**first.__dict__, "mass_p": 2.0 * max(first.mass_p, g.measure)})
    out = bound_monitors(bad, first, Params(), g.measure)
    assert [v.monitor for v in out] == ["mass"]


def test_semigroup_examples():
    assert lambda1(math.pi) == pytest.approx(1.0)
    assert lambda1(1.0) == pytest.approx(9.8696, abs=1e-4)
    g = Grid.interval(2.0, 64)
    x = g.centers()
    a = to_expansion(np.cos(math.pi * x / 2.0), g).coefficients
    assert a[1] == pytest.approx(1.0) and np.max(np.abs(np.delete(a, 1))) <= 1e-10
    tau = 0.3
    np.testing.assert_allclose(heat(np.cos(math.pi * x / 2), g, tau),
                               math.exp(-lambda1(2.0) * tau) * np.cos(math.pi * x / 2), atol=1e-14)


def test_voc_mode_factor():
    g = Grid.interval(1.0, 32)
    x = g.centers()
    c0 = 0.4 + 0.1 * np.cos(3 * math.pi * x)
    z = np.zeros(32)
    snaps = [State(z - 1, c0, z, t) for t in (0.0, 0.25, 0.5)]
    out = variation_of_constants_c(snaps, c0, 0.5, Params(), g)
    expected = 0.4 * math.exp(-0.5) + 0.1 * math.exp(-(1 + 9 * math.pi ** 2) * 0.5) * np.cos(3 * math.pi * x)
    np.testing.assert_allclose(out, expected, atol=1e-14)


def test_deterministic_csv(tmp_path):
    cfg = scenario_config("dissipation-structure")
    cfg = replace(cfg, horizon=0.5)
    for name in ("a.csv", "b.csv"):
        write_csv(simulate(cfg), tmp_path / name, lr=cfg.lr)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
