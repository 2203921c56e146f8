import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chemohapto import Grid, Params, State, StepConfig, run
from chemohapto.semigroup import (CosineExpansion, from_expansion, gradient_from_expansion, heat,
                                  heat_apply, lambda1, to_expansion, variation_of_constants_c,
                                  verify_decay_estimates)
from conftest import bump_state


def test_lambda1():
    assert lambda1(1.0) == pytest.approx(math.pi ** 2)
    assert lambda1(2.0) == pytest.approx(math.pi ** 2 / 4)
    with pytest.raises(ValueError):
        lambda1(0.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=12), st.sampled_from([16, 33, 64]))
def test_expansion_roundtrip(coeffs, n):
    g = Grid.interval(1.7, n)
    c = np.zeros(n)
    c[: len(coeffs)] = coeffs
    values = from_expansion(CosineExpansion(1.7, c), g)
    x = g.centers()
    direct = sum(a * np.cos(k * math.pi * x / 1.7) for k, a in enumerate(coeffs))
    np.testing.assert_allclose(values, direct, atol=1e-12)
    np.testing.assert_allclose(to_expansion(values, g).coefficients, c, atol=1e-12)


def test_single_mode_decay_and_gradient():
    g = Grid.interval(2.0, 64)
    x = g.centers()
    phi = np.cos(3 * math.pi * x / 2.0)
    out = heat(phi, g, 0.2)
    np.testing.assert_allclose(out, phi * math.exp(-(3 * math.pi / 2) ** 2 * 0.2), atol=1e-14)
    grad = gradient_from_expansion(to_expansion(phi, g), g)
    np.testing.assert_allclose(grad, -1.5 * math.pi * np.sin(1.5 * math.pi * x), atol=1e-12)


def test_constant_is_invariant_and_negative_tau_rejected():
    g = Grid.interval(1.0, 16)
    np.testing.assert_allclose(heat(np.full(16, 2.5), g, 3.0), 2.5)
    with pytest.raises(ValueError):
        heat_apply(to_expansion(np.ones(16), g), -1.0)
    with pytest.raises(ValueError):
        to_expansion(np.ones((4, 4)), Grid.rectangle(1, 1, 4, 4))


def test_decay_report():
    g = Grid.interval(1.0, 128)
    x = g.centers()
    phi = np.cos(math.pi * x) - 0.5 * np.cos(4 * math.pi * x)
    rep = verify_decay_estimates(phi, g, [0.1, 0.5, 1, 5, 10])
    assert rep.passed and math.isfinite(rep.k_empirical)
    assert np.all(np.diff(rep.l2_norms) <= 0)
    with pytest.raises(ValueError):
        verify_decay_estimates(phi + 1, g, [0.1, 1.0])
    with pytest.raises(ValueError):
        verify_decay_estimates(phi, g, [1.0, 0.5])


def test_voc_with_zero_p_is_free_heat():
    g = Grid.interval(1.0, 32)
    c0 = 0.5 + 0.2 * np.cos(2 * math.pi * g.centers())
    zeros = np.zeros(32)
    snaps = [State(zeros - 1, c0, zeros, t) for t in np.linspace(0, 1, 11)]
    out = variation_of_constants_c(snaps, c0, 1.0, Params(), g)
    np.testing.assert_allclose(out, math.exp(-1) * heat(c0, g, 1.0), atol=1e-15)
    flat = variation_of_constants_c(snaps, np.full(32, 0.7), 1.0, Params(), g)
    np.testing.assert_allclose(flat, 0.7 * math.exp(-1), atol=1e-15)


def test_voc_rejects_bad_coverage():
    g = Grid.interval(1.0, 16)
    z = np.zeros(16)
    snaps = [State(z, z, z, t) for t in (0.0, 0.1, 0.3)]
    with pytest.raises(ValueError):
        variation_of_constants_c(snaps, z, 0.3, Params(), g)
    snaps = [State(z, z, z, t) for t in (0.0, 0.1)]
    with pytest.raises(ValueError):
        variation_of_constants_c(snaps, z, 0.5, Params(), g)


def test_voc_matches_stepper():
    g = Grid.interval(1.0, 64)
    s0 = bump_state(g)
    traj = run(s0, Params(), g, StepConfig(dt=0.003125), 0.5, 0.5, snapshot_cadence=0.003125)
    rebuilt = variation_of_constants_c(traj.snapshots, s0.c, 0.5, Params(), g)
    assert np.max(np.abs(rebuilt - traj.final.c)) < 1e-4
