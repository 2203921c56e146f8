import numpy as np
import pytest

from chemohapto import Params
from chemohapto.oracle import OdeState, closed_form_w, logistic_exact, ode_oracle


def test_rk4_matches_logistic_and_w_closed_form():
    params = Params(lam=1.5, gamma=0.7)
    series = ode_oracle(params, OdeState(0.3, 1.0, 0.6), 4.0, 1e-3)
    t = np.array([s.t for s in series])
    p = np.array([s.p for s in series])
    np.testing.assert_allclose(p, logistic_exact(0.3, 1.5, t), rtol=1e-10)
    np.testing.assert_allclose([s.w for s in series], closed_form_w(series, params), atol=1e-10)
    assert series[-1].t == pytest.approx(4.0)


def test_c_decays_at_least_like_exp_minus_t():
    series = ode_oracle(Params(), OdeState(0.5, 1.0, 0.8), 5.0, 1e-2)
    for s in series:
        assert s.c <= np.exp(-s.t) + 1e-12


def test_equilibrium_is_fixed():
    series = ode_oracle(Params(), OdeState(1.0, 0.0, 1.0), 3.0, 0.1)
    assert all((s.p, s.c, s.w) == (1.0, 0.0, 1.0) for s in series)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        OdeState(-0.1, 0.0, 1.0)
    with pytest.raises(ValueError):
        ode_oracle(Params(), OdeState(1.0, 0.0, 1.0), 1.0, 0.0)


def test_partial_last_step():
    series = ode_oracle(Params(), OdeState(0.5, 1.0, 0.8), 0.25, 0.1)
    assert [round(s.t, 12) for s in series] == [0.0, 0.1, 0.2, 0.25]
