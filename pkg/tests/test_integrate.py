"""
tests/test_integrate.py - Intégrateur Dormand-Prince adaptatif
"""

import math

import numpy as np
import pytest

from errors import InvalidParameter, InvalidState, InvalidDenominator
from model.params import State
from analysis.equilibria import interior_equilibrium
from sim.integrate import integrate, SimConfig, default_max_step
from sim.sweep import verify_bound


class TestSimConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(t_end=0.0),
        dict(t_end=10.0, rel_tol=0.0),
        dict(t_end=10.0, max_step=-1.0),
        dict(t_end=10.0, transient_fraction=1.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameter):
            SimConfig(**kwargs)

    def test_defaults(self):
        config = SimConfig(t_end=100.0)
        assert config.rel_tol == 1e-9
        assert config.transient_fraction == 0.5
        assert config.to_dict()['max_step'] is None


class TestIntegrate:
    def test_negative_initial_state(self, p_base):
        with pytest.raises(InvalidState):
            integrate(p_base.with_(m=0.01), State(-1.0, 5.0), SimConfig(t_end=10.0))

    def test_invalid_initial_denominator(self, p_base):
        with pytest.raises(InvalidDenominator):
            integrate(p_base.with_(m=1.0), State(1000.0, 2.0), SimConfig(t_end=10.0))

    def test_sampling(self, p_base):
        traj = integrate(p_base.with_(m=0.015), State(60.0, 15.0), SimConfig(t_end=50.0))
        assert traj.times[0] == 0.0
        assert traj.times[-1] == 50.0
        assert np.all(np.diff(traj.times) > 0)
        assert traj.all_valid
        assert list(traj.to_frame().columns) == ['t', 'x', 'y', 'valid']

    def test_max_step_respected(self, p_base):
        params = p_base.with_(m=0.015)
        config = SimConfig(t_end=50.0)
        traj = integrate(params, State(60.0, 15.0), config)
        cap = default_max_step(params, State(60.0, 15.0), config.t_end)
        assert cap <= config.t_end / 200.0
        assert np.max(np.diff(traj.times)) <= cap + 1e-9

    def test_origin_stays_put(self, p_base):
        traj = integrate(p_base.with_(m=0.01), State(0.0, 0.0), SimConfig(t_end=10.0))
        assert np.all(traj.states == 0.0)

    def test_equilibrium_stays_put(self, p_base):
        params = p_base.with_(m=0.015)
        eq = interior_equilibrium(params).point
        traj = integrate(params, eq, SimConfig(t_end=200.0))
        assert np.max(np.abs(traj.states[:, 0] - eq.x)) <= 1e-6
        assert np.max(np.abs(traj.states[:, 1] - eq.y)) <= 1e-6

    def test_logistic_on_prey_axis(self, p_base):
        params = p_base.with_(m=0.01)
        x0, t_end = 100.0, 2.0
        traj = integrate(params, State(x0, 0.0), SimConfig(t_end=t_end))
        rho = params.r - params.prey_harvest
        K = params.k * rho / params.r
        exact = K / (1.0 + (K / x0 - 1.0) * math.exp(-rho * t_end))
        assert np.all(traj.states[:, 1] == 0.0)
        assert traj.final_state.x == pytest.approx(exact, rel=1e-6)

    def test_tolerance_refinement_converges(self, p_base):
        params = p_base.with_(m=0.015)
        start = State(60.0, 15.0)
        loose = integrate(params, start, SimConfig(t_end=50.0, rel_tol=1e-6, abs_tol=1e-6)).final_state
        tight = integrate(params, start, SimConfig(t_end=50.0, rel_tol=1e-7, abs_tol=1e-7)).final_state
        assert abs(loose.x - tight.x) <= 5e-6 * (1.0 + abs(tight.x))
        assert abs(loose.y - tight.y) <= 5e-6 * (1.0 + abs(tight.y))

    def test_notes(self, p_base):
        traj = integrate(p_base.with_(m=0.015), State(60.0, 15.0), SimConfig(t_end=10.0, max_step=0.5))
        assert traj.notes['max_step'] == 0.5
        assert traj.notes['rejected_steps'] >= 0


@pytest.mark.slow
def test_oscillation_stays_under_bound(p_base):
    traj = integrate(p_base.with_(m=0.005), State(60.0, 15.0), SimConfig(t_end=2000.0))
    assert verify_bound(traj)
    assert traj.all_valid
