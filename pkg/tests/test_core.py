"""
tests/test_core.py - Champ de vecteurs, jacobienne, borne, permanence, revenu
"""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from errors import InvalidParameter, InvalidDenominator, EmptyTrajectory
from model.params import ModelParams, EconParams, State
from model.core import (denominator, rhs, jacobian, taylor_coefficients, ultimate_bound,
                        persistence_check, boundary_persistence, discounted_revenue)
from model.finite_diff import fd_jacobian


class TestParams:
    def test_conversion_must_be_below_one(self, p_base):
        with pytest.raises(InvalidParameter):
            p_base.with_(e=1.0)

    def test_refuge_range(self, p_base):
        with pytest.raises(InvalidParameter):
            p_base.with_(m=1.5)
        assert p_base.with_(m=1.0).m == 1.0

    def test_negative_effort_rejected(self, p_base):
        with pytest.raises(InvalidParameter):
            p_base.with_(E2=-0.1)

    def test_unknown_symbol(self):
        with pytest.raises(InvalidParameter):
            ModelParams.from_dict({'r': 1, 'k': 1, 'p': 1, 'a': 1, 'm': 0, 'd': 1, 'e': 0.5,
                                   'q1': 1, 'q2': 1, 'q3': 1})

    def test_econ_discount_nonnegative(self):
        with pytest.raises(InvalidParameter):
            EconParams(p1=1, p2=1, c1=1, c2=1, delta=-0.1)

    def test_to_dict_round_trip(self, p_base):
        assert ModelParams.from_dict(p_base.to_dict()) == p_base


class TestVectorField:
    def test_origin_is_fixed(self, p_base):
        assert rhs(p_base.with_(m=0.005), State(0.0, 0.0)) == (0.0, 0.0)

    def test_rounded_unstable_equilibrium(self, p_base):
        dx, dy = rhs(p_base.with_(m=0.005), State(67.86, 18.00))
        assert abs(dx) < 0.05
        assert abs(dy) < 0.05

    def test_prey_axis_value(self, p_base):
        dx, dy = rhs(p_base.with_(m=0.005), State(100.0, 0.0))
        assert dx == pytest.approx(200.0, rel=1e-12)
        assert dy == 0.0

    def test_predator_axis_invariant(self, p_base):
        _, dy = rhs(p_base.with_(m=0.005), State(120.0, 0.0))
        assert dy == 0.0

    def test_invalid_denominator(self, p_base):
        params = p_base.with_(m=1.0)
        with pytest.raises(InvalidDenominator):
            denominator(params, 1000.0, 2.0)
        with pytest.raises(InvalidDenominator):
            rhs(params, State(1000.0, 2.0))


class TestJacobian:
    def test_diagonal_at_origin(self, p_triv):
        J = jacobian(p_triv, State(0.0, 0.0))
        assert J[0, 0] == pytest.approx(-0.2, abs=1e-12)
        assert J[1, 1] == pytest.approx(-1.1, abs=1e-12)
        assert J[0, 1] == 0.0
        assert J[1, 0] == 0.0

    @pytest.mark.parametrize("m,x,y", [
        (0.005, 67.86, 18.0),
        (0.02, 188.0, 30.0),
        (0.0, 300.0, 5.0),
        (0.5, 50.0, 1.5),
    ])
    def test_matches_finite_differences(self, p_base, m, x, y):
        params = p_base.with_(m=m)
        state = State(x, y)
        J = jacobian(params, state)
        J_fd = fd_jacobian(params, state)
        assert np.max(np.abs(J - J_fd)) <= 1e-6 * np.max(np.abs(J))

    def test_linear_taylor_terms_are_jacobian(self, p_base):
        params = p_base.with_(m=0.01)
        state = State(77.0, 20.0)
        J = jacobian(params, state)
        c = taylor_coefficients(params, state)
        assert (c.a10, c.a01, c.b10, c.b01) == (J[0, 0], J[0, 1], J[1, 0], J[1, 1])
        assert c.delta == pytest.approx(np.linalg.det(J), rel=1e-12)


class TestBoundAndPersistence:
    def test_ultimate_bound(self, p_base):
        bound = ultimate_bound(p_base)
        assert bound.zeta == pytest.approx(1.24)
        assert bound.kappa == pytest.approx(500.0 / 12.0 * 3.84 ** 2)
        assert bound.ultimate == pytest.approx(bound.kappa / 1.24)

    def test_trivial_set_not_permanent(self, p_triv):
        report = persistence_check(p_triv)
        assert report.growth_condition is False
        assert report.consumption_condition is False
        assert report.permanent is False

    def test_hopf_family_permanent(self, p_base):
        report = persistence_check(p_base)
        assert report.permanent is True

    def test_boundary_values(self, p_base):
        values = boundary_persistence(p_base)
        assert values['phi_origin'] == pytest.approx(3.0 - 0.4 - 1.24)
        x1 = 500.0 * (1.0 - 0.4 / 3.0)
        assert values['x1'] == pytest.approx(x1)
        assert values['phi_axial'] == pytest.approx(0.15 * 0.2 * x1 / (1.0 + 0.008 * x1) - 1.24)

    def test_axial_value_absent_when_prey_overharvested(self, p_triv):
        assert boundary_persistence(p_triv)['phi_axial'] is None


class TestDiscountedRevenue:
    def test_constant_state_matches_closed_form(self, p_opt, econ_opt):
        times = np.linspace(0.0, 10.0, 2001)
        states = np.tile([100.0, 20.0], (len(times), 1))
        traj = SimpleNamespace(times=times, states=states)
        flow = (2.0 * 0.2 * 100.0 - 1.0) * 2.0 + (3.0 * 0.6 * 20.0 - 2.0) * 2.0
        exact = flow * (1.0 - math.exp(-0.004 * 10.0)) / 0.004
        assert discounted_revenue(traj, p_opt, econ_opt) == pytest.approx(exact, rel=1e-9)

    def test_empty_trajectory(self, p_opt, econ_opt):
        traj = SimpleNamespace(times=np.array([]), states=np.empty((0, 2)))
        with pytest.raises(EmptyTrajectory):
            discounted_revenue(traj, p_opt, econ_opt)

    def test_single_sample_is_zero(self, p_opt, econ_opt):
        traj = SimpleNamespace(times=np.array([0.0]), states=np.array([[100.0, 20.0]]))
        assert discounted_revenue(traj, p_opt, econ_opt) == 0.0

    def test_zero_effort_earns_nothing(self, p_opt, econ_opt):
        times = np.linspace(0.0, 10.0, 101)
        states = np.column_stack([np.linspace(50.0, 150.0, 101), np.linspace(10.0, 30.0, 101)])
        traj = SimpleNamespace(times=times, states=states)
        assert discounted_revenue(traj, p_opt.with_(E1=0.0, E2=0.0), econ_opt) == 0.0
