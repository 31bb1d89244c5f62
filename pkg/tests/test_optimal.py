"""
tests/test_optimal.py - Chemin singulier et politique optimale
"""

import logging

import numpy as np
import pytest

from errors import ZeroBiomass
from model.params import State
from model.core import jacobian, vector_field
from model.presets import OPTIMAL_POINT, opt_params, opt_econ
from econ.optimal import (solve_optimal, optimal_singular_residuals, residual_scale,
                          compare_reference)


def residuals_from_jacobian(params, econ, x, y):
    """Mêmes relations réécrites avec g = p·u·x·y/D et ses dérivées lues dans J (efforts nuls)."""
    free = params.with_(E1=0.0, E2=0.0)
    J = jacobian(free, State(x, y))
    u = 1.0 - params.m * y
    g = params.p * u * x * y / (1.0 + params.a * x * u)
    g_x = params.r - 2.0 * params.r * x / params.k - J[0, 0]
    g_y = -J[0, 1]
    lam1 = econ.p1 - econ.c1 / (params.q1 * x)
    lam2 = econ.p2 - econ.c2 / (params.q2 * y)

    prey = (econ.p1 * (params.r * (1.0 - x / params.k) - g / x) + lam2 * J[1, 0]
            + lam1 * (-params.r * x / params.k + g / x - g_x))
    predator = (econ.p2 * (params.e * g / y - params.d) + lam1 * g_y
                - lam2 * params.e * (g / y - g_y))
    return econ.delta * lam1 - prey, econ.delta * lam2 - predator


@pytest.fixture(scope="module")
def policy():
    return solve_optimal(opt_params(), opt_econ())


class TestResiduals:
    @pytest.mark.parametrize("x,y", [(188.5858, 30.6567), (50.0, 10.0), (300.0, 40.0), (10.0, 2.0)])
    def test_matches_rewritten_relations(self, p_opt, econ_opt, x, y):
        r9, r11 = optimal_singular_residuals(p_opt, econ_opt, State(x, y))
        o9, o11 = residuals_from_jacobian(p_opt, econ_opt, x, y)
        scale = residual_scale(p_opt, econ_opt, State(x, y))
        assert abs(r9 - o9) <= 1e-10 * scale
        assert abs(r11 - o11) <= 1e-10 * scale

    def test_zero_biomass(self, p_opt, econ_opt):
        with pytest.raises(ZeroBiomass):
            optimal_singular_residuals(p_opt, econ_opt, State(0.0, 10.0))

    def test_reference_point_nearly_singular(self, p_opt, econ_opt):
        point = State(OPTIMAL_POINT['x_opt'], OPTIMAL_POINT['y_opt'])
        r9, r11 = optimal_singular_residuals(p_opt, econ_opt, point)
        assert max(abs(r9), abs(r11)) / residual_scale(p_opt, econ_opt, point) < 1e-3


class TestSolve:
    def test_root(self, policy):
        assert policy.x_opt == pytest.approx(188.585758, rel=1e-6)
        assert policy.y_opt == pytest.approx(30.657435, rel=1e-6)

    def test_efforts(self, policy):
        assert policy.e1_opt == pytest.approx(1.85342, rel=1e-4)
        assert policy.e2_opt == pytest.approx(2.23672, rel=1e-4)

    def test_residuals_vanish(self, policy):
        assert abs(policy.residual_9) <= 1e-10 * policy.scale
        assert abs(policy.residual_11) <= 1e-10 * policy.scale

    def test_efforts_make_root_an_equilibrium(self, policy, p_opt):
        worked = p_opt.with_(E1=policy.e1_opt, E2=policy.e2_opt)
        dx, dy = vector_field(worked, policy.x_opt, policy.y_opt)
        assert abs(dx) < 1e-9 * policy.x_opt
        assert abs(dy) < 1e-9 * policy.y_opt

    def test_bad_guess_falls_back_to_multistart(self, policy, p_opt, econ_opt):
        again = solve_optimal(p_opt, econ_opt, guess=State(-100.0, -100.0))
        assert np.isclose(again.x_opt, policy.x_opt, rtol=1e-9)
        assert np.isclose(again.y_opt, policy.y_opt, rtol=1e-9)

    def test_to_dict(self, policy):
        data = policy.to_dict()
        assert set(data) == {'x_opt', 'y_opt', 'e1_opt', 'e2_opt', 'residual_9', 'residual_11',
                             'scale', 'root_count'}
        assert data['root_count'] >= 1


class TestReference:
    def test_predator_effort_deviation(self, policy, p_opt, econ_opt, caplog):
        with caplog.at_level(logging.WARNING, logger="econ"):
            comparison = compare_reference(policy, p_opt, econ_opt, OPTIMAL_POINT)
        assert comparison['x_opt']['ok']
        assert comparison['y_opt']['ok']
        assert comparison['e1_opt']['ok']
        assert not comparison['e2_opt']['ok']
        assert comparison['reference_residual'] < 1e-3
        assert any("e2_opt" in r.getMessage() for r in caplog.records)

    def test_partial_reference(self, policy, p_opt, econ_opt):
        comparison = compare_reference(policy, p_opt, econ_opt, {'e1_opt': 1.8534})
        assert list(comparison) == ['e1_opt']


def test_prey_effort_correction_logged(p_opt, econ_opt, caplog):
    with caplog.at_level(logging.WARNING, logger="econ"):
        solve_optimal(p_opt, econ_opt)
    assert any("isocline de la proie" in r.getMessage() for r in caplog.records)
