"""
tests/test_checks.py - Suites de propriétés et oracles par différences finies
"""

import numpy as np
import pytest

from model.params import State
from model.core import taylor_coefficients
from model.finite_diff import fd_taylor_coefficients, default_steps
from report.checks import (run_checks, random_admissible, coefficient_error, jacobian_suite,
                           effort_suite, transcritical_suite, SuiteResult)


class TestOracles:
    def test_taylor_matches_oracle_at_hopf_point(self, p_base):
        params = p_base.with_(m=0.010695395)
        state = State(78.869018, 20.290828)
        exact = taylor_coefficients(params, state).to_dict()
        oracle = fd_taylor_coefficients(params, state).to_dict()
        assert coefficient_error(exact, oracle) <= 1e-4

    def test_default_steps_without_refuge(self, p_base):
        hx, hy = default_steps(p_base, State(100.0, 20.0))
        assert hx == pytest.approx(1.0)
        assert hy == 20.0

    def test_coefficient_error_relative_per_coefficient(self):
        exact = {'a10': 1.0, 'a01': 100.0, 'delta': 0.0}
        oracle = {'a10': 2.0, 'a01': 100.0, 'delta': 5.0}
        assert coefficient_error(exact, oracle) == pytest.approx(1.0)

    def test_small_coefficient_not_hidden_by_large_one(self):
        exact = {'a10': 1e-3, 'a01': 1e3}
        oracle = {'a10': 2e-3, 'a01': 1e3}
        assert coefficient_error(exact, oracle) == pytest.approx(1.0)

    def test_coefficient_error_floor(self):
        assert coefficient_error({'a10': 0.0}, {'a10': 1e-13}) == pytest.approx(1e-5)

    def test_random_admissible_draws(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            params, state = random_admissible(rng)
            assert 20.0 <= state.x <= params.k
            assert 1.0 <= state.y <= 50.0
            assert 1.0 + params.a * state.x * (1.0 - params.m * state.y) >= 0.5


class TestSuites:
    def test_jacobian_suite(self):
        result = jacobian_suite(np.random.default_rng(0), 25)
        assert result.status == "PASS"
        assert result.max_error <= 1e-6

    def test_effort_suite(self):
        assert effort_suite(np.random.default_rng(1), 25).status == "PASS"

    def test_transcritical_suite(self):
        assert transcritical_suite(np.random.default_rng(2), 25).status == "PASS"

    def test_suite_result_status(self):
        result = SuiteResult(suite="x", draws=3, passed=2, max_error=1.0, tolerance=0.5, failures=[1])
        assert result.failed == 1
        assert result.status == "FAIL"
        assert result.to_dict()['failed'] == 1

    def test_run_checks_small_scale(self):
        table = run_checks(seed=0, scale=0.05)
        assert list(table['suite']) == ['jacobian', 'taylor', 'bound', 'transcritical', 'effort']
        assert (table['draws'] >= 1).all()
        assert (table['status'] == "PASS").all()

    def test_run_checks_reproducible(self):
        first = run_checks(seed=7, scale=0.02)
        second = run_checks(seed=7, scale=0.02)
        assert first.equals(second)
