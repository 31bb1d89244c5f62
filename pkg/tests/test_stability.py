"""
tests/test_stability.py - Classification trace-déterminant et stabilité globale
"""

import numpy as np
import pytest

from errors import WrongKind
from model.params import State
from analysis.equilibria import interior_equilibrium, trivial_equilibrium
from analysis.stability import classify, classify_matrix, eigenpair, las_conditions, gas_condition


class TestClassifyMatrix:
    @pytest.mark.parametrize("J,label", [
        ([[-1.0, 0.0], [0.0, -2.0]], "StableNode"),
        ([[1.0, 0.0], [0.0, 2.0]], "UnstableNode"),
        ([[1.0, 0.0], [0.0, -1.0]], "Saddle"),
        ([[-0.1, -1.0], [1.0, -0.1]], "StableFocus"),
        ([[0.1, -1.0], [1.0, 0.1]], "UnstableFocus"),
        ([[0.0, -1.0], [1.0, 0.0]], "CenterCandidate"),
    ])
    def test_labels(self, J, label):
        assert classify_matrix(np.array(J)).classification == label

    def test_zero_matrix_is_degenerate(self):
        report = classify_matrix(np.zeros((2, 2)))
        assert report.classification == "CenterCandidate"
        assert report.degenerate is True

    def test_triangular_eigenvalues_exact(self):
        values = eigenpair(np.array([[-0.2, 5.0], [0.0, -1.1]]))
        assert values == (complex(-0.2), complex(-1.1))

    def test_complex_pair_sorted(self):
        lam1, lam2 = eigenpair(np.array([[0.1, -1.0], [1.0, 0.1]]))
        assert lam1.real == pytest.approx(0.1)
        assert lam1.imag > 0 > lam2.imag


class TestInteriorStability:
    def test_unstable_focus_below_threshold(self, p_base):
        params = p_base.with_(m=0.005)
        report = classify(params, interior_equilibrium(params))
        assert report.classification == "UnstableFocus"
        assert report.trace > 0
        assert not report.is_stable

    def test_stable_above_threshold(self, p_base):
        params = p_base.with_(m=0.015)
        report = classify(params, interior_equilibrium(params))
        assert report.classification == "StableFocus"
        assert report.is_stable
        assert set(report.las_sufficient) == {'trace_condition', 'determinant_condition'}

    def test_trivial_has_no_las_flags(self, p_triv):
        eq, _ = trivial_equilibrium(p_triv)
        assert classify(p_triv, eq).las_sufficient is None

    def test_las_conditions_are_booleans(self, p_base):
        flags = las_conditions(p_base.with_(m=0.01), State(77.14, 19.94))
        assert all(isinstance(v, bool) for v in flags.values())


class TestGlobalStability:
    def test_inequality_at_m_0015(self, p_base):
        params = p_base.with_(m=0.015)
        check = gas_condition(params, interior_equilibrium(params))
        assert check.lhs == pytest.approx(0.2376, rel=1e-3)
        assert check.rhs == pytest.approx(0.02449, rel=1e-3)
        assert check.holds is True
        assert check.alpha is None

    def test_state_fills_quadratic_form(self, p_base):
        params = p_base.with_(m=0.015)
        eq = interior_equilibrium(params)
        check = gas_condition(params, eq, probe=State(100.0, 20.0))
        assert check.A > 0
        assert check.beta > 0
        assert check.gamma is not None
        assert 'gamma' in check.notes

    def test_wrong_kind(self, p_triv):
        eq, _ = trivial_equilibrium(p_triv)
        with pytest.raises(WrongKind):
            gas_condition(p_triv, eq)


class TestEigenvalueInvariants:
    @pytest.mark.parametrize("m", [0.005, 0.015])
    def test_sum_and_product_interior(self, p_base, m):
        params = p_base.with_(m=m)
        report = classify(params, interior_equilibrium(params))
        lam1, lam2 = report.eigenvalues
        assert abs((lam1 + lam2) - report.trace) <= 1e-10 * max(1.0, abs(report.trace))
        assert abs(lam1 * lam2 - report.determinant) <= 1e-10 * max(1.0, abs(report.determinant))

    def test_sum_and_product_trivial(self, p_triv):
        eq, report = trivial_equilibrium(p_triv)
        lam1, lam2 = report.eigenvalues
        assert (lam1 + lam2).real == pytest.approx(report.trace, rel=1e-10)
        assert (lam1 * lam2).real == pytest.approx(report.determinant, rel=1e-10)

    def test_effort_at_bionomic_threshold_is_degenerate(self, p_triv):
        params = p_triv.with_(q1=0.5, E1=2.0)
        _, report = trivial_equilibrium(params)
        assert 0j in report.eigenvalues
        assert report.classification == "CenterCandidate"
        assert report.degenerate is True
