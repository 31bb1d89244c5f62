"""
tests/test_cycles.py - Détection de cycle limite
"""

import math

import numpy as np
import pytest

from errors import TooShort
from model.params import State
from sim.integrate import Trajectory, SimConfig, integrate
from sim.cycles import detect_limit_cycle, refine_extremum


def make_trajectory(params, times, xs, ys) -> Trajectory:
    times = np.asarray(times, dtype=float)
    return Trajectory(
        times=times,
        states=np.column_stack([np.broadcast_to(xs, times.shape), np.broadcast_to(ys, times.shape)]),
        validity=np.ones(len(times), dtype=bool),
        refuge_ok=np.ones(len(times), dtype=bool),
        params_used=params,
    )


class TestSynthetic:
    def test_constant_converges(self, p_base):
        t = np.linspace(0.0, 100.0, 201)
        report = detect_limit_cycle(make_trajectory(p_base, t, 50.0, 10.0), SimConfig(t_end=100.0))
        assert report.verdict == "Converged"
        assert report.amplitude_x == 0.0
        assert report.attractor_point == State(50.0, 10.0)

    def test_sustained_sine_oscillates(self, p_base):
        t = np.linspace(0.0, 200.0, 4001)
        traj = make_trajectory(p_base, t, 50.0 + 10.0 * np.sin(t), 10.0 + 2.0 * np.cos(t))
        report = detect_limit_cycle(traj, SimConfig(t_end=200.0))
        assert report.verdict == "Oscillating"
        assert report.period_estimate == pytest.approx(2.0 * math.pi, rel=1e-3)
        assert report.amplitude_x == pytest.approx(20.0, rel=1e-3)
        assert report.amplitude_y == pytest.approx(4.0, rel=1e-3)
        assert report.peak_count >= 4

    def test_decaying_sine_inconclusive(self, p_base):
        t = np.linspace(0.0, 200.0, 4001)
        envelope = np.exp(-0.05 * t)
        traj = make_trajectory(p_base, t, 50.0 + 10.0 * envelope * np.sin(t),
                               10.0 + 2.0 * envelope * np.cos(t))
        assert detect_limit_cycle(traj, SimConfig(t_end=200.0)).verdict == "Inconclusive"

    def test_far_beyond_bound_diverges(self, p_base):
        t = np.linspace(0.0, 100.0, 201)
        report = detect_limit_cycle(make_trajectory(p_base, t, 1e5, 1.0), SimConfig(t_end=100.0))
        assert report.verdict == "Diverged"

    def test_span_too_short(self, p_base):
        t = np.linspace(0.0, 100.0, 201)
        with pytest.raises(TooShort):
            detect_limit_cycle(make_trajectory(p_base, t, 50.0, 10.0), SimConfig(t_end=300.0))

    def test_too_few_samples(self, p_base):
        t = np.linspace(0.0, 100.0, 20)
        with pytest.raises(TooShort):
            detect_limit_cycle(make_trajectory(p_base, t, 50.0, 10.0), SimConfig(t_end=100.0))

    def test_refine_extremum_parabola(self):
        t = np.array([1.0, 1.5, 2.0])
        v = -(t - 1.3) ** 2
        t_peak, v_peak = refine_extremum(t, v, 1)
        assert t_peak == pytest.approx(1.3, abs=1e-12)
        assert v_peak == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
class TestSimulated:
    def test_limit_cycle_below_threshold(self, p_base):
        config = SimConfig(t_end=2000.0)
        traj = integrate(p_base.with_(m=0.005), State(60.0, 15.0), config)
        report = detect_limit_cycle(traj, config)
        assert report.verdict == "Oscillating"
        assert report.period_estimate > 0

    def test_convergence_above_threshold(self, p_base):
        config = SimConfig(t_end=2000.0)
        traj = integrate(p_base.with_(m=0.015), State(60.0, 15.0), config)
        report = detect_limit_cycle(traj, config)
        assert report.verdict == "Converged"
        assert report.attractor_point.x == pytest.approx(94.99, rel=0.005)
        assert report.attractor_point.y == pytest.approx(23.33, rel=0.005)

    @pytest.mark.parametrize("factor,verdict", [(0.9, "Oscillating"), (1.1, "Converged")])
    def test_verdict_either_side_of_hopf_value(self, p_base, factor, verdict):
        config = SimConfig(t_end=2000.0)
        traj = integrate(p_base.with_(m=factor * 0.010695395), State(60.0, 15.0), config)
        assert detect_limit_cycle(traj, config).verdict == verdict
