"""
tests/test_sweep.py - Balayage du refuge, borne ultime, exécution parallèle
"""

import math

import numpy as np
import pytest

from model.params import State
from model.presets import REFUGE_TABLE, base_params
from parallel import parallel_map, worker_count
from sim.integrate import integrate, SimConfig, Trajectory
from sim.sweep import sweep_refuge, verify_bound, refuge_trajectories, SWEEP_COLUMNS


@pytest.fixture(scope="module")
def table():
    return sweep_refuge(base_params(), [m for m, _, _ in REFUGE_TABLE])


class TestSweepRefuge:
    def test_columns_and_order(self, table):
        assert list(table.columns) == SWEEP_COLUMNS == ['m', 'x_star', 'y_star', 'classification']
        assert list(table['m']) == [m for m, _, _ in REFUGE_TABLE]

    def test_reference_values(self, table):
        for (_, x, y), (_, row) in zip(REFUGE_TABLE, table.iterrows()):
            assert row['x_star'] == pytest.approx(x, rel=0.005)
            assert row['y_star'] == pytest.approx(y, rel=0.005)

    def test_trends(self, table):
        assert table['x_star'].is_monotonic_increasing
        y = table['y_star'].tolist()
        assert y[1] > y[0]
        assert all(a > b for a, b in zip(y[1:], y[2:]))

    def test_classification_across_threshold(self, table):
        assert table.loc[0, 'classification'] == "UnstableFocus"
        assert table.loc[1, 'classification'] == "StableFocus"

    def test_empty(self, p_base):
        empty = sweep_refuge(p_base, [])
        assert empty.empty
        assert list(empty.columns) == SWEEP_COLUMNS

    def test_absent_equilibrium(self, p_base):
        result = sweep_refuge(p_base.with_(E2=10.0), [0.01])
        assert result.loc[0, 'classification'] == "Absent"
        assert math.isnan(result.loc[0, 'x_star'])


class TestVerifyBound:
    def test_origin(self, p_base):
        traj = integrate(p_base.with_(m=0.01), State(0.0, 0.0), SimConfig(t_end=5.0))
        assert verify_bound(traj)

    def test_start_above_bound(self, p_base):
        params = p_base.with_(m=0.01)
        traj = integrate(params, State(480.0, 30.0), SimConfig(t_end=20.0))
        assert traj.xi()[0] > 0
        assert verify_bound(traj)

    def test_violation_detected(self, p_base):
        params = p_base.with_(m=0.01)
        times = np.array([0.0, 1.0])
        traj = Trajectory(times=times, states=np.array([[10.0, 1.0], [2000.0, 1.0]]),
                          validity=np.ones(2, dtype=bool), refuge_ok=np.ones(2, dtype=bool),
                          params_used=params)
        assert not verify_bound(traj)


class TestParallel:
    def test_order_preserved(self, monkeypatch):
        monkeypatch.setenv("BIOECO_THREADS", "4")
        assert worker_count() == 4
        assert parallel_map(lambda v: v * v, range(10)) == [v * v for v in range(10)]

    def test_invalid_thread_count(self, monkeypatch):
        monkeypatch.setenv("BIOECO_THREADS", "many")
        assert worker_count() == 1

    def test_same_sweep_with_threads(self, p_base, monkeypatch):
        m_values = [0.015, 0.045]
        config = SimConfig(t_end=40.0)
        serial = refuge_trajectories(p_base, m_values, State(60.0, 1.0), config)
        monkeypatch.setenv("BIOECO_THREADS", "2")
        threaded = refuge_trajectories(p_base, m_values, State(60.0, 1.0), config)
        assert serial.equals(threaded)


@pytest.mark.slow
def test_terminal_predator_decreases_with_refuge(p_base):
    m_values = [m for m, _, _ in REFUGE_TABLE]
    terminal = refuge_trajectories(p_base, m_values, State(60.0, 1.0), SimConfig(t_end=500.0))
    assert list(terminal.columns) == ['m', 'x_end', 'y_end', 'y_max', 'verdict', 'valid']
    tail = terminal[terminal['m'] >= 0.015]['y_end'].tolist()
    assert all(a > b for a, b in zip(tail, tail[1:]))
    assert terminal['valid'].all()
