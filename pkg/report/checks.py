"""
report/checks.py - Suites de propriétés sur tirages aléatoires

Vérifie à l'échelle du bureau:
- jacobienne analytique contre différences finies
- coefficients de Taylor contre l'oracle par différences finies
- borne ultime sur des simulations aléatoires
- s1 = 0 de Sotomayor au seuil transcritique
- efforts d'équilibre contre les isoclines
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from errors import RefugeModelError
from model.params import ModelParams, State
from model.core import jacobian, taylor_coefficients, vector_field, denominator
from model.finite_diff import fd_jacobian, fd_taylor_coefficients
from analysis.bifurcation import transcritical_check
from econ.harvest import prey_effort, predator_effort
from parallel import parallel_map
from sim.integrate import integrate, SimConfig
from sim.sweep import verify_bound

logger = logging.getLogger(__name__)

DEFAULT_DRAWS = {
    'jacobian': 200,
    'taylor': 50,
    'bound': 20,
    'transcritical': 100,
    'effort': 100,
}

COEFFICIENT_FLOOR = 1e-8

BOUND_BASE = dict(r=3.0, a=0.008, d=0.04, p=0.2, q1=0.2, q2=0.6, E1=2.0, E2=2.0, k=500.0, e=0.15)


@dataclass
class SuiteResult:
    suite: str
    draws: int
    passed: int
    max_error: float
    tolerance: float
    failures: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return self.draws - self.passed

    @property
    def status(self) -> str:
        return "PASS" if self.failed == 0 else "FAIL"

    def to_dict(self) -> dict:
        return {
            'suite': self.suite,
            'draws': self.draws,
            'passed': self.passed,
            'failed': self.failed,
            'max_error': self.max_error,
            'tolerance': self.tolerance,
            'status': self.status,
        }


def random_params(rng: np.random.Generator, harvest: bool = True) -> ModelParams:
    """Paramètres admissibles tirés uniformément sur des plages réalistes."""
    return ModelParams(
        r=rng.uniform(0.5, 4.0),
        k=rng.uniform(100.0, 800.0),
        p=rng.uniform(0.05, 0.5),
        a=rng.uniform(0.001, 0.05),
        m=rng.uniform(0.0, 0.05),
        d=rng.uniform(0.01, 0.5),
        e=rng.uniform(0.05, 0.9),
        q1=rng.uniform(0.1, 1.0),
        q2=rng.uniform(0.1, 1.0),
        E1=rng.uniform(0.0, 3.0) if harvest else 0.0,
        E2=rng.uniform(0.0, 3.0) if harvest else 0.0,
    )


def random_admissible(rng: np.random.Generator, min_denominator: float = 0.5) -> tuple:
    """
    Tirage (params, état) avec x dans [20, k], y dans [1, 50] et
    1 + a·x·(1 − m·y) ≥ min_denominator (nouveau tirage sinon).
    """
    while True:
        params = random_params(rng)
        state = State(rng.uniform(20.0, params.k), rng.uniform(1.0, 50.0))
        if denominator_or_zero(params, state) >= min_denominator:
            return params, state


def denominator_or_zero(params: ModelParams, state: State) -> float:
    try:
        return denominator(params, state.x, state.y)
    except RefugeModelError:
        return 0.0


def _summarise(name: str, errors: list, tolerance: float) -> SuiteResult:
    failures = [i for i, err in enumerate(errors) if not err <= tolerance]
    if failures:
        logger.warning(f"Suite {name}: {len(failures)}/{len(errors)} tirage(s) hors tolérance")
    return SuiteResult(
        suite=name,
        draws=len(errors),
        passed=len(errors) - len(failures),
        max_error=float(max(errors)) if errors else 0.0,
        tolerance=tolerance,
        failures=failures,
    )


def jacobian_suite(rng: np.random.Generator, draws: int) -> SuiteResult:
    """max|J − J_fd| ≤ 1e-6·max|J|."""
    errors = []
    for _ in range(draws):
        params, state = random_admissible(rng)
        J = jacobian(params, state)
        J_fd = fd_jacobian(params, state)
        errors.append(float(np.max(np.abs(J - J_fd)) / np.max(np.abs(J))))
    return _summarise("jacobian", errors, 1e-6)


def taylor_suite(rng: np.random.Generator, draws: int) -> SuiteResult:
    """Chaque coefficient analytique contre l'oracle, en relatif (plancher 1e-8)."""
    errors = []
    for _ in range(draws):
        params, state = random_admissible(rng)
        exact = taylor_coefficients(params, state).to_dict()
        oracle = fd_taylor_coefficients(params, state).to_dict()
        errors.append(coefficient_error(exact, oracle))
    return _summarise("taylor", errors, 1e-4)


def coefficient_error(exact: dict, oracle: dict) -> float:
    """
    Plus grand écart relatif, coefficient par coefficient.

    |exact − oracle| / max(|exact|, 1e-8) pour chaque coefficient (Δ exclu).
    """
    worst = 0.0
    for name, value in exact.items():
        if name == 'delta':
            continue
        worst = max(worst, abs(value - oracle[name]) / max(abs(value), COEFFICIENT_FLOOR))
    return worst


def bound_suite(rng: np.random.Generator, draws: int, t_end: float = 200.0) -> SuiteResult:
    """Simulations aléatoires: verify_bound vrai (erreur 0 = vrai, 1 = faux)."""
    config = SimConfig(t_end=t_end)
    cases = []
    for _ in range(draws):
        params = ModelParams(m=rng.uniform(0.005, 0.02), **BOUND_BASE)
        initial = State(rng.uniform(1.0, 500.0), rng.uniform(1.0, 40.0))
        cases.append((params, initial))

    def run_one(case):
        params, initial = case
        try:
            return 0.0 if verify_bound(integrate(params, initial, config)) else 1.0
        except RefugeModelError as exc:
            logger.warning(f"Suite bound: simulation en échec ({exc})")
            return 1.0

    return _summarise("bound", parallel_map(run_one, cases), 0.0)


def transcritical_suite(rng: np.random.Generator, draws: int) -> SuiteResult:
    """|s1| au seuil r_tc = q1·E1 ≤ 1e-10."""
    errors = []
    for _ in range(draws):
        params = random_params(rng)
        if params.E1 == 0:
            params = params.with_(E1=1.0)
        try:
            errors.append(abs(transcritical_check(params).s1))
        except RefugeModelError as exc:
            logger.warning(f"Suite transcritical: {exc}")
            errors.append(float("inf"))
    return _summarise("transcritical", errors, 1e-10)


def effort_suite(rng: np.random.Generator, draws: int) -> SuiteResult:
    """Efforts d'équilibre substitués: dx/dt et dy/dt nuls en (x, y), relatif à l'échelle des termes."""
    errors = []
    for _ in range(draws):
        params, state = random_admissible(rng)
        free = params.with_(E1=0.0, E2=0.0)
        e1 = prey_effort(free, state.x, state.y)
        e2 = predator_effort(free, state.x, state.y)
        dx, dy = vector_field(free, state.x, state.y)
        res_x = dx - free.q1 * e1 * state.x
        res_y = dy - free.q2 * e2 * state.y
        scale_x = abs(free.r * state.x) + abs(dx) + abs(free.q1 * e1 * state.x)
        scale_y = abs(free.d * state.y) + abs(dy) + abs(free.q2 * e2 * state.y)
        errors.append(max(abs(res_x) / scale_x, abs(res_y) / scale_y))
    return _summarise("effort", errors, 1e-10)


SUITES = {
    'jacobian': jacobian_suite,
    'taylor': taylor_suite,
    'bound': bound_suite,
    'transcritical': transcritical_suite,
    'effort': effort_suite,
}


def run_checks(seed: int = 0, scale: float = 1.0) -> pd.DataFrame:
    """
    Exécute toutes les suites avec un générateur déterministe.

    Args:
        seed: graine de numpy.random.default_rng
        scale: fraction des tirages par défaut (au moins 1 tirage par suite)

    Returns:
        DataFrame: suite, draws, passed, failed, max_error, tolerance, status
    """
    rng = np.random.default_rng(seed)
    rows = []
    for name, suite in SUITES.items():
        draws = max(1, int(round(DEFAULT_DRAWS[name] * scale)))
        result = suite(rng, draws)
        logger.info(f"Suite {name}: {result.passed}/{result.draws} ({result.status})")
        rows.append(result.to_dict())
    return pd.DataFrame(rows, columns=['suite', 'draws', 'passed', 'failed', 'max_error', 'tolerance', 'status'])
