"""
report/runner.py - Exécution d'une commande et enveloppe de résultats

Dispatch des commandes (equilibria, stability, simulate, hopf, bionomic,
optimal, sweep, check, reproduce). Les avertissements journalisés pendant
l'exécution deviennent les diagnostics de l'enveloppe; les erreurs de
domaine y sont consignées avec un code de sortie non nul.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

import pandas as pd

from errors import (RefugeModelError, ConfigError, StepFailure, NegativeEffort, TooShort,
                    DoubleZeroEigenvalue, CheckFailure)
from model.params import State
from model.core import ultimate_bound, persistence_check, boundary_persistence, discounted_revenue
from analysis.equilibria import (trivial_equilibrium, axial_equilibrium, interior_equilibrium,
                                 equilibria_summary)
from analysis.stability import classify, gas_condition
from analysis.bifurcation import hopf_scan, transcritical_check
from econ.harvest import bionomic_equilibrium, bionomic_table, revenue, shadow_prices
from econ.optimal import solve_optimal, compare_reference
from sim.integrate import integrate
from sim.cycles import detect_limit_cycle
from sim.sweep import sweep_refuge, refuge_trajectories, verify_bound
from report.checks import run_checks
from report.reproduce import reproduce_all

logger = logging.getLogger(__name__)

PACKAGE_LOGGERS = ("model", "analysis", "econ", "sim", "report", "parallel", "config_loader")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass
class ResultEnvelope:
    command: str
    inputs_echo: dict
    results: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    error: Optional[dict] = None


class DiagnosticsCollector(logging.Handler):
    """Collecte les messages WARNING+ sans doublon, dans l'ordre d'apparition."""

    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages = []
        self._seen = set()

    def emit(self, record):
        message = record.getMessage()
        if message not in self._seen:
            self._seen.add(message)
            self.messages.append(message)


@contextmanager
def capture_diagnostics():
    """
    Attache un collecteur aux loggers du paquet le temps du bloc.

    Yields:
        Liste (mise à jour en place) des messages collectés
    """
    collector = DiagnosticsCollector()
    saved = []
    for name in PACKAGE_LOGGERS:
        package_logger = logging.getLogger(name)
        saved.append((package_logger, package_logger.level))
        if package_logger.getEffectiveLevel() > logging.WARNING:
            package_logger.setLevel(logging.WARNING)
        package_logger.addHandler(collector)
    try:
        yield collector.messages
    finally:
        for package_logger, level in saved:
            package_logger.removeHandler(collector)
            package_logger.setLevel(level)


# ----- Commandes -----

def _eigen_row(name: str, report) -> dict:
    lam1, lam2 = report.eigenvalues
    row = {
        'equilibrium': name,
        'trace': report.trace,
        'determinant': report.determinant,
        'eig1_re': lam1.real, 'eig1_im': lam1.imag,
        'eig2_re': lam2.real, 'eig2_im': lam2.imag,
        'classification': report.classification,
    }
    flags = report.las_sufficient or {}
    row['trace_condition'] = flags.get('trace_condition')
    row['determinant_condition'] = flags.get('determinant_condition')
    return row


def run_equilibria(config, results: dict):
    params = config.model_params()
    results['equilibria'] = equilibria_summary(params)
    bound = ultimate_bound(params)
    results['bound'] = {'zeta': bound.zeta, 'kappa': bound.kappa, 'ultimate': bound.ultimate}
    persistence = persistence_check(params)
    results['persistence'] = {
        'growth_condition': persistence.growth_condition,
        'consumption_condition': persistence.consumption_condition,
        'permanent': persistence.permanent,
    }
    results['boundary'] = boundary_persistence(params)


def run_stability(config, results: dict):
    params = config.model_params()
    rows = []
    _, report0 = trivial_equilibrium(params)
    rows.append(_eigen_row('E0', report0))
    axial, report1 = axial_equilibrium(params, strict=False)
    if report1 is not None and axial.feasible:
        rows.append(_eigen_row('E1', report1))
    try:
        eq = interior_equilibrium(params)
        rows.append(_eigen_row('E*', classify(params, eq)))
        results['gas'] = gas_condition(params, eq).to_dict()
    except RefugeModelError as exc:
        logger.info(f"Pas d'équilibre intérieur: {exc}")
    results['stability'] = pd.DataFrame(rows)

    if params.E1 > 0:
        try:
            results['transcritical'] = transcritical_check(params).to_dict()
        except DoubleZeroEigenvalue as exc:
            logger.warning(f"Transcritique: {exc}")


def run_simulate(config, results: dict):
    params = config.model_params()
    sim = config.sim_config()
    try:
        traj = integrate(params, config.initial_state(), sim)
    except StepFailure as exc:
        if exc.trajectory is not None:
            results['trajectory'] = exc.trajectory.to_frame()
        raise

    results['trajectory'] = traj.to_frame()
    try:
        results['cycle'] = detect_limit_cycle(traj, sim).to_dict()
    except TooShort as exc:
        logger.warning(f"Analyse de cycle impossible: {exc}")
    results['bound'] = {'verified': verify_bound(traj), 'ultimate': ultimate_bound(params).ultimate}

    econ = config.econ_params()
    if econ is not None:
        results['revenue'] = {'present_value': discounted_revenue(traj, params, econ)}


def run_hopf(config, results: dict):
    params = config.model_params()
    block = config.hopf
    found = hopf_scan(params, block['m_lo'], block['m_hi'], block['grid_points'])
    results['hopf'] = pd.DataFrame([h.to_dict() for h in found])
    if found:
        results['coefficients'] = found[0].coefficients.to_dict()


def run_bionomic(config, results: dict):
    params = config.model_params()
    econ = config.econ_params()
    cases = bionomic_equilibrium(params, econ)
    results['bionomic'] = bionomic_table(cases)
    for case in cases:
        if case.case_id == "IV" and case.exists and case.e1_inf >= 0 and case.e2_inf >= 0:
            worked = params.with_(E1=case.e1_inf, E2=case.e2_inf)
            results['revenue_case_iv'] = revenue(econ, worked, State(case.x_inf, case.y_inf)).to_dict()


def run_optimal(config, results: dict):
    params = config.model_params()
    econ = config.econ_params()
    try:
        policy = solve_optimal(params, econ)
    except NegativeEffort as exc:
        if exc.policy is not None:
            results['optimal'] = pd.DataFrame([exc.policy.to_dict()])
        raise

    results['optimal'] = pd.DataFrame([policy.to_dict()])
    point = State(policy.x_opt, policy.y_opt)
    results['shadow_prices'] = shadow_prices(econ, params, point).to_dict()
    worked = params.with_(E1=policy.e1_opt, E2=policy.e2_opt)
    results['revenue'] = revenue(econ, worked, point).to_dict()
    if config.reference is not None:
        results['reference'] = compare_reference(policy, params, econ, config.reference)


def run_sweep(config, results: dict):
    params = config.model_params()
    m_values = config.sweep['m_values']
    results['sweep'] = sweep_refuge(params, m_values)
    initial = config.sweep.get('initial')
    if initial is not None:
        results['terminal'] = refuge_trajectories(params, m_values, State(*initial), config.sim_config())


def run_check(config, results: dict):
    table = run_checks(seed=config.check['seed'], scale=config.check['scale'])
    results['checks'] = table
    if (table['status'] != "PASS").any():
        failed = ", ".join(table.loc[table['status'] != "PASS", 'suite'])
        raise CheckFailure(f"Suite(s) en échec: {failed}")


def run_reproduce(config, results: dict):
    table = reproduce_all()
    results['reproduce'] = table
    if (table['status'] == "FAIL").any():
        failed = ", ".join(table.loc[table['status'] == "FAIL", 'item'])
        raise CheckFailure(f"Élément(s) non reproduit(s): {failed}")


COMMANDS = {
    'equilibria': run_equilibria,
    'stability': run_stability,
    'simulate': run_simulate,
    'hopf': run_hopf,
    'bionomic': run_bionomic,
    'optimal': run_optimal,
    'sweep': run_sweep,
    'check': run_check,
    'reproduce': run_reproduce,
}


def run(config) -> ResultEnvelope:
    """
    Exécute la commande d'une configuration.

    Les erreurs de domaine ne sont jamais propagées: elles sont consignées
    dans error et diagnostics, avec exit_code 2 (configuration) ou 3.

    Args:
        config: RunConfig validé

    Returns:
        ResultEnvelope
    """
    envelope = ResultEnvelope(command=config.command, inputs_echo=config.to_dict())
    with capture_diagnostics() as diagnostics:
        try:
            COMMANDS[config.command](config, envelope.results)
        except ConfigError as exc:
            envelope.exit_code = EXIT_CONFIG
            envelope.error = {'type': type(exc).__name__, 'message': str(exc)}
            logger.error(f"{type(exc).__name__}: {exc}")
        except RefugeModelError as exc:
            envelope.exit_code = EXIT_NUMERICAL
            envelope.error = {'type': type(exc).__name__, 'message': str(exc)}
            logger.error(f"{type(exc).__name__}: {exc}")
    envelope.diagnostics = list(diagnostics)
    return envelope
