"""
econ/optimal.py - Politique de récolte optimale (chemin singulier)

Le principe du maximum avec contrôle singulier donne deux relations
stationnaires en (x, y); on les résout par Newton amorti puis on en déduit
les efforts optimaux comme efforts d'équilibre des isoclines.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from errors import NegativeEffort, NoConvergence, ZeroBiomass
from model.params import ModelParams, EconParams, State
from model.core import denominator
from analysis.newton import damped_newton, multistart, log_grid
from econ.harvest import prey_effort, predator_effort

logger = logging.getLogger(__name__)


@dataclass
class OptimalPolicy:
    x_opt: float
    y_opt: float
    e1_opt: float
    e2_opt: float
    residual_9: float
    residual_11: float
    scale: float = 1.0
    roots: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'x_opt': self.x_opt,
            'y_opt': self.y_opt,
            'e1_opt': self.e1_opt,
            'e2_opt': self.e2_opt,
            'residual_9': self.residual_9,
            'residual_11': self.residual_11,
            'scale': self.scale,
            'root_count': len(self.roots),
        }


def _singular_terms(params: ModelParams, econ: EconParams, x: float, y: float) -> tuple:
    """
    Membres gauche et droit (termes séparés) des deux relations stationnaires.

    Transcription terme à terme, sans simplification.
    """
    r, k, p, a, m, e, d = params.r, params.k, params.p, params.a, params.m, params.e, params.d
    u = 1.0 - m * y
    D = denominator(params, x, y)
    lam1 = econ.p1 - econ.c1 / (params.q1 * x)
    lam2 = econ.p2 - econ.c2 / (params.q2 * y)

    left_prey = econ.delta * lam1
    right_prey = [
        econ.p1 * (r * (1.0 - x / k) - p * y * u / D),
        lam2 * e * p * y * u / D ** 2,
        lam1 * (-r * x / k + p * a * x * y * u ** 2 / D ** 2),
    ]

    left_predator = econ.delta * lam2
    right_predator = [
        econ.p2 * (e * p * x * u / D - d),
        p * x * lam1 * (a * x * u ** 2 + 1.0 - 2.0 * m * y) / D ** 2,
        -lam2 * e * p * m * x * y / D ** 2,
    ]
    return left_prey, right_prey, left_predator, right_predator


def optimal_singular_residuals(params: ModelParams, econ: EconParams, state: State) -> tuple:
    """
    Résidus (gauche − droite) des deux relations du chemin singulier.

    Args:
        params: paramètres biologiques (les efforts n'interviennent pas)
        econ: prix, coûts, taux d'actualisation
        state: point (x, y) évalué

    Returns:
        Tuple (r9, r11)

    Raises:
        ZeroBiomass: si x ≤ 0 ou y ≤ 0
        InvalidDenominator: si 1 + a·x·(1 − m·y) ≤ 0
    """
    if not (state.x > 0 and state.y > 0):
        raise ZeroBiomass(f"Relations singulières indéfinies en (x={state.x}, y={state.y})")
    left_prey, right_prey, left_predator, right_predator = _singular_terms(params, econ, state.x, state.y)
    return left_prey - math.fsum(right_prey), left_predator - math.fsum(right_predator)


def residual_scale(params: ModelParams, econ: EconParams, state: State) -> float:
    """Échelle naturelle des résidus: 1 + somme des valeurs absolues des termes."""
    left_prey, right_prey, left_predator, right_predator = _singular_terms(params, econ, state.x, state.y)
    return 1.0 + abs(left_prey) + abs(left_predator) + sum(abs(t) for t in right_prey + right_predator)


def _singular_system(params: ModelParams, econ: EconParams):
    def fun(z):
        state = State(float(z[0]), float(z[1]))
        r9, r11 = optimal_singular_residuals(params, econ, state)
        return np.array([r9, r11]), residual_scale(params, econ, state)
    return fun


def _admissible(params: ModelParams):
    def check(z):
        return z[0] > 0 and z[1] > 0 and 1.0 + params.a * z[0] * (1.0 - params.m * z[1]) > 0
    return check


def solve_optimal(params: ModelParams, econ: EconParams, guess: Optional[State] = None) -> OptimalPolicy:
    """
    Équilibre optimal et efforts associés.

    Newton amorti (jacobienne par différences finies) sur les deux
    relations singulières; sans point de départ, multistart 8×8 comme pour
    l'équilibre intérieur et racine de plus petit x.

    Args:
        params: paramètres biologiques
        econ: paramètres économiques
        guess: point de départ optionnel

    Returns:
        OptimalPolicy

    Raises:
        NoConvergence: aucune racine admissible
        NegativeEffort: un effort d'équilibre est négatif (politique jointe)
    """
    fun = _singular_system(params, econ)
    admissible = _admissible(params)

    roots = []
    if guess is not None:
        try:
            roots = [damped_newton(fun, [guess.x, guess.y], admissible=admissible).root]
        except NoConvergence:
            logger.debug(f"Départ ({guess.x:.6g}, {guess.y:.6g}) sans convergence, multistart")

    if not roots:
        upper_y = 1.0 / params.m if params.m > 0 else params.k
        roots = multistart(fun, log_grid(params.k, upper_y), admissible=admissible)
        if not roots:
            raise NoConvergence("Aucun équilibre optimal trouvé sur la grille de départs")
        if len(roots) > 1:
            logger.info(f"{len(roots)} équilibres optimaux, plus petit x retenu")

    best = roots[0]
    state = State(float(best[0]), float(best[1]))
    logger.warning("E1 optimal tiré de l'isocline de la proie, facteur p rétabli sur la prédation")
    r9, r11 = optimal_singular_residuals(params, econ, state)
    policy = OptimalPolicy(
        x_opt=state.x,
        y_opt=state.y,
        e1_opt=prey_effort(params, state.x, state.y),
        e2_opt=predator_effort(params, state.x, state.y),
        residual_9=r9,
        residual_11=r11,
        scale=residual_scale(params, econ, state),
        roots=[State(float(z[0]), float(z[1])) for z in roots],
    )

    if policy.e1_opt < 0 or policy.e2_opt < 0:
        message = (f"Politique rejetée: efforts (E1={policy.e1_opt:.6g}, E2={policy.e2_opt:.6g}) "
                   f"en ({state.x:.6g}, {state.y:.6g})")
        logger.warning(message)
        raise NegativeEffort(message, policy=policy)

    return policy


def compare_reference(policy: OptimalPolicy, params: ModelParams, econ: EconParams,
                      reference: dict, rel_tol: float = 0.01) -> dict:
    """
    Compare une politique à des valeurs de référence.

    Les résidus des relations singulières sont évalués au point de
    référence; chaque écart relatif au-delà de rel_tol est journalisé.

    Args:
        policy: politique calculée
        reference: valeurs attendues parmi x_opt, y_opt, e1_opt, e2_opt
        rel_tol: tolérance relative

    Returns:
        Dict {nom: {expected, computed, rel_error, ok}} plus, si x_opt et
        y_opt sont fournis, 'reference_residual' (résidu relatif au point de référence)
    """
    computed = policy.to_dict()
    comparison = {}
    for name in ("x_opt", "y_opt", "e1_opt", "e2_opt"):
        if name not in reference:
            continue
        expected = float(reference[name])
        value = computed[name]
        rel_error = abs(value - expected) / max(abs(expected), 1e-300)
        ok = rel_error <= rel_tol
        comparison[name] = {'expected': expected, 'computed': value, 'rel_error': rel_error, 'ok': bool(ok)}
        if not ok:
            logger.warning(
                f"Écart à la référence sur {name}: attendu {expected:.6g}, calculé {value:.6g} "
                f"({rel_error:.2%})"
            )

    if "x_opt" in reference and "y_opt" in reference:
        point = State(float(reference["x_opt"]), float(reference["y_opt"]))
        r9, r11 = optimal_singular_residuals(params, econ, point)
        relative = max(abs(r9), abs(r11)) / residual_scale(params, econ, point)
        comparison['reference_residual'] = relative
        if relative > 1e-3:
            logger.warning(f"Point de référence hors des relations singulières (résidu relatif {relative:.3g})")

    return comparison
