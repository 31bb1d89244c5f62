"""
analysis/equilibria.py - Équilibres trivial, axial et intérieur

Calcule:
- E0 = (0, 0) et ses valeurs propres fermées (critère BTP r/q1)
- E1 = (k·(1 − q1·E1/r), 0) et la fenêtre de stabilité locale
- E* par Newton amorti sur les deux isoclines, multistart si besoin
- les conditions de réalisabilité de E*
- le tableau récapitulatif réalisabilité / stabilité des trois équilibres
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from errors import Infeasible, WrongKind, NoConvergence, NoPositiveRoot, InvalidDenominator
from model.params import ModelParams, State
from model.core import denominator
from analysis.newton import damped_newton, multistart, log_grid
from analysis.stability import classify, classify_matrix, gas_condition

logger = logging.getLogger(__name__)


@dataclass
class Equilibrium:
    kind: str
    point: State
    feasible: bool
    feasibility_notes: dict = field(default_factory=dict)
    roots: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'x': self.point.x,
            'y': self.point.y,
            'feasible': self.feasible,
            'feasibility_notes': dict(self.feasibility_notes),
            'root_count': len(self.roots),
        }


def trivial_equilibrium(params: ModelParams) -> tuple:
    """
    Équilibre trivial E0 = (0, 0).

    Valeurs propres exactes r − q1·E1 et −(d + q2·E2):
    noeud stable si E1 > r/q1, col si E1 < r/q1, dégénéré à l'égalité.

    Returns:
        Tuple (Equilibrium, StabilityReport)
    """
    lam1 = params.r - params.q1 * params.E1
    lam2 = -(params.d + params.q2 * params.E2)
    report = classify_matrix(np.array([[lam1, 0.0], [0.0, lam2]]))
    eq = Equilibrium(
        kind="Trivial",
        point=State(0.0, 0.0),
        feasible=True,
        feasibility_notes={'effort_above_btp': bool(params.E1 > params.r / params.q1)},
    )
    return eq, report


def axial_window(params: ModelParams) -> bool:
    """Fenêtre de stabilité locale: 1 − c/(e·p·k − a·k·c) < q1·E1/r < 1, c = d + q2·E2."""
    c = params.predator_loss
    denom = params.e * params.p * params.k - params.a * params.k * c
    if denom == 0:
        return False
    ratio = params.prey_harvest / params.r
    return bool(1.0 - c / denom < ratio < 1.0)


def axial_equilibrium(params: ModelParams, strict: bool = True) -> tuple:
    """
    Équilibre axial E1 = (k·(1 − q1·E1/r), 0).

    Args:
        params: paramètres du modèle
        strict: si True, lève Infeasible quand r ≤ q1·E1; sinon renvoie
            l'équilibre marqué non réalisable

    Returns:
        Tuple (Equilibrium, StabilityReport ou None si le dénominateur
        est invalide en x1)
    """
    growth = params.r > params.prey_harvest
    if strict and not growth:
        raise Infeasible(
            f"Équilibre axial non réalisable: r = {params.r} ≤ q1·E1 = {params.prey_harvest}"
        )

    x1 = params.k * (1.0 - params.prey_harvest / params.r)
    eq = Equilibrium(
        kind="Axial",
        point=State(x1, 0.0),
        feasible=bool(growth and x1 > 0),
        feasibility_notes={
            'growth_exceeds_harvest': bool(growth),
            'las_window': axial_window(params),
        },
    )

    if 1.0 + params.a * x1 <= 0:
        return eq, None
    lam1 = params.r - 2.0 * params.r * x1 / params.k - params.prey_harvest
    lam2 = -params.predator_loss + params.e * params.p * x1 / (1.0 + params.a * x1)
    off_diag = -params.p * x1 / (1.0 + params.a * x1)
    report = classify_matrix(np.array([[lam1, off_diag], [0.0, lam2]]))
    return eq, report


# ----- Équilibre intérieur -----

def nullcline_residual(params: ModelParams, z: np.ndarray) -> tuple:
    """
    Isoclines non triviales (équations divisées par x et par y).

    N1 = r·(1 − x/k) − p·u·y/D − q1·E1
    N2 = e·p·u·x/D − d − q2·E2
    avec u = 1 − m·y, D = 1 + a·x·u.

    Returns:
        Tuple (résidu, échelle)
    """
    x, y = z
    u = 1.0 - params.m * y
    D = denominator(params, x, y)
    predation = params.p * u * y / D
    growth = params.r * (1.0 - x / params.k)
    intake = params.e * params.p * u * x / D
    N1 = growth - predation - params.prey_harvest
    N2 = intake - params.predator_loss
    scale = 1.0 + params.r + abs(params.r * x / params.k) + abs(predation) + params.prey_harvest \
        + abs(intake) + params.predator_loss
    return np.array([N1, N2]), scale


def nullcline_jacobian(params: ModelParams, z: np.ndarray) -> np.ndarray:
    x, y = z
    p, a, m, e = params.p, params.a, params.m, params.e
    u = 1.0 - m * y
    D2 = denominator(params, x, y) ** 2
    return np.array([
        [-params.r / params.k + p * a * u * u * y / D2, -p * (1.0 - 2.0 * m * y + a * x * u * u) / D2],
        [e * p * u / D2, -e * p * m * x / D2],
    ])


def _admissible(params: ModelParams):
    def check(z):
        return z[0] != 0 and 1.0 + params.a * z[0] * (1.0 - params.m * z[1]) > 0
    return check


def _is_positive(params: ModelParams, z) -> bool:
    return z[0] > 0 and z[1] > 0 and 1.0 + params.a * z[0] * (1.0 - params.m * z[1]) > 0


def feasibility_interior(params: ModelParams, eq: Equilibrium) -> dict:
    """
    Conditions de réalisabilité de E*.

    - prey_effort: E1 < (r/q1)·(1 − x*/k)
    - predator_effort: E2 < (1/(a·q2))·(e·p − a·d)
    """
    if eq.kind != "Interior":
        raise WrongKind(f"feasibility_interior exige un équilibre intérieur (reçu {eq.kind})")
    return {
        'prey_effort': bool(params.E1 < params.r / params.q1 * (1.0 - eq.point.x / params.k)),
        'predator_effort': bool(params.E2 < (params.e * params.p - params.a * params.d) / (params.a * params.q2)),
    }


def interior_equilibrium(params: ModelParams, guess: Optional[State] = None) -> Equilibrium:
    """
    Équilibre intérieur E* par Newton amorti sur les isoclines.

    L'isocline du prédateur est évaluée directement depuis les équations
    du modèle: e·p·(1 − m·y)·x/(1 + a·x·(1 − m·y)) = d + q2·E2.

    Args:
        params: paramètres du modèle
        guess: point de départ (continuation); sinon multistart 8×8
            log-espacé sur (0, k] × (0, 1/m] (ou (0, k] si m = 0)

    Returns:
        Equilibrium de plus petit x dans le quadrant positif ouvert;
        roots contient toutes les racines positives trouvées

    Raises:
        NoConvergence: aucune racine depuis aucun départ
        NoPositiveRoot: racines uniquement hors du quadrant positif
    """
    logger.warning("Isocline du prédateur évaluée depuis le modèle (x* hors du dénominateur)")

    def fun(z):
        return nullcline_residual(params, z)

    def jac(z):
        return nullcline_jacobian(params, z)

    admissible = _admissible(params)
    roots = []
    if guess is not None:
        try:
            root = damped_newton(fun, [guess.x, guess.y], jac=jac, admissible=admissible).root
            if _is_positive(params, root):
                roots = [root]
        except NoConvergence:
            logger.debug(f"Départ ({guess.x:.6g}, {guess.y:.6g}) sans convergence, multistart")

    if not roots:
        upper_y = 1.0 / params.m if params.m > 0 else params.k
        found = multistart(fun, log_grid(params.k, upper_y), jac=jac, admissible=admissible)
        if not found:
            raise NoConvergence(f"Aucun équilibre intérieur trouvé (m={params.m:.6g})")
        roots = [z for z in found if _is_positive(params, z)]
        if not roots:
            raise NoPositiveRoot(
                f"{len(found)} racine(s) hors du quadrant positif (m={params.m:.6g})"
            )
        if len(roots) > 1:
            logger.info(f"{len(roots)} équilibres intérieurs, plus petit x retenu (m={params.m:.6g})")

    best = roots[0]
    eq = Equilibrium(
        kind="Interior",
        point=State(float(best[0]), float(best[1])),
        feasible=True,
        roots=[State(float(z[0]), float(z[1])) for z in roots],
    )
    eq.feasibility_notes = feasibility_interior(params, eq)
    eq.feasible = all(eq.feasibility_notes.values())
    return eq


# ----- Tableau récapitulatif -----

def equilibria_summary(params: ModelParams) -> pd.DataFrame:
    """
    Tableau réalisabilité / stabilité des équilibres E0, E1, E* (LAS et GAS).

    Les conditions sont évaluées pour les paramètres donnés et confrontées
    à la classification par valeurs propres.

    Returns:
        DataFrame: equilibrium, x, y, feasible, condition, holds, nature, classification
    """
    rows = []

    eq0, rep0 = trivial_equilibrium(params)
    rows.append({
        'equilibrium': 'E0', 'x': 0.0, 'y': 0.0, 'feasible': True,
        'condition': 'E1 > r/q1', 'holds': eq0.feasibility_notes['effort_above_btp'],
        'nature': 'LAS', 'classification': rep0.classification,
    })

    eq1, rep1 = axial_equilibrium(params, strict=False)
    rows.append({
        'equilibrium': 'E1', 'x': eq1.point.x, 'y': 0.0, 'feasible': eq1.feasible,
        'condition': '1 - c/(epk - akc) < q1E1/r < 1', 'holds': eq1.feasibility_notes['las_window'],
        'nature': 'LAS', 'classification': rep1.classification if rep1 is not None else None,
    })

    try:
        eqs = interior_equilibrium(params)
    except (NoConvergence, NoPositiveRoot, InvalidDenominator) as exc:
        logger.info(f"Pas d'équilibre intérieur pour le récapitulatif: {exc}")
        for nature, condition in (('LAS', 'LAS trace + déterminant'), ('GAS', '4rme(1+ak)(1+ax*) > pm²y*²')):
            rows.append({
                'equilibrium': 'E*', 'x': None, 'y': None, 'feasible': False,
                'condition': condition, 'holds': False, 'nature': nature, 'classification': None,
            })
        return pd.DataFrame(rows)

    reps = classify(params, eqs)
    gas = gas_condition(params, eqs)
    rows.append({
        'equilibrium': 'E*', 'x': eqs.point.x, 'y': eqs.point.y, 'feasible': eqs.feasible,
        'condition': 'LAS trace + déterminant', 'holds': all(reps.las_sufficient.values()),
        'nature': 'LAS', 'classification': reps.classification,
    })
    rows.append({
        'equilibrium': 'E*', 'x': eqs.point.x, 'y': eqs.point.y, 'feasible': eqs.feasible,
        'condition': '4rme(1+ak)(1+ax*) > pm²y*²', 'holds': gas.holds,
        'nature': 'GAS', 'classification': reps.classification,
    })
    return pd.DataFrame(rows)
