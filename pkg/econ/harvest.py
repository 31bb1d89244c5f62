"""
econ/harvest.py - Rente économique et équilibres bionomiques

Calcule:
- la rente nette de chaque pêcherie (p·q·biomasse − c)·effort
- les quatre cas d'équilibre bionomique (rente nulle + équilibre biologique)
- les prix fictifs actualisés e^{δt}·λ_i
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from errors import ZeroBiomass, InvalidDenominator, NoConvergence, NoPositiveRoot
from model.params import ModelParams, EconParams, State
from model.core import denominator
from analysis.equilibria import interior_equilibrium

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RevenueReport:
    pi_x: float
    pi_y: float
    pi: float

    def to_dict(self) -> dict:
        return {'pi_x': self.pi_x, 'pi_y': self.pi_y, 'pi': self.pi}


@dataclass
class BionomicEquilibrium:
    case_id: str
    x_inf: Optional[float]
    y_inf: Optional[float]
    e1_inf: Optional[float]
    e2_inf: Optional[float]
    exists: bool
    conditions: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'case_id': self.case_id,
            'x_inf': self.x_inf,
            'y_inf': self.y_inf,
            'e1_inf': self.e1_inf,
            'e2_inf': self.e2_inf,
            'exists': self.exists,
            'conditions': dict(self.conditions),
        }


@dataclass(frozen=True)
class ShadowPrices:
    """Facteurs invariants dans le temps e^{δt}·λ1 et e^{δt}·λ2."""
    lambda1_scaled: float
    lambda2_scaled: float

    def to_dict(self) -> dict:
        return {'lambda1_scaled': self.lambda1_scaled, 'lambda2_scaled': self.lambda2_scaled}


def revenue(econ: EconParams, params: ModelParams, state: State) -> RevenueReport:
    """
    Rente nette instantanée des deux pêcheries.

    Args:
        econ: prix et coûts
        params: paramètres (efforts E1, E2 lus ici)
        state: biomasses (x, y)

    Returns:
        RevenueReport avec pi = pi_x + pi_y
    """
    pi_x = (econ.p1 * params.q1 * state.x - econ.c1) * params.E1
    pi_y = (econ.p2 * params.q2 * state.y - econ.c2) * params.E2
    return RevenueReport(pi_x=pi_x, pi_y=pi_y, pi=pi_x + pi_y)


def shadow_prices(econ: EconParams, params: ModelParams, state: State) -> ShadowPrices:
    """
    Prix fictifs sur le chemin singulier: p1 − c1/(q1·x) et p2 − c2/(q2·y).

    Raises:
        ZeroBiomass: si x ≤ 0 ou y ≤ 0
    """
    if not (state.x > 0 and state.y > 0):
        raise ZeroBiomass(f"Prix fictifs indéfinis en (x={state.x}, y={state.y})")
    return ShadowPrices(
        lambda1_scaled=econ.p1 - econ.c1 / (params.q1 * state.x),
        lambda2_scaled=econ.p2 - econ.c2 / (params.q2 * state.y),
    )


# ----- Efforts sur les isoclines -----

def prey_effort(params: ModelParams, x: float, y: float) -> float:
    """Effort E1 annulant dx/dt en (x, y): (r·(1 − x/k) − p·u·y/D)/q1."""
    u = 1.0 - params.m * y
    D = denominator(params, x, y)
    return (params.r * (1.0 - x / params.k) - params.p * u * y / D) / params.q1


def predator_effort(params: ModelParams, x: float, y: float) -> float:
    """Effort E2 annulant dy/dt en (x, y): (e·p·u·x/D − d)/q2."""
    u = 1.0 - params.m * y
    D = denominator(params, x, y)
    return (params.e * params.p * u * x / D - params.d) / params.q2


# ----- Cas bionomiques -----

def _case_one(params: ModelParams, econ: EconParams) -> BionomicEquilibrium:
    """Pêche du prédateur arrêtée (E2 = 0), proie à rente nulle."""
    logger.warning("Cas I: x∞ = c1/(p1·q1) (rente nulle de la proie) au lieu de c1/(p1·q2)")
    x = econ.c1 / (econ.p1 * params.q1)
    effort_cap = params.r / params.q1 * (1.0 - econ.c1 / (econ.p1 * params.q1 * params.k))

    y = e1 = None
    gain = params.e * params.p - params.a * params.d
    if params.m > 0 and gain > 0:
        # isocline du prédateur avec E2 = 0: e·p·u·x = d·(1 + a·x·u)
        u = params.d / (x * gain)
        y = (1.0 - u) / params.m
        try:
            e1 = prey_effort(params, x, y)
        except InvalidDenominator:
            e1 = None

    conditions = {
        'y_positive': bool(y is not None and y > 0),
        'e1_positive': bool(e1 is not None and e1 > 0),
        'effort_bound': bool(e1 is not None and e1 < effort_cap),
        'predator_unprofitable': bool(y is not None and econ.p2 * params.q2 * y < econ.c2),
    }
    return BionomicEquilibrium(
        case_id="I", x_inf=x, y_inf=y, e1_inf=e1, e2_inf=0.0,
        exists=all(conditions.values()), conditions=conditions,
    )


def _smallest_prey_root(params: ModelParams, y: float) -> Optional[float]:
    """
    Plus petite racine positive de l'isocline de la proie à y fixé (E1 = 0).

    r·(1 − x/k)·(1 + a·u·x) = p·u·y, quadratique en x.
    """
    u = 1.0 - params.m * y
    coefficients = [
        -params.r * params.a * u / params.k,
        params.r * (params.a * u - 1.0 / params.k),
        params.r - params.p * u * y,
    ]
    if coefficients[0] == 0:
        coefficients = coefficients[1:]
    roots = np.roots(coefficients)
    positive = sorted(
        float(z.real) for z in roots
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)) and z.real > 0
        and 1.0 + params.a * z.real * u > 0
    )
    return positive[0] if positive else None


def _case_two(params: ModelParams, econ: EconParams) -> BionomicEquilibrium:
    """Pêche de la proie fermée (E1 = 0), prédateur à rente nulle."""
    y = econ.c2 / (econ.p2 * params.q2)
    x = _smallest_prey_root(params, y)
    e2 = predator_effort(params, x, y) if x is not None else None
    bound = (params.d - econ.p2 * params.q2 * params.e * params.r * params.k / (4.0 * econ.c2)) / params.q2

    conditions = {
        'x_positive': x is not None,
        'effort_bound': bool(e2 is not None and e2 >= bound),
        'prey_unprofitable': bool(x is not None and econ.p1 * params.q1 * x < econ.c1),
    }
    return BionomicEquilibrium(
        case_id="II", x_inf=x, y_inf=y, e1_inf=0.0, e2_inf=e2,
        exists=all(conditions.values()), conditions=conditions,
    )


def _case_three(params: ModelParams, econ: EconParams) -> BionomicEquilibrium:
    """Fermeture totale: prémisses évaluées à l'équilibre intérieur non récolté."""
    x = y = None
    try:
        eq = interior_equilibrium(params.with_(E1=0.0, E2=0.0))
        x, y = eq.point.x, eq.point.y
    except (NoConvergence, NoPositiveRoot) as exc:
        logger.info(f"Cas III: pas d'équilibre intérieur non récolté ({exc})")

    conditions = {
        'prey_unprofitable': bool(x is not None and econ.p1 * params.q1 * x < econ.c1),
        'predator_unprofitable': bool(y is not None and econ.p2 * params.q2 * y < econ.c2),
    }
    return BionomicEquilibrium(
        case_id="III", x_inf=x, y_inf=y, e1_inf=0.0, e2_inf=0.0,
        exists=False, conditions=conditions,
    )


def _case_four(params: ModelParams, econ: EconParams) -> BionomicEquilibrium:
    """Les deux pêcheries ouvertes, rente nulle pour les deux espèces."""
    x = econ.c1 / (econ.p1 * params.q1)
    y = econ.c2 / (econ.p2 * params.q2)
    p1q1, p2q2 = econ.p1 * params.q1, econ.p2 * params.q2
    sheltered = p2q2 - params.m * econ.c2
    common = p1q1 * p2q2 + params.a * econ.c1 * sheltered

    conditions = {
        'condition_i': bool(
            params.r / params.q1 * (1.0 - econ.c1 / (p1q1 * params.k))
            > params.p * sheltered * econ.c2 / (p2q2 * common)
        ),
        'condition_ii': bool(params.d < params.e * params.p * sheltered * econ.c1 / common),
    }
    exists = conditions['condition_i'] and conditions['condition_ii']

    try:
        e1 = prey_effort(params, x, y)
        e2 = predator_effort(params, x, y)
    except InvalidDenominator as exc:
        logger.warning(f"Cas IV: {exc}")
        conditions.update({'e1_nonnegative': False, 'e2_nonnegative': False})
        return BionomicEquilibrium(
            case_id="IV", x_inf=x, y_inf=y, e1_inf=None, e2_inf=None,
            exists=False, conditions=conditions,
        )

    conditions['e1_nonnegative'] = bool(e1 >= 0)
    conditions['e2_nonnegative'] = bool(e2 >= 0)
    if exists != (conditions['e1_nonnegative'] and conditions['e2_nonnegative']):
        logger.warning(
            f"Cas IV: conditions (i)-(ii) = {exists} mais efforts (E1={e1:.6g}, E2={e2:.6g})"
        )
    return BionomicEquilibrium(
        case_id="IV", x_inf=x, y_inf=y, e1_inf=e1, e2_inf=e2,
        exists=bool(exists), conditions=conditions,
    )


def bionomic_equilibrium(params: ModelParams, econ: EconParams) -> list:
    """
    Évalue les quatre cas d'équilibre bionomique.

    Les efforts E1, E2 de params sont ignorés: ce sont les inconnues.
    La non-existence est une donnée (exists = False), jamais une erreur.

    Args:
        params: paramètres biologiques
        econ: prix et coûts

    Returns:
        Liste [Cas I, Cas II, Cas III, Cas IV] de BionomicEquilibrium
    """
    base = params.with_(E1=0.0, E2=0.0)
    return [_case_one(base, econ), _case_two(base, econ), _case_three(base, econ), _case_four(base, econ)]


def bionomic_table(cases: list) -> pd.DataFrame:
    """Tableau plat des cas (une ligne par cas, conditions en texte)."""
    rows = []
    for case in cases:
        rows.append({
            'case_id': case.case_id,
            'x_inf': case.x_inf,
            'y_inf': case.y_inf,
            'e1_inf': case.e1_inf,
            'e2_inf': case.e2_inf,
            'exists': case.exists,
            'conditions': ";".join(f"{k}={'true' if v else 'false'}" for k, v in case.conditions.items()),
        })
    return pd.DataFrame(rows, columns=['case_id', 'x_inf', 'y_inf', 'e1_inf', 'e2_inf', 'exists', 'conditions'])
