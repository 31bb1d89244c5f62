"""
analysis/stability.py - Classification de stabilité et stabilité globale

Calcule:
- trace, déterminant, valeurs propres de la jacobienne
- la classification trace-déterminant (noeud, foyer, col, centre candidat)
- les conditions suffisantes de stabilité locale à l'équilibre intérieur
- l'inégalité de stabilité globale et les coefficients α, β, γ, A
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from errors import WrongKind
from model.params import ModelParams, State
from model.core import jacobian, denominator

logger = logging.getLogger(__name__)

CENTER_TOL = 1e-10
DEGENERATE_TOL = 1e-14

STABLE = ("StableNode", "StableFocus")


@dataclass
class StabilityReport:
    trace: float
    determinant: float
    eigenvalues: tuple
    classification: str
    las_sufficient: Optional[dict] = None
    degenerate: bool = False

    @property
    def is_stable(self) -> bool:
        return self.classification in STABLE

    def to_dict(self) -> dict:
        return {
            'trace': self.trace,
            'determinant': self.determinant,
            'eigenvalues': [complex(v) for v in self.eigenvalues],
            'classification': self.classification,
            'las_sufficient': self.las_sufficient,
            'degenerate': self.degenerate,
        }


def eigenpair(J: np.ndarray) -> tuple:
    """
    Valeurs propres d'une matrice 2×2.

    Matrice triangulaire: les termes diagonaux, exactement.
    Sinon numpy.linalg.eigvals, triées par partie réelle décroissante.
    """
    if J[0, 1] == 0.0 or J[1, 0] == 0.0:
        return (complex(J[0, 0]), complex(J[1, 1]))
    values = np.linalg.eigvals(J)
    values = sorted((complex(v) for v in values), key=lambda v: (-v.real, -v.imag))
    return tuple(values)


def classify_matrix(J: np.ndarray) -> StabilityReport:
    """
    Classification selon le diagramme trace-déterminant.

    Args:
        J: jacobienne 2×2

    Returns:
        StabilityReport (las_sufficient non renseigné)
    """
    trace = float(J[0, 0] + J[1, 1])
    det = float(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])
    eigenvalues = eigenpair(J)
    size = max(1.0, float(np.max(np.abs(J))))

    degenerate = abs(det) <= DEGENERATE_TOL * size ** 2
    if degenerate:
        label = "CenterCandidate"
    elif det < 0:
        label = "Saddle"
    elif abs(trace) < CENTER_TOL:
        label = "CenterCandidate"
    else:
        kind = "Node" if trace ** 2 - 4.0 * det >= 0 else "Focus"
        label = ("Stable" if trace < 0 else "Unstable") + kind

    return StabilityReport(
        trace=trace,
        determinant=det,
        eigenvalues=eigenvalues,
        classification=label,
        degenerate=degenerate,
    )


def las_conditions(params: ModelParams, point: State) -> dict:
    """
    Conditions suffisantes de stabilité locale, sous leur forme littérale.

    trace: e·a·x·u²·(p + y − p·x) + e·y > p·y·(m·y − p − m·e·x) + r·x·D²
    déterminant: p·y·u > D²
    avec u = 1 − m·y et D = 1 + a·x·u.
    """
    x, y = point.x, point.y
    r, p, a, m, e = params.r, params.p, params.a, params.m, params.e
    u = 1.0 - m * y
    D = denominator(params, x, y)

    lhs5 = e * a * x * u * u * (p + y - p * x) + e * y
    rhs5 = p * y * (m * y - p - m * e * x) + r * x * D * D
    return {
        'trace_condition': bool(lhs5 > rhs5),
        'determinant_condition': bool(p * y * u > D * D),
    }


def classify(params: ModelParams, eq) -> StabilityReport:
    """
    Classe un équilibre à partir de la jacobienne en son point.

    Pour un équilibre intérieur, les conditions suffisantes sont jointes
    comme drapeaux; un désaccord avec les valeurs propres est journalisé.

    Args:
        params: paramètres du modèle
        eq: Equilibrium (kind, point)

    Returns:
        StabilityReport
    """
    report = classify_matrix(jacobian(params, eq.point))

    if eq.kind == "Interior":
        flags = las_conditions(params, eq.point)
        report.las_sufficient = flags
        flags_stable = flags['trace_condition'] and flags['determinant_condition']
        if flags_stable and not report.is_stable:
            logger.warning(
                f"Conditions suffisantes vérifiées mais valeurs propres {report.classification} "
                f"en ({eq.point.x:.6g}, {eq.point.y:.6g}), m={params.m:.6g}"
            )
        elif report.is_stable and not flags_stable:
            logger.info(
                f"Équilibre stable ({report.classification}) sans les conditions suffisantes, "
                f"m={params.m:.6g}"
            )

    return report


# ----- Stabilité globale -----

@dataclass
class GasCheck:
    lhs: float
    rhs: float
    holds: bool
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    A: Optional[float] = None
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'lhs': self.lhs, 'rhs': self.rhs, 'holds': self.holds,
            'alpha': self.alpha, 'beta': self.beta, 'gamma': self.gamma, 'A': self.A,
            'notes': dict(self.notes),
        }


def gas_condition(params: ModelParams, eq, probe: Optional[State] = None) -> GasCheck:
    """
    Inégalité de stabilité globale 4·r·m·e·(1 + a·k)·(1 + a·x*) > p·m²·(y*)².

    Si probe est fourni, évalue aussi les coefficients de la forme
    quadratique α, β, γ et A en (probe, eq) sous leur forme littérale
    (γ mélange des termes de dimensions différentes: valeur informative).

    Args:
        params: paramètres du modèle
        eq: équilibre intérieur
        probe: état (x, y) optionnel

    Returns:
        GasCheck
    """
    if eq.kind != "Interior":
        raise WrongKind(f"gas_condition exige un équilibre intérieur (reçu {eq.kind})")

    r, k, p, a, m, e = params.r, params.k, params.p, params.a, params.m, params.e
    xs, ys = eq.point.x, eq.point.y
    lhs = 4.0 * r * m * e * (1.0 + a * k) * (1.0 + a * xs)
    rhs = p * m * m * ys * ys
    check = GasCheck(lhs=lhs, rhs=rhs, holds=bool(lhs > rhs))

    if probe is not None:
        x, y = probe.x, probe.y
        A = (1.0 + a * x * (1.0 - m * y)) * (1.0 + a * xs * (1.0 - m * ys))
        check.A = A
        check.alpha = r / k + p * m * (y + ys) / A - p * y * (1.0 + m * y * ys) / A
        check.beta = m * x * e * p / A
        check.gamma = (p * x * (1.0 + m * y * ys) + p * (1.0 - m * (y + ys))
                       - e * p - e * p * ys - p * (y + ys)) / A
        check.notes['gamma'] = "forme littérale, informatif"

    return check
