"""
model/core.py - Champ de vecteurs, jacobienne et coefficients de Taylor

Modèle récolté avec refuge proportionnel aux deux espèces:
    dx/dt = r·x·(1 − x/k) − p·(1 − m·y)·x·y / (1 + a·x·(1 − m·y)) − q1·E1·x
    dy/dt = e·p·(1 − m·y)·x·y / (1 + a·x·(1 − m·y)) − d·y − q2·E2·y

Calcule:
- Le second membre, la jacobienne analytique
- Les coefficients de Taylor jusqu'à l'ordre 3 (forme normale de Hopf)
- La borne ultime sur ξ = x + y/e et les conditions de permanence
- Le revenu actualisé le long d'une trajectoire
"""

import logging
from dataclasses import dataclass, asdict

import numpy as np
from scipy.integrate import trapezoid

from errors import InvalidDenominator, EmptyTrajectory
from model.params import ModelParams, EconParams, State

logger = logging.getLogger(__name__)


def denominator(params: ModelParams, x: float, y: float) -> float:
    """
    Dénominateur de la réponse fonctionnelle, 1 + a·x·(1 − m·y).

    Raises:
        InvalidDenominator: si la valeur n'est pas strictement positive
    """
    D = 1.0 + params.a * x * (1.0 - params.m * y)
    if not D > 0:
        raise InvalidDenominator(
            f"1 + a·x·(1 − m·y) = {D:.6g} ≤ 0 en (x={x:.6g}, y={y:.6g}): hors zone de validité"
        )
    return D


def vector_field(params: ModelParams, x: float, y: float) -> tuple:
    """Second membre (F1, F2) sur des flottants bruts (boucle d'intégration)."""
    u = 1.0 - params.m * y
    D = denominator(params, x, y)
    predation = params.p * u * x * y / D
    dx = params.r * x * (1.0 - x / params.k) - predation - params.q1 * params.E1 * x
    dy = params.e * predation - params.d * y - params.q2 * params.E2 * y
    return dx, dy


def rhs(params: ModelParams, state: State) -> tuple:
    """
    Évalue le champ de vecteurs du modèle.

    Args:
        params: paramètres du modèle
        state: état (x, y)

    Returns:
        Tuple (dx/dt, dy/dt)
    """
    return vector_field(params, state.x, state.y)


def jacobian(params: ModelParams, state: State) -> np.ndarray:
    """
    Jacobienne analytique 2×2 en un point quelconque.

    Returns:
        np.ndarray [[J11, J12], [J21, J22]]
    """
    x, y = state.x, state.y
    r, k, p, a, m, e = params.r, params.k, params.p, params.a, params.m, params.e
    u = 1.0 - m * y
    D = denominator(params, x, y)
    D2 = D * D
    coupling = a * x * u * u + 1.0 - 2.0 * m * y

    J11 = r - 2.0 * r * x / k - params.q1 * params.E1 - p * y * u / D2
    J12 = -p * x * coupling / D2
    J21 = e * p * y * u / D2
    J22 = -params.d - params.q2 * params.E2 + e * p * x * coupling / D2
    return np.array([[J11, J12], [J21, J22]])


# ----- Coefficients de Taylor -----

@dataclass(frozen=True)
class TaylorCoefficients:
    """
    Coefficients (1/(i!·j!))·∂^{i+j}F/∂x^i∂y^j au point de développement.

    a_ij pour F1 (proie), b_ij pour F2 (prédateur); a03, b02, b03 complètent
    le développement cubique. delta = a10·b01 − a01·b10.
    """
    a10: float
    a01: float
    a20: float
    a11: float
    a02: float
    a30: float
    a21: float
    a12: float
    b10: float
    b01: float
    b20: float
    b11: float
    b30: float
    b21: float
    b12: float
    a03: float = 0.0
    b02: float = 0.0
    b03: float = 0.0

    @property
    def delta(self) -> float:
        return self.a10 * self.b01 - self.a01 * self.b10

    @property
    def trace(self) -> float:
        return self.a10 + self.b01

    def to_dict(self) -> dict:
        out = asdict(self)
        out['delta'] = self.delta
        return out


def predation_derivatives(params: ModelParams, x: float, y: float) -> dict:
    """
    Dérivées partielles de G = p·y·φ(s), s = x·(1 − m·y), φ(s) = s/(1 + a·s).

    φ' = 1/D², φ'' = −2a/D³, φ''' = 6a²/D⁴.
    """
    p, a, m = params.p, params.a, params.m
    u = 1.0 - m * y
    D = denominator(params, x, y)
    s = u * x
    phi = s / D
    f1 = 1.0 / D ** 2
    f2 = -2.0 * a / D ** 3
    f3 = 6.0 * a * a / D ** 4
    w = u - m * y

    return {
        'x': p * y * u * f1,
        'y': p * phi - p * m * x * y * f1,
        'xx': p * y * u * u * f2,
        'xy': p * w * f1 - p * m * x * y * u * f2,
        'yy': -2.0 * p * m * x * f1 + p * m * m * x * x * y * f2,
        'xxx': p * y * u ** 3 * f3,
        'xxy': p * (u * u - 2.0 * m * y * u) * f2 - p * m * x * y * u * u * f3,
        'xyy': -2.0 * p * m * f1 - 2.0 * p * m * x * w * f2 + p * m * m * x * x * y * u * f3,
        'yyy': 3.0 * p * m * m * x * x * f2 - p * m ** 3 * x ** 3 * y * f3,
    }


def taylor_coefficients(params: ModelParams, expansion_point: State) -> TaylorCoefficients:
    """
    Coefficients de Taylor des deux équations au point de développement.

    Les termes linéaires reprennent exactement la jacobienne; les termes
    d'ordre 2 et 3 sont les dérivées exactes du terme de prédation
    (la croissance logistique ne contribue qu'à a20 = −r/k).

    Args:
        params: paramètres du modèle (m inclus)
        expansion_point: point de développement, typiquement (E*, m_h)

    Returns:
        TaylorCoefficients
    """
    logger.warning("Coefficients a10, a11, a02, b11, b20 recalculés comme dérivées exactes du champ")
    J = jacobian(params, expansion_point)
    G = predation_derivatives(params, expansion_point.x, expansion_point.y)
    e = params.e

    return TaylorCoefficients(
        a10=J[0, 0],
        a01=J[0, 1],
        a20=-params.r / params.k - G['xx'] / 2.0,
        a11=-G['xy'],
        a02=-G['yy'] / 2.0,
        a30=-G['xxx'] / 6.0,
        a21=-G['xxy'] / 2.0,
        a12=-G['xyy'] / 2.0,
        b10=J[1, 0],
        b01=J[1, 1],
        b20=e * G['xx'] / 2.0,
        b11=e * G['xy'],
        b30=e * G['xxx'] / 6.0,
        b21=e * G['xxy'] / 2.0,
        b12=e * G['xyy'] / 2.0,
        a03=-G['yyy'] / 6.0,
        b02=e * G['yy'] / 2.0,
        b03=e * G['yyy'] / 6.0,
    )


# ----- Borne et permanence -----

@dataclass(frozen=True)
class Bound:
    """Borne ultime de ξ = x + y/e: limsup ξ ≤ kappa/zeta."""
    zeta: float
    kappa: float
    ultimate: float


def ultimate_bound(params: ModelParams) -> Bound:
    """
    Calcule zeta = d + q2·E2, kappa = (k/4r)·(r + zeta − q1·E1)² et kappa/zeta.
    """
    zeta = params.d + params.q2 * params.E2
    kappa = params.k / (4.0 * params.r) * (params.r + zeta - params.q1 * params.E1) ** 2
    return Bound(zeta=zeta, kappa=kappa, ultimate=kappa / zeta)


@dataclass(frozen=True)
class PersistenceReport:
    growth_condition: bool
    consumption_condition: bool

    @property
    def permanent(self) -> bool:
        return self.growth_condition and self.consumption_condition


def persistence_check(params: ModelParams) -> PersistenceReport:
    """
    Conditions de permanence par fonction de Lyapunov moyenne.

    - croissance: r > q1·E1 (il existe alors ρ1, ρ2 > 0 convenables)
    - consommation: p > ((d + q2·E2)/e)·(a + 1/(k·(1 − q1·E1/r)))

    La condition de consommation est fausse dès que la croissance échoue.
    """
    growth = params.r > params.q1 * params.E1
    consumption = False
    if growth:
        threshold = (params.predator_loss / params.e) * (
            params.a + 1.0 / (params.k * (1.0 - params.prey_harvest / params.r))
        )
        consumption = params.p > threshold
    return PersistenceReport(growth_condition=bool(growth), consumption_condition=bool(consumption))


def boundary_persistence(params: ModelParams, rho1: float = 1.0, rho2: float = 1.0) -> dict:
    """
    Valeurs de Φ = ρ1·ẋ/x + ρ2·ẏ/y aux deux équilibres de bord.

    Returns:
        Dict avec phi_origin = Φ(0, 0) et phi_axial = Φ(x1, 0)
        (None si l'équilibre axial n'est pas réalisable)
    """
    phi_origin = rho1 * (params.r - params.prey_harvest) - rho2 * params.predator_loss
    phi_axial = None
    x1 = params.k * (1.0 - params.prey_harvest / params.r)
    if x1 > 0:
        phi_axial = rho2 * (params.e * params.p * x1 / (1.0 + params.a * x1) - params.predator_loss)
    return {
        'rho1': rho1,
        'rho2': rho2,
        'phi_origin': phi_origin,
        'phi_axial': phi_axial,
        'x1': x1,
    }


# ----- Revenu actualisé -----

def discounted_revenue(trajectory, params: ModelParams, econ: EconParams) -> float:
    """
    Valeur présente du flux de revenu net le long d'une trajectoire.

    Quadrature trapézoïdale de e^{−δt}·[(p1·q1·x − c1)·E1 + (p2·q2·y − c2)·E2].

    Args:
        trajectory: objet avec times (n,) et states (n, 2)
        params: paramètres (les efforts E1, E2 sont lus ici)
        econ: paramètres économiques

    Returns:
        Revenu actualisé (float)
    """
    times = np.asarray(trajectory.times, dtype=float)
    if times.size == 0:
        raise EmptyTrajectory("Trajectoire vide: aucun revenu à intégrer")
    states = np.asarray(trajectory.states, dtype=float).reshape(-1, 2)

    flow = ((econ.p1 * params.q1 * states[:, 0] - econ.c1) * params.E1
            + (econ.p2 * params.q2 * states[:, 1] - econ.c2) * params.E2)
    integrand = np.exp(-econ.delta * times) * flow
    if times.size == 1:
        return 0.0
    return float(trapezoid(integrand, times))
