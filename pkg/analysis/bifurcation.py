"""
analysis/bifurcation.py - Bifurcations transcritique et de Hopf

Calcule:
- les quantités de Sotomayor en r_tc = q1·E1 (équilibre axial)
- le seuil de Hopf m_h (trace de J* nulle) par balayage en continuation
  et raffinement de Brent
- la transversalité d(trace)/dm par différence finie avec ré-résolution
- le premier nombre de Lyapunov σ à partir des coefficients de Taylor
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from errors import (DoubleZeroEigenvalue, NoInteriorBranch, NotAtHopfPoint, NegativeDelta,
                    NoConvergence, NoPositiveRoot, InvalidParameter)
from model.params import ModelParams, State
from model.core import jacobian, taylor_coefficients, TaylorCoefficients, predation_derivatives
from analysis.equilibria import interior_equilibrium

logger = logging.getLogger(__name__)

SOTOMAYOR_TOL = 1e-10
SIGMA_TOL = 1e-12
TRACE_TOL = 1e-8


# ----- Transcritique -----

@dataclass
class TranscriticalReport:
    r_tc: float
    v: tuple
    w: tuple
    s1: float
    s2: float
    s3: float
    confirmed: bool

    def to_dict(self) -> dict:
        return {
            'r_tc': self.r_tc, 'v': list(self.v), 'w': list(self.w),
            's1': self.s1, 's2': self.s2, 's3': self.s3, 'confirmed': self.confirmed,
        }


def transcritical_check(params: ModelParams) -> TranscriticalReport:
    """
    Conditions de Sotomayor pour la bifurcation transcritique en r = q1·E1.

    En r_tc l'équilibre axial x1 = k·(1 − q1·E1/r_tc) rejoint l'origine.
    v = (1, 0), w = (1, p·x1/(e·p·x1 − (1 + a·x1)·(d + q2·E2))).

    Returns:
        TranscriticalReport avec s1 = w·F_r, s2 = w·[DF_r·v], s3 = w·[D²F(v, v)]

    Raises:
        DoubleZeroEigenvalue: si la seconde valeur propre de J1 s'annule aussi
    """
    r_tc = params.prey_harvest
    x1 = params.k * (1.0 - params.prey_harvest / r_tc) if r_tc > 0 else 0.0
    c = params.predator_loss

    lam2 = -c + params.e * params.p * x1 / (1.0 + params.a * x1)
    if abs(lam2) <= 1e-12 * max(1.0, c):
        raise DoubleZeroEigenvalue(f"Valeurs propres de J1 toutes deux nulles en r_tc = {r_tc:.6g}")

    v = (1.0, 0.0)
    w = (1.0, params.p * x1 / (params.e * params.p * x1 - (1.0 + params.a * x1) * c))

    # F_r = (x·(1 − x/k), 0); DF_r = [[1 − 2x/k, 0], [0, 0]]
    s1 = w[0] * x1 * (1.0 - x1 / params.k)
    s2 = w[0] * (1.0 - 2.0 * x1 / params.k) * v[0]
    G = predation_derivatives(params, x1, 0.0)
    a20 = -r_tc / params.k - G['xx'] / 2.0
    b20 = params.e * G['xx'] / 2.0
    s3 = 2.0 * (w[0] * a20 + w[1] * b20)

    confirmed = abs(s1) <= SOTOMAYOR_TOL and abs(s2) > SOTOMAYOR_TOL and abs(s3) > SOTOMAYOR_TOL
    return TranscriticalReport(r_tc=r_tc, v=v, w=w, s1=s1, s2=s2, s3=s3, confirmed=bool(confirmed))


# ----- Premier nombre de Lyapunov -----

def _lyapunov_terms(c: TaylorCoefficients, complete: bool) -> tuple:
    """
    Termes du crochet de σ (notations a = a10, b = a01, c = b10).

    Forme réduite: les termes en a02, b02, b03 sont omis.
    """
    A, B, C = c.a10, c.a01, c.b10
    if complete:
        first = [
            A * C * (c.a11 ** 2 + c.a11 * c.b02 + c.a02 * c.b11),
            A * B * (c.b11 ** 2 + c.a20 * c.b11 + c.a11 * c.b02),
            C * C * (c.a11 * c.a02 + 2.0 * c.a02 * c.b02),
            -2.0 * A * C * (c.b02 ** 2 - c.a20 * c.a02),
            -2.0 * A * B * (c.a20 ** 2 - c.b20 * c.b02),
            -B * B * (2.0 * c.a20 * c.b20 + c.b11 * c.b20),
            (B * C - 2.0 * A * A) * (c.b11 * c.b02 - c.a11 * c.a20),
        ]
        inner = 3.0 * (C * c.b03 - B * c.a30) + 2.0 * A * (c.a21 + c.b12) + (C * c.a12 - B * c.b21)
    else:
        first = [
            A * C * c.a11 ** 2,
            A * B * (c.b11 ** 2 + c.a20 * c.b11),
            -2.0 * A * B * c.a20 ** 2,
            -B * B * (2.0 * c.a20 * c.b20 + c.b11 * c.b20),
            -c.a11 * c.a20 * (B * C - 2.0 * A * A),
        ]
        inner = -3.0 * B * c.a30 + 2.0 * A * (c.a21 + c.b12) + (C * c.a12 - B * c.b21)
    return first + [-(A * A + B * C) * inner]


def first_lyapunov_number(coefficients: TaylorCoefficients, complete: bool = False) -> tuple:
    """
    Premier nombre de Lyapunov σ = −3π/(2·a01·Δ^{3/2})·[...].

    Args:
        coefficients: coefficients de Taylor au point de Hopf
        complete: inclure les termes en a02, b02, b03 de la formule plane générale

    Returns:
        Tuple (sigma, degenerate) où degenerate signale un crochet sous le
        bruit d'arrondi (1e-12 de l'échelle de ses termes)

    Raises:
        NegativeDelta: si Δ = a10·b01 − a01·b10 ≤ 0
        NotAtHopfPoint: si a01 = 0
    """
    delta = coefficients.delta
    if not delta > 0:
        raise NegativeDelta(f"Δ = {delta:.6g} ≤ 0: σ indéfini")
    if coefficients.a01 == 0:
        raise NotAtHopfPoint("a01 nul: le point n'est pas un point de Hopf")

    if not complete:
        logger.warning("σ: préfacteur en a01 et premier terme a10·b10·a11² (crochet réduit corrigé)")
    terms = _lyapunov_terms(coefficients, complete)
    bracket = math.fsum(terms)
    scale = math.fsum(abs(t) for t in terms)
    sigma = -3.0 * math.pi / (2.0 * coefficients.a01 * delta ** 1.5) * bracket
    degenerate = abs(bracket) <= SIGMA_TOL * scale
    return sigma, bool(degenerate)


def verdict_from_sigma(sigma: float, degenerate: bool = False) -> str:
    if degenerate or abs(sigma) <= SIGMA_TOL:
        return "Degenerate"
    return "Supercritical" if sigma < 0 else "Subcritical"


# ----- Hopf -----

@dataclass
class HopfResult:
    m_h: float
    det_at_mh: float
    transversality: float
    sigma: float
    verdict: str
    equilibrium_at_mh: State
    trace_at_mh: float = 0.0
    sigma_complete: Optional[float] = None
    closed_form_transversality: Optional[float] = None
    coefficients: Optional[TaylorCoefficients] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            'm_h': self.m_h,
            'det_at_mh': self.det_at_mh,
            'trace_at_mh': self.trace_at_mh,
            'transversality': self.transversality,
            'closed_form_transversality': self.closed_form_transversality,
            'sigma': self.sigma,
            'sigma_complete': self.sigma_complete,
            'verdict': self.verdict,
            'x_m': self.equilibrium_at_mh.x,
            'y_m': self.equilibrium_at_mh.y,
        }


def _trace_at(params: ModelParams, m: float, guess: Optional[State] = None) -> tuple:
    """Trace et déterminant de J* en m (équilibre ré-résolu)."""
    pm = params.with_(m=m)
    eq = interior_equilibrium(pm, guess=guess)
    J = jacobian(pm, eq.point)
    return float(J[0, 0] + J[1, 1]), float(np.linalg.det(J)), eq, J


def closed_form_transversality(params: ModelParams, state: State) -> float:
    """
    Expression fermée de d(trace)/dm (contrôle croisé informatif).

    p·y·(2·a·e·x² − a·m·x·y² + a·x·y + 2·e·x − y)/(1 + a·x·(1 − m·y))³
    """
    x, y = state.x, state.y
    p, a, m, e = params.p, params.a, params.m, params.e
    num = p * y * (2.0 * a * e * x * x - a * m * x * y * y + a * x * y + 2.0 * e * x - y)
    return num / (1.0 + a * x * (1.0 - m * y)) ** 3


def transversality(params_without_m: ModelParams, m_h: float, h: float = 1e-6,
                   scheme: str = "central", guess: Optional[State] = None) -> float:
    """
    d(trace J*)/dm en m_h par différence finie, équilibre ré-résolu de chaque côté.

    Args:
        params_without_m: paramètres (m ignoré)
        m_h: valeur de m
        h: pas
        scheme: "central" ou "forward"
        guess: point de départ pour la continuation

    Returns:
        Dérivée de la trace
    """
    if scheme == "central":
        plus = _trace_at(params_without_m, m_h + h, guess)[0]
        minus = _trace_at(params_without_m, m_h - h, guess)[0]
        return (plus - minus) / (2.0 * h)
    if scheme == "forward":
        plus = _trace_at(params_without_m, m_h + h, guess)[0]
        here = _trace_at(params_without_m, m_h, guess)[0]
        return (plus - here) / h
    raise ValueError(f"Schéma inconnu: {scheme}")


def lyapunov_number(params_without_m: ModelParams, m_h: float, guess: Optional[State] = None) -> HopfResult:
    """
    Complète un seuil m_h en HopfResult: σ, verdict, transversalité.

    Args:
        params_without_m: paramètres (m remplacé par m_h)
        m_h: seuil de Hopf
        guess: point de départ de l'équilibre

    Returns:
        HopfResult

    Raises:
        NotAtHopfPoint: |trace| > 1e-8·échelle
        NegativeDelta: Δ ≤ 0
    """
    trace, det, eq, J = _trace_at(params_without_m, m_h, guess)
    scale = max(1.0, float(np.max(np.abs(J))))
    if abs(trace) > TRACE_TOL * scale:
        raise NotAtHopfPoint(f"trace(J*) = {trace:.3g} en m = {m_h:.9g}: pas un point de Hopf")

    pm = params_without_m.with_(m=m_h)
    coeffs = taylor_coefficients(pm, eq.point)
    sigma, degenerate = first_lyapunov_number(coeffs)
    sigma_complete, _ = first_lyapunov_number(coeffs, complete=True)

    return HopfResult(
        m_h=m_h,
        det_at_mh=det,
        transversality=transversality(params_without_m, m_h, guess=eq.point),
        sigma=sigma,
        verdict=verdict_from_sigma(sigma, degenerate),
        equilibrium_at_mh=eq.point,
        trace_at_mh=trace,
        sigma_complete=sigma_complete,
        closed_form_transversality=closed_form_transversality(pm, eq.point),
        coefficients=coeffs,
    )


def hopf_scan(params_without_m: ModelParams, m_lo: float, m_hi: float, grid_points: int) -> list:
    """
    Recherche des seuils de Hopf en m sur [m_lo, m_hi].

    Balayage en continuation (la solution précédente amorce la suivante),
    changements de signe de la trace raffinés par Brent, candidats de
    déterminant ≤ 0 écartés.

    Args:
        params_without_m: paramètres (m ignoré)
        m_lo, m_hi: bornes dans [0, 1]
        grid_points: nombre de points (≥ 2)

    Returns:
        Liste de HopfResult triée par m croissant

    Raises:
        NoInteriorBranch: aucun équilibre intérieur sur la plage
    """
    if not (0.0 <= m_lo < m_hi <= 1.0):
        raise InvalidParameter(f"Plage de m invalide: [{m_lo}, {m_hi}]")
    if grid_points < 2:
        raise InvalidParameter(f"grid_points doit être ≥ 2 (reçu {grid_points})")

    grid = np.linspace(m_lo, m_hi, grid_points)
    branch = []
    guess = None
    for m in grid:
        try:
            trace, det, eq, _ = _trace_at(params_without_m, float(m), guess)
            branch.append((float(m), trace, eq.point))
            guess = eq.point
        except (NoConvergence, NoPositiveRoot) as exc:
            logger.info(f"m = {m:.6g}: pas d'équilibre intérieur ({exc})")
            branch.append((float(m), None, None))
            guess = None

    if all(trace is None for _, trace, _ in branch):
        raise NoInteriorBranch(f"Aucun équilibre intérieur sur [{m_lo}, {m_hi}]")

    roots = []
    for (m0, t0, z0), (m1, t1, _) in zip(branch, branch[1:]):
        if t0 is None or t1 is None:
            continue
        if t0 == 0.0:
            roots.append((m0, z0))
        elif t0 * t1 < 0:
            try:
                m_root = brentq(lambda m: _trace_at(params_without_m, m, z0)[0], m0, m1,
                                xtol=1e-13, rtol=4 * np.finfo(float).eps)
            except (NoConvergence, NoPositiveRoot) as exc:
                logger.info(f"Changement de signe sur [{m0:.6g}, {m1:.6g}] ignoré: {exc}")
                continue
            roots.append((m_root, z0))
    last_m, last_t, last_z = branch[-1]
    if last_t == 0.0:
        roots.append((last_m, last_z))

    results = []
    for m_root, seed in roots:
        try:
            trace, det, eq, _ = _trace_at(params_without_m, m_root, seed)
        except (NoConvergence, NoPositiveRoot) as exc:
            logger.info(f"Candidat de Hopf en m = {m_root:.9g} ignoré: {exc}")
            continue
        if det <= 0:
            logger.warning(f"Candidat de Hopf écarté en m = {m_root:.9g}: det = {det:.3g} ≤ 0")
            continue
        results.append(lyapunov_number(params_without_m, m_root, guess=eq.point))
    return results
