"""
sim/integrate.py - Intégration temporelle adaptative du modèle

Paire emboîtée de Dormand-Prince 5(4) avec contrôle de pas
proportionnel-intégral. Chaque pas accepté est échantillonné, avec un
pas maximal garantissant au moins 20 points par période d'oscillation
linéaire à l'état initial.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from errors import InvalidParameter, InvalidState, InvalidDenominator, StepFailure
from model.params import ModelParams, State
from model.core import vector_field, denominator, jacobian

logger = logging.getLogger(__name__)

# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_ERR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

SAFETY = 0.9
PI_BETA = 0.04
PI_ALPHA = 0.2 - 0.75 * PI_BETA
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0


@dataclass(frozen=True)
class SimConfig:
    """
    Horizon et tolérances d'intégration.

    Invariants:
        t_end > 0; rel_tol, abs_tol > 0; 0 ≤ transient_fraction < 1.
    """
    t_end: float
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    max_step: Optional[float] = None
    transient_fraction: float = 0.5

    def __post_init__(self):
        if not self.t_end > 0:
            raise InvalidParameter(f"t_end doit être strictement positif (reçu {self.t_end})")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise InvalidParameter(f"Tolérances invalides (rel={self.rel_tol}, abs={self.abs_tol})")
        if self.max_step is not None and not self.max_step > 0:
            raise InvalidParameter(f"max_step doit être strictement positif (reçu {self.max_step})")
        if not 0 <= self.transient_fraction < 1:
            raise InvalidParameter(f"transient_fraction doit être dans [0, 1[ (reçu {self.transient_fraction})")

    def to_dict(self) -> dict:
        return {
            't_end': self.t_end,
            'rel_tol': self.rel_tol,
            'abs_tol': self.abs_tol,
            'max_step': self.max_step,
            'transient_fraction': self.transient_fraction,
        }


@dataclass
class Trajectory:
    """
    Trajectoire échantillonnée aux pas acceptés.

    validity: dénominateur 1 + a·x·(1 − m·y) strictement positif
    refuge_ok: 1 − m·y ≥ 0 (fraction exposée non négative)
    """
    times: np.ndarray
    states: np.ndarray
    validity: np.ndarray
    refuge_ok: np.ndarray
    params_used: ModelParams
    notes: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_state(self) -> State:
        return State(float(self.states[-1, 0]), float(self.states[-1, 1]))

    @property
    def all_valid(self) -> bool:
        return bool(np.all(self.validity))

    def xi(self) -> np.ndarray:
        """ξ = x + y/e le long de la trajectoire."""
        return self.states[:, 0] + self.states[:, 1] / self.params_used.e

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            't': self.times,
            'x': self.states[:, 0],
            'y': self.states[:, 1],
            'valid': self.validity,
        })


def default_max_step(params: ModelParams, initial: State, t_end: float) -> float:
    """min(t_end/200, 2π/(20·ρ)), ρ rayon spectral de la jacobienne initiale."""
    cap = t_end / 200.0
    rho = float(np.max(np.abs(np.linalg.eigvals(jacobian(params, initial)))))
    if rho > 0:
        cap = min(cap, 2.0 * math.pi / (20.0 * rho))
    return cap


def _dp_step(params: ModelParams, x: float, y: float, h: float, k1: tuple) -> tuple:
    """
    Un pas de Dormand-Prince depuis (x, y).

    Returns:
        Tuple (x5, y5, err_x, err_y, k7) où k7 est la dérivée au nouveau point
    """
    ks = [k1]
    for row in _A[1:]:
        sx = x + h * sum(coef * k[0] for coef, k in zip(row, ks))
        sy = y + h * sum(coef * k[1] for coef, k in zip(row, ks))
        ks.append(vector_field(params, sx, sy))
    # la dernière ligne de _A est la solution d'ordre 5 (FSAL)
    x5 = x + h * sum(coef * k[0] for coef, k in zip(_A[6], ks))
    y5 = y + h * sum(coef * k[1] for coef, k in zip(_A[6], ks))
    err_x = h * sum(coef * k[0] for coef, k in zip(_ERR, ks))
    err_y = h * sum(coef * k[1] for coef, k in zip(_ERR, ks))
    return x5, y5, err_x, err_y, ks[6]


def _flags(params: ModelParams, x: float, y: float) -> tuple:
    u = 1.0 - params.m * y
    return 1.0 + params.a * x * u > 0, u >= 0


def _build(params, times, xs, ys, valid, refuge, notes=None) -> Trajectory:
    return Trajectory(
        times=np.asarray(times, dtype=float),
        states=np.column_stack([xs, ys]) if times else np.empty((0, 2)),
        validity=np.asarray(valid, dtype=bool),
        refuge_ok=np.asarray(refuge, dtype=bool),
        params_used=params,
        notes=notes or {},
    )


def integrate(params: ModelParams, initial: State, config: SimConfig) -> Trajectory:
    """
    Intègre le modèle de t = 0 à t_end.

    Args:
        params: paramètres du modèle
        initial: état initial (x0, y0) ≥ 0
        config: horizon et tolérances

    Returns:
        Trajectory (un échantillon par pas accepté)

    Raises:
        InvalidState: composante initiale négative
        InvalidDenominator: dénominateur non positif à l'état initial
        StepFailure: pas devenu négligeable (trajectoire partielle jointe)
    """
    if initial.x < 0 or initial.y < 0:
        raise InvalidState(f"État initial négatif: ({initial.x}, {initial.y})")
    denominator(params, initial.x, initial.y)

    t_end = config.t_end
    h_max = config.max_step if config.max_step is not None else default_max_step(params, initial, t_end)

    t, x, y = 0.0, float(initial.x), float(initial.y)
    f = vector_field(params, x, y)
    ratio = max(abs(f[0]), abs(f[1])) / max(abs(x), abs(y), 1.0)
    h = min(h_max, 1e-3 * t_end / max(1.0, ratio))

    times, xs, ys = [t], [x], [y]
    valid0, refuge0 = _flags(params, x, y)
    valid, refuge = [valid0], [refuge0]
    err_prev = 1e-4
    rejected = 0

    while t < t_end:
        h = min(h, h_max, t_end - t)
        if h <= 16.0 * np.finfo(float).eps * max(1.0, abs(t)):
            partial = _build(params, times, xs, ys, valid, refuge, {'rejected_steps': rejected})
            raise StepFailure(f"Pas d'intégration négligeable en t = {t:.6g} ({x:.6g}, {y:.6g})",
                              trajectory=partial)

        try:
            x5, y5, ex, ey, f_new = _dp_step(params, x, y, h, f)
        except InvalidDenominator:
            rejected += 1
            h *= 0.5
            continue

        sx = config.abs_tol + config.rel_tol * max(abs(x), abs(x5))
        sy = config.abs_tol + config.rel_tol * max(abs(y), abs(y5))
        err = math.sqrt(((ex / sx) ** 2 + (ey / sy) ** 2) / 2.0)

        if err <= 1.0:
            t = t_end if t_end - t - h <= 1e-12 * t_end else t + h
            x, y, f = x5, y5, f_new
            times.append(t)
            xs.append(x)
            ys.append(y)
            flag_valid, flag_refuge = _flags(params, x, y)
            valid.append(flag_valid)
            refuge.append(flag_refuge)

            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = SAFETY * err ** (-PI_ALPHA) * err_prev ** PI_BETA
            h *= min(MAX_FACTOR, max(MIN_FACTOR, factor))
            err_prev = max(err, 1e-4)
        else:
            rejected += 1
            h *= max(MIN_FACTOR, SAFETY * err ** (-PI_ALPHA))

    traj = _build(params, times, xs, ys, valid, refuge, {'rejected_steps': rejected, 'max_step': h_max})
    if not traj.all_valid:
        logger.warning(f"Trajectoire hors zone de validité sur {int((~traj.validity).sum())} échantillon(s)")
    logger.debug(f"Intégration: {len(traj)} pas acceptés, {rejected} rejetés")
    return traj
