"""
sim/sweep.py - Balayage du refuge et vérification de la borne

Contient:
- sweep_refuge: équilibre intérieur et classification pour chaque m
  (continuation: la racine précédente sert de point de départ)
- refuge_trajectories: états terminaux depuis un état initial commun
- verify_bound: ξ = x + y/e reste sous max(borne ultime, ξ(0))
"""

import logging

import numpy as np
import pandas as pd

from errors import NoConvergence, NoPositiveRoot, InvalidDenominator, StepFailure
from model.params import ModelParams, State
from model.core import ultimate_bound
from analysis.equilibria import interior_equilibrium
from analysis.stability import classify
from parallel import parallel_map
from sim.integrate import integrate, SimConfig
from sim.cycles import detect_limit_cycle

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['m', 'x_star', 'y_star', 'classification']

ABSENT = "Absent"


def sweep_refuge(params_without_m: ModelParams, m_values: list) -> pd.DataFrame:
    """
    Équilibre intérieur en fonction du refuge m.

    Les valeurs sont traitées dans l'ordre fourni, en continuation série.
    Un m sans équilibre intérieur donne une ligne marquée Absent.

    Args:
        params_without_m: paramètres (m ignoré)
        m_values: valeurs de m dans [0, 1]

    Returns:
        DataFrame: m, x_star, y_star, classification
    """
    rows = []
    guess = None
    for m in m_values:
        params = params_without_m.with_(m=float(m))
        try:
            eq = interior_equilibrium(params, guess=guess)
        except (NoConvergence, NoPositiveRoot, InvalidDenominator) as exc:
            logger.info(f"m={m:.6g}: pas d'équilibre intérieur ({exc})")
            rows.append({'m': float(m), 'x_star': np.nan, 'y_star': np.nan, 'classification': ABSENT})
            guess = None
            continue

        report = classify(params, eq)
        rows.append({
            'm': float(m),
            'x_star': eq.point.x,
            'y_star': eq.point.y,
            'classification': report.classification,
        })
        guess = eq.point

    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def verify_bound(traj) -> bool:
    """
    Vrai si ξ(t) ≤ max(borne ultime, ξ(0)) + 1e-6·(1 + borne ultime) partout.
    """
    if len(traj.times) == 0:
        return True
    ultimate = ultimate_bound(traj.params_used).ultimate
    xi = traj.xi()
    limit = max(ultimate, float(xi[0])) + 1e-6 * (1.0 + ultimate)
    return bool(np.all(xi <= limit))


def refuge_trajectories(params_without_m: ModelParams, m_values: list,
                        initial: State, config: SimConfig) -> pd.DataFrame:
    """
    États terminaux depuis un état initial commun, pour chaque m.

    Chaque m est intégré indépendamment (parallélisable, ordre des
    lignes = ordre des m).

    Returns:
        DataFrame: m, x_end, y_end, y_max, verdict, valid
    """
    def run_one(m):
        params = params_without_m.with_(m=float(m))
        try:
            traj = integrate(params, initial, config)
        except (StepFailure, InvalidDenominator) as exc:
            logger.warning(f"m={m:.6g}: intégration interrompue ({exc})")
            return {'m': float(m), 'x_end': np.nan, 'y_end': np.nan, 'y_max': np.nan,
                    'verdict': "Failed", 'valid': False}
        verdict = detect_limit_cycle(traj, config).verdict
        end = traj.final_state
        return {
            'm': float(m),
            'x_end': end.x,
            'y_end': end.y,
            'y_max': float(traj.states[:, 1].max()),
            'verdict': verdict,
            'valid': traj.all_valid,
        }

    rows = parallel_map(run_one, list(m_values))
    return pd.DataFrame(rows, columns=['m', 'x_end', 'y_end', 'y_max', 'verdict', 'valid'])
