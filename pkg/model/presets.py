"""
model/presets.py - Jeux de paramètres de référence

Jeux de référence utilisés par la reproduction et les fixtures:
- BASE: famille du seuil de Hopf (m libre)
- TRIV: origine stable (effort de la proie au-delà de r/q1)
- OPT: économie de la politique optimale (m = 0.02)
"""

from model.params import ModelParams, EconParams

BASE = dict(r=3.0, a=0.008, d=0.04, p=0.2, q1=0.2, q2=0.6, E1=2.0, E2=2.0, k=500.0, e=0.15)
TRIV = dict(r=1.0, a=0.04, d=0.5, m=0.5, p=0.2, q1=0.4, q2=0.6, E1=3.0, E2=1.0, k=200.0, e=0.25)
OPT_ECON = dict(p1=2.0, p2=3.0, c1=1.0, c2=2.0, delta=0.004)
OPT_M = 0.02

# (m, x*, y*) de référence, deux décimales
REFUGE_TABLE = (
    (0.010, 77.14, 19.94),
    (0.015, 94.99, 23.33),
    (0.045, 363.40, 18.45),
    (0.060, 383.05, 13.98),
    (0.075, 394.02, 11.24),
    (0.500, 427.82, 1.71),
    (0.800, 429.90, 1.07),
)

HOPF_THRESHOLD = 0.010695
OPTIMAL_POINT = dict(x_opt=188.5858, y_opt=30.6567, e1_opt=1.8534, e2_opt=5.8875)


def base_params(m: float = 0.0) -> ModelParams:
    return ModelParams(m=m, **BASE)


def triv_params() -> ModelParams:
    return ModelParams(**TRIV)


def axial_params() -> ModelParams:
    """Jeu TRIV avec r = 3 et q1 = 0.2: équilibre axial stable."""
    return ModelParams(**{**TRIV, 'r': 3.0, 'q1': 0.2})


def opt_params() -> ModelParams:
    return base_params(OPT_M)


def opt_econ() -> EconParams:
    return EconParams(**OPT_ECON)
