"""
model/finite_diff.py - Oracles par différences finies

Sert de référence indépendante pour:
- la jacobienne analytique (différences centrées, pas relatif 1e-6)
- les coefficients de Taylor (stencils centrés tensoriels + extrapolation
  de Richardson)
"""

import numpy as np

from model.params import ModelParams, State
from model.core import vector_field, denominator, TaylorCoefficients


# Stencils centrés 1D (décalage -> poids), erreur O(h²)
_STENCILS = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
}


def fd_jacobian(params: ModelParams, state: State, rel_step: float = 1e-6) -> np.ndarray:
    """
    Jacobienne par différences centrées du champ de vecteurs.

    Pas h = rel_step·max(1, |coordonnée|).
    """
    point = np.array([state.x, state.y], dtype=float)
    J = np.empty((2, 2))
    for j in range(2):
        h = rel_step * max(1.0, abs(point[j]))
        up, down = point.copy(), point.copy()
        up[j] += h
        down[j] -= h
        f_up = np.array(vector_field(params, *up))
        f_down = np.array(vector_field(params, *down))
        J[:, j] = (f_up - f_down) / (2.0 * h)
    return J


def _mixed_partial(params: ModelParams, x: float, y: float, i: int, j: int,
                   hx: float, hy: float) -> np.ndarray:
    """∂^{i+j}F/∂x^i∂y^j par produit tensoriel de stencils (les deux composantes)."""
    total = np.zeros(2)
    for sx, wx in _STENCILS[i].items():
        for sy, wy in _STENCILS[j].items():
            total += wx * wy * np.array(vector_field(params, x + sx * hx, y + sy * hy))
    return total / (hx ** i * hy ** j)


def default_steps(params: ModelParams, state: State) -> tuple:
    """
    Pas de base (hx, hy) adaptés aux échelles de variation du modèle.

    En x: 1% de x. En y, la seule dépendance non polynomiale passe par
    s = x·(1 − m·y); le pas vaut 1% de l'échelle D/(a·m·x).
    """
    x, y = state.x, state.y
    hx = 0.01 * max(abs(x), 1.0)
    D = denominator(params, x, y)
    scale = params.a * params.m * abs(x)
    cap = 10.0 * max(1.0, abs(y))
    hy = min(0.01 * D / scale, cap) if scale > 0 else max(1.0, abs(y))
    return hx, hy


def fd_taylor_coefficients(params: ModelParams, state: State, steps: tuple = None) -> TaylorCoefficients:
    """
    Oracle des coefficients de Taylor: (1/(i!·j!))·∂^{i+j}F/∂x^i∂y^j.

    Chaque dérivée est combinée par Richardson (4·D(h/2) − D(h))/3.

    Args:
        params: paramètres du modèle
        state: point de développement
        steps: pas de base (hx, hy), sinon default_steps

    Returns:
        TaylorCoefficients estimés numériquement
    """
    hx, hy = steps if steps is not None else default_steps(params, state)
    factorial = {0: 1.0, 1: 1.0, 2: 2.0, 3: 6.0}

    def coefficient(i, j):
        coarse = _mixed_partial(params, state.x, state.y, i, j, hx, hy)
        fine = _mixed_partial(params, state.x, state.y, i, j, hx / 2.0, hy / 2.0)
        return (4.0 * fine - coarse) / 3.0 / (factorial[i] * factorial[j])

    orders = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]
    values = {order: coefficient(*order) for order in orders}

    return TaylorCoefficients(
        a10=values[(1, 0)][0], a01=values[(0, 1)][0],
        a20=values[(2, 0)][0], a11=values[(1, 1)][0], a02=values[(0, 2)][0],
        a30=values[(3, 0)][0], a21=values[(2, 1)][0], a12=values[(1, 2)][0],
        b10=values[(1, 0)][1], b01=values[(0, 1)][1],
        b20=values[(2, 0)][1], b11=values[(1, 1)][1],
        b30=values[(3, 0)][1], b21=values[(2, 1)][1], b12=values[(1, 2)][1],
        a03=values[(0, 3)][0], b02=values[(0, 2)][1], b03=values[(0, 3)][1],
    )
