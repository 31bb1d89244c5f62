"""
analysis/newton.py - Newton amorti et multistart

Résout des systèmes non linéaires 2×2:
- pas de Newton complet, puis divisions par deux (jusqu'à 30) tant que
  le résidu ne décroît pas ou que le point est hors domaine
- convergence sur le résidu relatif (≤ 1e-12) ou sur le pas (≤ 1e-13
  relatif) avec un résidu déjà petit
- multistart sur une grille, racines dédupliquées, ordre déterministe
"""

import logging
from dataclasses import dataclass

import numpy as np

from errors import InvalidDenominator, NoConvergence
from parallel import parallel_map

logger = logging.getLogger(__name__)

MAX_ITER = 100
MAX_HALVINGS = 30
RESIDUAL_TOL = 1e-12
STEP_TOL = 1e-13
LOOSE_RESIDUAL_TOL = 1e-10


@dataclass
class NewtonResult:
    root: np.ndarray
    residual: float
    scale: float
    iterations: int

    @property
    def relative_residual(self) -> float:
        return self.residual / self.scale


def fd_jacobian(fun, z: np.ndarray, rel_step: float = 1e-7) -> np.ndarray:
    """Jacobienne par différences centrées d'une fonction résidu."""
    n = len(z)
    J = np.empty((n, n))
    for j in range(n):
        h = rel_step * max(1.0, abs(z[j]))
        up, down = z.copy(), z.copy()
        up[j] += h
        down[j] -= h
        J[:, j] = (fun(up)[0] - fun(down)[0]) / (2.0 * h)
    return J


def _evaluate(fun, z, admissible):
    """Résidu et échelle, ou None si le point sort du domaine."""
    if admissible is not None and not admissible(z):
        return None
    try:
        residual, scale = fun(z)
    except (InvalidDenominator, ZeroDivisionError, FloatingPointError):
        return None
    residual = np.asarray(residual, dtype=float)
    if not np.all(np.isfinite(residual)):
        return None
    return residual, float(scale)


def damped_newton(fun, z0, jac=None, admissible=None) -> NewtonResult:
    """
    Newton amorti depuis z0.

    Args:
        fun: z -> (résidu, échelle); l'échelle sert au critère relatif
        z0: point de départ
        jac: z -> jacobienne (différences finies si absent)
        admissible: z -> bool, domaine de validité des itérés

    Returns:
        NewtonResult

    Raises:
        NoConvergence: départ hors domaine, jacobienne singulière,
            recherche linéaire épuisée ou trop d'itérations
    """
    z = np.array(z0, dtype=float)
    current = _evaluate(fun, z, admissible)
    if current is None:
        raise NoConvergence(f"Point de départ hors domaine: {z}")

    for iteration in range(MAX_ITER + 1):
        residual, scale = current
        norm = np.max(np.abs(residual))
        if norm <= RESIDUAL_TOL * scale:
            return NewtonResult(root=z, residual=norm, scale=scale, iterations=iteration)
        if iteration == MAX_ITER:
            break

        J = jac(z) if jac is not None else fd_jacobian(fun, z)
        try:
            step = np.linalg.solve(J, -residual)
        except np.linalg.LinAlgError:
            raise NoConvergence(f"Jacobienne singulière en {z}")

        lam = 1.0
        accepted = None
        for _ in range(MAX_HALVINGS + 1):
            trial = z + lam * step
            candidate = _evaluate(fun, trial, admissible)
            if candidate is not None and np.max(np.abs(candidate[0])) < norm:
                accepted = (trial, candidate)
                break
            lam *= 0.5

        small_step = np.max(np.abs(step)) <= STEP_TOL * (1.0 + np.max(np.abs(z)))
        if accepted is None or small_step:
            if norm <= LOOSE_RESIDUAL_TOL * scale:
                return NewtonResult(root=z, residual=norm, scale=scale, iterations=iteration)
            if accepted is None:
                raise NoConvergence(f"Recherche linéaire épuisée en {z} (résidu {norm:.3g})")
        z, current = accepted

    raise NoConvergence(f"Pas de convergence en {MAX_ITER} itérations depuis {z0}")


def log_grid(upper_x: float, upper_y: float, n: int = 8) -> list:
    """Grille n×n log-espacée sur [1e-3·X, X] × [1e-3·Y, Y]."""
    xs = np.geomspace(upper_x * 1e-3, upper_x, n)
    ys = np.geomspace(upper_y * 1e-3, upper_y, n)
    return [np.array([x, y]) for x in xs for y in ys]


def dedupe_roots(roots: list, rel_tol: float = 1e-8) -> list:
    """Supprime les doublons et trie par x croissant."""
    unique = []
    for root in sorted(roots, key=lambda z: (z[0], z[1])):
        if not any(np.all(np.abs(root - other) <= rel_tol * (1.0 + np.abs(other))) for other in unique):
            unique.append(root)
    return unique


def multistart(fun, starts: list, jac=None, admissible=None) -> list:
    """
    Lance damped_newton depuis chaque départ.

    Les départs sont indépendants (parallélisables); la sélection se fait
    après coup, donc le résultat ne dépend pas de l'ordre d'exécution.

    Returns:
        Racines distinctes triées par x croissant (liste éventuellement vide)
    """
    def attempt(z0):
        try:
            return damped_newton(fun, z0, jac=jac, admissible=admissible).root
        except NoConvergence:
            return None

    found = [root for root in parallel_map(attempt, starts) if root is not None]
    logger.debug(f"Multistart: {len(found)}/{len(starts)} départs convergés")
    return dedupe_roots(found)
