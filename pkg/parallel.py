"""
parallel.py - Exécution parallèle bornée

La variable d'environnement BIOECO_THREADS plafonne le nombre de threads
(défaut 1 = exécution série). L'ordre des résultats suit toujours l'ordre
des entrées.
"""

import os
import logging
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)


def worker_count() -> int:
    """Nombre de threads autorisés (BIOECO_THREADS, minimum 1)."""
    raw = os.environ.get("BIOECO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"BIOECO_THREADS invalide ({raw!r}), exécution série")
        return 1


def parallel_map(fn, items) -> list:
    """
    Applique fn à chaque élément, en parallèle si BIOECO_THREADS > 1.

    Returns:
        Liste des résultats dans l'ordre des entrées
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
