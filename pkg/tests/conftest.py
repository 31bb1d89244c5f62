"""
tests/conftest.py - Fixtures partagées

Jeux de paramètres de référence et chemin des fixtures de configuration.
"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from model.presets import base_params, triv_params, opt_params, opt_econ  # noqa: E402


@pytest.fixture
def p_base():
    """Famille du seuil de Hopf; m à fixer par with_(m=...)."""
    return base_params()


@pytest.fixture
def p_triv():
    return triv_params()


@pytest.fixture
def p_opt():
    return opt_params()


@pytest.fixture
def econ_opt():
    return opt_econ()


@pytest.fixture
def fixture_path():
    def resolve(name):
        return os.path.join(ROOT, "fixtures", name)
    return resolve
