"""
errors.py - Hiérarchie des erreurs du modèle proie-prédateur avec refuge

Toutes les erreurs de domaine dérivent de RefugeModelError et restent
attrapables comme ValueError ou ArithmeticError.
Le CLI traduit:
- ConfigError -> code de sortie 2
- toute autre RefugeModelError -> code de sortie 3
"""


class RefugeModelError(Exception):
    """Erreur de base du modèle."""


# ----- Paramètres et états -----

class InvalidParameter(RefugeModelError, ValueError):
    """Un paramètre viole ses invariants (signe, intervalle)."""


class InvalidState(RefugeModelError, ValueError):
    """État initial négatif ou non admissible."""


class InvalidDenominator(RefugeModelError, ArithmeticError):
    """1 + a·x·(1 − m·y) ≤ 0: l'état a quitté la zone de validité du modèle."""


# ----- Équilibres et stabilité -----

class Infeasible(RefugeModelError, ValueError):
    """Équilibre non réalisable (ex: r ≤ q1·E1 pour l'équilibre axial)."""


class WrongKind(RefugeModelError, ValueError):
    """Opération réservée à un autre type d'équilibre."""


class NoPositiveRoot(RefugeModelError, ArithmeticError):
    """Des racines existent mais aucune dans le quadrant positif ouvert."""


class NoConvergence(RefugeModelError, ArithmeticError):
    """Newton n'a convergé depuis aucun point de départ."""


# ----- Bifurcations -----

class DoubleZeroEigenvalue(RefugeModelError, ValueError):
    """Les deux valeurs propres de J1 s'annulent en r_tc."""


class NoInteriorBranch(RefugeModelError, ValueError):
    """Aucun équilibre intérieur sur toute la plage de m balayée."""


class NotAtHopfPoint(RefugeModelError, ValueError):
    """La trace de J* n'est pas nulle au point fourni."""


class NegativeDelta(RefugeModelError, ValueError):
    """Δ = a10·b01 − a01·b10 ≤ 0: nombre de Lyapunov indéfini."""


# ----- Économie -----

class ZeroBiomass(RefugeModelError, ValueError):
    """Biomasse nulle ou négative là où un prix fictif est requis."""


class NegativeEffort(RefugeModelError, ValueError):
    """La politique optimale existe mais un effort est négatif."""

    def __init__(self, message: str, policy=None):
        super().__init__(message)
        self.policy = policy


# ----- Simulation -----

class StepFailure(RefugeModelError, ArithmeticError):
    """Pas d'intégration trop petit; la trajectoire partielle est jointe."""

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class EmptyTrajectory(RefugeModelError, ValueError):
    """Trajectoire vide."""


class TooShort(RefugeModelError, ValueError):
    """Trajectoire trop courte pour l'analyse post-transitoire."""


# ----- Configuration -----

class ConfigError(RefugeModelError, ValueError):
    """Erreur de configuration (code de sortie 2)."""


class ParseError(ConfigError):
    """Texte de configuration illisible (ligne / champ en contexte)."""


class UnknownKey(ConfigError):
    """Clé inconnue dans la configuration."""


class MissingSymbol(ConfigError):
    """Symbole requis absent pour la commande choisie."""


# ----- Vérifications -----

class CheckFailure(RefugeModelError, ArithmeticError):
    """Une suite de propriétés ou un élément de reproduction a échoué."""
