"""
model/params.py - Paramètres biologiques, économiques et état du système

Contient:
- ModelParams: les onze constantes du modèle (croissance, capacité,
  prédation, refuge, mortalité, conversion, capturabilité, efforts)
- EconParams: prix, coûts par unité d'effort, taux d'actualisation
- State: biomasses (x proie, y prédateur)
"""

from dataclasses import dataclass, asdict, replace, fields

from errors import InvalidParameter


MODEL_SYMBOLS = ("r", "k", "p", "a", "m", "d", "e", "q1", "q2", "E1", "E2")
ECON_SYMBOLS = ("p1", "p2", "c1", "c2", "delta")


@dataclass(frozen=True)
class ModelParams:
    """
    Constantes du modèle récolté avec refuge proportionnel aux deux espèces.

    Invariants:
        r, k, p, a, d, q1, q2 > 0; 0 < e < 1; 0 ≤ m ≤ 1; E1, E2 ≥ 0.
    """
    r: float
    k: float
    p: float
    a: float
    m: float
    d: float
    e: float
    q1: float
    q2: float
    E1: float = 0.0
    E2: float = 0.0

    def __post_init__(self):
        for name in ("r", "k", "p", "a", "d", "q1", "q2"):
            if not getattr(self, name) > 0:
                raise InvalidParameter(f"{name} doit être strictement positif (reçu {getattr(self, name)})")
        if not 0 < self.e < 1:
            raise InvalidParameter(f"e doit être dans ]0, 1[ (reçu {self.e})")
        if not 0 <= self.m <= 1:
            raise InvalidParameter(f"m doit être dans [0, 1] (reçu {self.m})")
        for name in ("E1", "E2"):
            if not getattr(self, name) >= 0:
                raise InvalidParameter(f"{name} doit être ≥ 0 (reçu {getattr(self, name)})")

    @property
    def predator_loss(self) -> float:
        """d + q2·E2, taux de perte total du prédateur."""
        return self.d + self.q2 * self.E2

    @property
    def prey_harvest(self) -> float:
        """q1·E1, taux de prélèvement de la proie."""
        return self.q1 * self.E1

    def with_(self, **changes) -> "ModelParams":
        """Copie avec certains symboles remplacés (re-validée)."""
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "ModelParams":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidParameter(f"Symboles inconnus: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in values.items()})


@dataclass(frozen=True)
class EconParams:
    """Prix p1, p2; coûts c1, c2 (> 0); taux d'actualisation delta (≥ 0)."""
    p1: float
    p2: float
    c1: float
    c2: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "c1", "c2"):
            if not getattr(self, name) > 0:
                raise InvalidParameter(f"{name} doit être strictement positif (reçu {getattr(self, name)})")
        if not self.delta >= 0:
            raise InvalidParameter(f"delta doit être ≥ 0 (reçu {self.delta})")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class State:
    """Biomasses de la proie (x) et du prédateur (y)."""
    x: float
    y: float

    def as_tuple(self) -> tuple:
        return (self.x, self.y)

    def norm_inf(self) -> float:
        return max(abs(self.x), abs(self.y))
