"""
config_loader.py - Chargement et validation des configurations d'exécution

Ce module gère:
- La lecture d'un fichier JSON de configuration (UTF-8)
- Les surcharges --set (chemin pointé ou symbole nu du modèle)
- La validation: clés inconnues, symboles requis par commande, types
- L'écho résolu (to_dict) qui se relit en une configuration identique
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

from errors import ParseError, UnknownKey, MissingSymbol, InvalidParameter
from model.params import ModelParams, EconParams, State, MODEL_SYMBOLS, ECON_SYMBOLS
from sim.integrate import SimConfig

logger = logging.getLogger(__name__)

COMMANDS = ("equilibria", "stability", "simulate", "hopf", "bionomic", "optimal",
            "sweep", "check", "reproduce")
FORMATS = ("csv", "json", "text")

SIM_DEFAULTS = {
    't_end': 1000.0,
    'rel_tol': 1e-9,
    'abs_tol': 1e-9,
    'max_step': None,
    'transient_fraction': 0.5,
    'initial': None,
}
HOPF_DEFAULTS = {'m_lo': 0.001, 'm_hi': 0.02, 'grid_points': 40}
SWEEP_DEFAULTS = {'m_values': [], 'initial': None}
CHECK_DEFAULTS = {'seed': 0, 'scale': 1.0}
OUTPUT_DEFAULTS = {'path': None, 'format': 'csv'}
REFERENCE_KEYS = ("x_opt", "y_opt", "e1_opt", "e2_opt")

BLOCKS = ("command", "model", "econ", "sim", "hopf", "sweep", "check", "reference", "output")


def required_symbols(command: str) -> tuple:
    """Symboles du modèle obligatoires pour une commande."""
    if command in ("hopf", "sweep"):
        return tuple(s for s in MODEL_SYMBOLS if s != "m")
    if command in ("bionomic", "optimal"):
        return tuple(s for s in MODEL_SYMBOLS if s not in ("E1", "E2"))
    if command in ("check", "reproduce"):
        return ()
    return MODEL_SYMBOLS


@dataclass
class RunConfig:
    command: str
    model: dict = field(default_factory=dict)
    econ: Optional[dict] = None
    sim: dict = field(default_factory=lambda: dict(SIM_DEFAULTS))
    hopf: dict = field(default_factory=lambda: dict(HOPF_DEFAULTS))
    sweep: dict = field(default_factory=lambda: dict(SWEEP_DEFAULTS))
    check: dict = field(default_factory=lambda: dict(CHECK_DEFAULTS))
    reference: Optional[dict] = None
    output: dict = field(default_factory=lambda: dict(OUTPUT_DEFAULTS))

    def model_params(self) -> ModelParams:
        """ModelParams; m absent vaut 0, E1/E2 absents valent 0."""
        values = {'m': 0.0, 'E1': 0.0, 'E2': 0.0}
        values.update(self.model)
        return ModelParams.from_dict(values)

    def econ_params(self) -> Optional[EconParams]:
        if self.econ is None:
            return None
        return EconParams(**self.econ)

    def sim_config(self) -> SimConfig:
        return SimConfig(**{k: v for k, v in self.sim.items() if k != 'initial'})

    def initial_state(self) -> Optional[State]:
        initial = self.sim.get('initial')
        return State(float(initial[0]), float(initial[1])) if initial is not None else None

    def to_dict(self) -> dict:
        """Écho complet, valeurs par défaut incluses."""
        return {
            'command': self.command,
            'model': dict(self.model),
            'econ': dict(self.econ) if self.econ is not None else None,
            'sim': {k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in self.sim.items()},
            'hopf': dict(self.hopf),
            'sweep': {k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in self.sweep.items()},
            'check': dict(self.check),
            'reference': dict(self.reference) if self.reference is not None else None,
            'output': dict(self.output),
        }


# ----- Validation -----

def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: nombre attendu (reçu {value!r})")
    return float(value)


def _pair(value, where: str) -> Optional[list]:
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ParseError(f"{where}: paire [x, y] attendue (reçu {value!r})")
    return [_number(value[0], f"{where}[0]"), _number(value[1], f"{where}[1]")]


def _block(data: dict, name: str, defaults: dict) -> dict:
    raw = data.get(name)
    if raw is None:
        return dict(defaults)
    if not isinstance(raw, dict):
        raise ParseError(f"{name}: objet attendu (reçu {type(raw).__name__})")
    unknown = sorted(set(raw) - set(defaults))
    if unknown:
        raise UnknownKey(f"{name}: clé(s) inconnue(s) {unknown}")
    block = dict(defaults)
    block.update(raw)
    return block


def _symbols(data: dict, name: str, known: tuple) -> Optional[dict]:
    raw = data.get(name)
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ParseError(f"{name}: objet attendu (reçu {type(raw).__name__})")
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise UnknownKey(f"{name}: symbole(s) inconnu(s) {unknown}")
    return {k: _number(v, f"{name}.{k}") for k, v in raw.items()}


def config_from_dict(data: dict) -> RunConfig:
    """
    Valide un dictionnaire de configuration et applique les défauts.

    Raises:
        ParseError: type ou valeur invalide (champ en contexte)
        UnknownKey: bloc ou clé inconnu
        MissingSymbol: symbole requis absent pour la commande
    """
    if not isinstance(data, dict):
        raise ParseError("La configuration doit être un objet JSON")
    unknown = sorted(set(data) - set(BLOCKS))
    if unknown:
        raise UnknownKey(f"Bloc(s) inconnu(s): {unknown}")

    command = data.get("command")
    if command not in COMMANDS:
        raise ParseError(f"command: une valeur parmi {list(COMMANDS)} attendue (reçu {command!r})")

    model = _symbols(data, "model", MODEL_SYMBOLS) or {}
    missing = [s for s in required_symbols(command) if s not in model]
    if missing:
        raise MissingSymbol(f"model: symbole(s) requis pour '{command}': {missing}")

    econ = _symbols(data, "econ", ECON_SYMBOLS)
    if command in ("bionomic", "optimal"):
        if econ is None:
            raise MissingSymbol(f"econ: bloc requis pour '{command}'")
        absent = [s for s in ECON_SYMBOLS if s != "delta" and s not in econ]
        if absent:
            raise MissingSymbol(f"econ: symbole(s) requis: {absent}")

    sim = _block(data, "sim", SIM_DEFAULTS)
    for key in ('t_end', 'rel_tol', 'abs_tol', 'transient_fraction'):
        sim[key] = _number(sim[key], f"sim.{key}")
    if sim['max_step'] is not None:
        sim['max_step'] = _number(sim['max_step'], "sim.max_step")
    sim['initial'] = _pair(sim['initial'], "sim.initial")
    if command == "simulate" and sim['initial'] is None:
        raise MissingSymbol("sim.initial: état initial requis pour 'simulate'")

    hopf = _block(data, "hopf", HOPF_DEFAULTS)
    hopf['m_lo'] = _number(hopf['m_lo'], "hopf.m_lo")
    hopf['m_hi'] = _number(hopf['m_hi'], "hopf.m_hi")
    if not isinstance(hopf['grid_points'], int) or isinstance(hopf['grid_points'], bool):
        raise ParseError(f"hopf.grid_points: entier attendu (reçu {hopf['grid_points']!r})")

    sweep = _block(data, "sweep", SWEEP_DEFAULTS)
    if not isinstance(sweep['m_values'], list):
        raise ParseError("sweep.m_values: liste attendue")
    sweep['m_values'] = [_number(v, f"sweep.m_values[{i}]") for i, v in enumerate(sweep['m_values'])]
    sweep['initial'] = _pair(sweep['initial'], "sweep.initial")

    check = _block(data, "check", CHECK_DEFAULTS)
    if not isinstance(check['seed'], int) or isinstance(check['seed'], bool):
        raise ParseError(f"check.seed: entier attendu (reçu {check['seed']!r})")
    check['scale'] = _number(check['scale'], "check.scale")

    reference = _symbols(data, "reference", REFERENCE_KEYS)

    output = _block(data, "output", OUTPUT_DEFAULTS)
    if output['format'] not in FORMATS:
        raise ParseError(f"output.format: une valeur parmi {list(FORMATS)} attendue (reçu {output['format']!r})")

    config = RunConfig(command=command, model=model, econ=econ, sim=sim, hopf=hopf,
                       sweep=sweep, check=check, reference=reference, output=output)
    try:
        config.model_params()
        config.econ_params()
        config.sim_config()
    except InvalidParameter as exc:
        raise ParseError(f"Valeur invalide: {exc}") from exc
    return config


def parse_config(text: str) -> RunConfig:
    """
    Analyse un texte JSON de configuration.

    Args:
        text: contenu UTF-8 (objet JSON)

    Returns:
        RunConfig validé, défauts appliqués

    Raises:
        ParseError: JSON invalide (ligne et colonne en contexte)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"JSON invalide ligne {exc.lineno}, colonne {exc.colno}: {exc.msg}") from exc
    return config_from_dict(data)


def _literal(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(data: dict, overrides: list) -> dict:
    """
    Applique des surcharges "clé=valeur" à un dictionnaire de configuration.

    La clé est un chemin pointé (sim.t_end) ou un symbole nu du modèle
    ou de l'économie (m, p1); la valeur est lue comme un littéral JSON,
    à défaut comme une chaîne.

    Returns:
        Nouveau dictionnaire (l'original n'est pas modifié)
    """
    result = json.loads(json.dumps(data))
    for item in overrides:
        if "=" not in item:
            raise ParseError(f"--set: forme clé=valeur attendue (reçu {item!r})")
        key, raw = item.split("=", 1)
        key = key.strip()
        value = _literal(raw.strip())

        if "." in key:
            path = key.split(".")
        elif key in MODEL_SYMBOLS:
            path = ["model", key]
        elif key in ECON_SYMBOLS:
            path = ["econ", key]
        elif key in BLOCKS:
            path = [key]
        else:
            raise UnknownKey(f"--set: clé inconnue {key!r}")

        target = result
        for part in path[:-1]:
            if target.get(part) is None:
                target[part] = {}
            target = target[part]
            if not isinstance(target, dict):
                raise ParseError(f"--set: {key!r} ne désigne pas un champ d'objet")
        target[path[-1]] = value
        logger.debug(f"Surcharge {key} = {value!r}")
    return result


def load_config(path: str, overrides: list = ()) -> RunConfig:
    """
    Charge un fichier de configuration puis applique les surcharges.

    Raises:
        ParseError: fichier illisible ou JSON invalide
    """
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"Lecture impossible de {path}: {exc}") from exc

    if not overrides:
        return parse_config(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: JSON invalide ligne {exc.lineno}, colonne {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: la configuration doit être un objet JSON")
    return config_from_dict(apply_overrides(data, list(overrides)))
