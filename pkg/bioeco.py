"""
bioeco.py - Point d'entrée en ligne de commande

Usage:
    python bioeco.py <commande> --config <fichier> [--set k=v]... [--format csv|json|text] [--out <fichier>]

Commandes: equilibria, stability, simulate, hopf, bionomic, optimal, sweep,
check, reproduce. Codes de sortie: 0 succès, 2 erreur de configuration,
3 échec numérique.
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import ConfigError
from config_loader import COMMANDS, FORMATS, load_config, config_from_dict, apply_overrides
from report.runner import run, EXIT_CONFIG
from report.emit import emit

logger = logging.getLogger("bioeco")


class OnceFilter(logging.Filter):
    """Laisse passer chaque message une seule fois (avertissements répétés en balayage)."""

    def __init__(self):
        super().__init__()
        self._seen = set()

    def filter(self, record) -> bool:
        key = (record.name, record.levelno, record.getMessage())
        if key in self._seen:
            return False
        self._seen.add(key)
        return True


def setup_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    for handler in logging.getLogger().handlers:
        handler.addFilter(OnceFilter())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bioeco",
        description="Modèle proie-prédateur récolté avec refuge: équilibres, bifurcations, économie, simulation",
    )
    parser.add_argument("command", choices=COMMANDS, help="Analyse à exécuter")
    parser.add_argument("--config", help="Fichier JSON de configuration")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="K=V",
                        help="Surcharge (ex: m=0.015, sim.t_end=500)")
    parser.add_argument("--format", choices=FORMATS, help="Format de sortie (défaut: celui du fichier, sinon csv)")
    parser.add_argument("--out", help="Fichier de sortie (défaut: sortie standard)")
    parser.add_argument("--log-level", default="WARNING", help="Niveau de journalisation (défaut: WARNING)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    overrides = list(args.overrides) + [f"command={args.command}"]
    try:
        if args.config:
            config = load_config(args.config, overrides)
        else:
            config = config_from_dict(apply_overrides({}, overrides))
    except ConfigError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_CONFIG

    envelope = run(config)
    fmt = args.format or config.output['format']
    text = emit(envelope, fmt)

    out = args.out or config.output['path']
    if out:
        try:
            with open(out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as exc:
            logger.error(f"Écriture impossible de {out}: {exc}")
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return envelope.exit_code


if __name__ == "__main__":
    sys.exit(main())
