"""
report/emit.py - Sérialisation des résultats (CSV, JSON, texte)

- CSV: table principale, en-tête, 12 chiffres significatifs, point décimal
- JSON: enveloppe complète, clés triées, complexes en [re, im]
- texte: rapport encadré lisible
Deux émissions d'une même enveloppe sont identiques octet pour octet.
"""

import json
import math
from dataclasses import is_dataclass

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.12g"


def _clean(value):
    """Convertit récursivement en types JSON déterministes."""
    if isinstance(value, pd.DataFrame):
        return [_clean(row) for row in value.to_dict(orient="records")]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_clean(float(value.real)), _clean(float(value.imag))]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if hasattr(value, "to_dict"):
        return _clean(value.to_dict())
    if is_dataclass(value):
        return _clean(vars(value))
    return value


def primary_table(envelope) -> pd.DataFrame:
    """Première table des résultats, ou une ligne plate des enregistrements."""
    for value in envelope.results.values():
        if isinstance(value, pd.DataFrame):
            return value
    if envelope.error is not None:
        return pd.DataFrame([envelope.error])
    flat = {}
    for name, value in envelope.results.items():
        if isinstance(value, dict):
            for key, item in value.items():
                if not isinstance(item, (dict, list)):
                    flat[f"{name}.{key}"] = item
        else:
            flat[name] = value
    return pd.DataFrame([flat]) if flat else pd.DataFrame()


def to_csv(envelope) -> str:
    table = primary_table(envelope)
    return table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def to_json(envelope) -> str:
    payload = {
        'command': envelope.command,
        'inputs_echo': envelope.inputs_echo,
        'results': envelope.results,
        'diagnostics': list(envelope.diagnostics),
        'exit_code': envelope.exit_code,
        'error': envelope.error,
    }
    return json.dumps(_clean(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return "N/A" if not math.isfinite(value) else f"{value:.6g}"
    return str(value)


def format_envelope(envelope) -> str:
    """
    Formate une enveloppe en rapport texte encadré.
    """
    status = "✅" if envelope.exit_code == 0 else "❌"
    lines = [
        "═══════════════════════════════════════",
        f"   🐟 BIOECO · {envelope.command.upper():<20}",
        "═══════════════════════════════════════",
        "",
        f"{status} Code de sortie: {envelope.exit_code}",
    ]
    if envelope.error is not None:
        lines.append(f"   {envelope.error['type']}: {envelope.error['message']}")
    lines.append("")

    for name, value in envelope.results.items():
        lines.append(f"📊 {name}")
        if isinstance(value, pd.DataFrame):
            if len(value) == 0:
                lines.append("   (vide)")
            for _, row in value.iterrows():
                lines.append("   " + " | ".join(f"{col}={_format_value(row[col])}" for col in value.columns))
        elif isinstance(value, dict):
            for key, item in value.items():
                lines.append(f"   {key}: {_format_value(item)}")
        else:
            lines.append(f"   {_format_value(value)}")
        lines.append("")

    if envelope.diagnostics:
        lines.append("⚠️ Diagnostics:")
        for message in envelope.diagnostics:
            lines.append(f"   • {message}")

    return "\n".join(lines) + "\n"


def emit(envelope, fmt: str = "csv") -> str:
    """
    Sérialise une enveloppe de résultats.

    Args:
        envelope: ResultEnvelope
        fmt: "csv", "json" ou "text"

    Returns:
        Texte prêt à écrire
    """
    if fmt == "csv":
        return to_csv(envelope)
    if fmt == "json":
        return to_json(envelope)
    if fmt == "text":
        return format_envelope(envelope)
    raise ValueError(f"Format non supporté: {fmt}. Utilisez csv, json ou text.")
