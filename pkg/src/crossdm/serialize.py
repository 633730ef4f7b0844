"""
JSON weight-bank files.

Floats are written with 17 significant digits so every double survives a
write/read cycle bit for bit. Layout::

    {"format": "crossdm-bank/1", "spec": {...}, "seed": ...,
     "weights": [[[re, im], ...], ...], "objective_values": [...],
     "constraint_residuals": [...]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .design import DesignSpec
from .synthesis import WeightSet

FORMAT = "crossdm-bank/1"


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    # keep floats recognisable as floats after parsing
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def dumps(obj, indent: int = 0, _level: int = 0) -> str:
    """Minimal deterministic JSON writer with fixed 17-digit floats."""
    pad = " " * (indent * (_level + 1)) if indent else ""
    close = " " * (indent * _level) if indent else ""
    nl = "\n" if indent else ""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{" + nl + ("," + nl).join(items) + nl + close + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # leaf arrays of scalars stay on one line
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in seq]
        return "[" + nl + ("," + nl).join(items) + nl + close + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def bank_to_dict(bank: WeightSet) -> dict:
    return {
        "format": FORMAT,
        "spec": bank.spec.to_dict(),
        "seed": bank.seed,
        "weights": [[[z.real, z.imag] for z in w] for w in bank.weights],
        "objective_values": [float(v) for v in bank.objective_values],
        "constraint_residuals": [float(v) for v in bank.constraint_residuals],
    }


def bank_from_dict(doc: dict) -> WeightSet:
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a weight-bank document (format={doc.get('format')!r})")
    spec = DesignSpec.from_dict(doc["spec"])
    pairs = np.asarray(doc["weights"], dtype=float)
    if pairs.ndim != 3 or pairs.shape[2] != 2:
        raise ValueError(f"weights must be (symbols, 2N, 2), got shape {pairs.shape}")
    weights = pairs[..., 0] + 1j * pairs[..., 1]
    if weights.shape != (spec.num_symbols, 2 * spec.num_elements):
        raise ValueError(
            f"weights shape {weights.shape} does not match the stored design "
            f"({spec.num_symbols}, {2 * spec.num_elements})")
    return WeightSet(
        spec=spec,
        weights=weights,
        objective_values=np.asarray(doc["objective_values"], dtype=float),
        constraint_residuals=np.asarray(doc["constraint_residuals"], dtype=float),
    )


def save_bank(bank: WeightSet, path) -> None:
    Path(path).write_text(dumps(bank_to_dict(bank), indent=1) + "\n")


def load_bank(path) -> WeightSet:
    return bank_from_dict(json.loads(Path(path).read_text()))
