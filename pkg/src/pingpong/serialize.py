"""Wire formats: decimal-string matrices, word strings, canonical JSON.

Matrices cross process boundaries as JSON arrays of decimal strings so
that arbitrary-precision entries survive a round-trip.  Canonical JSON
fixes key order (insertion order of the emitting dict) and formats every
float with 12 significant digits, which makes emit(parse(emit(x)))
byte-identical to emit(x).
"""

from __future__ import annotations

import json

from .errors import ConfigError
from .matrices import IntMatrix


def matrix_to_obj(m: IntMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.entries]


def matrix_from_obj(obj) -> IntMatrix:
    try:
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in obj))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"not a valid matrix object: {exc}") from exc


def pair_to_obj(g1: IntMatrix, g2: IntMatrix) -> dict:
    return {"g1": matrix_to_obj(g1), "g2": matrix_to_obj(g2)}


def pair_from_obj(obj) -> tuple[IntMatrix, IntMatrix]:
    if not isinstance(obj, dict) or "g1" not in obj or "g2" not in obj:
        raise ConfigError('pair file must be a JSON object with keys "g1" and "g2"')
    return matrix_from_obj(obj["g1"]), matrix_from_obj(obj["g2"])


def load_pair(path: str) -> tuple[IntMatrix, IntMatrix]:
    with open(path) as fh:
        return pair_from_obj(json.load(fh))


def format_float(x: float) -> str:
    return format(float(x), ".12g")


def canonical_json(obj) -> str:
    """Serialize with insertion-order keys and 12-significant-digit floats."""
    return _emit(obj) + "\n"


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    raise ConfigError(f"cannot canonically serialize {type(obj).__name__}")
