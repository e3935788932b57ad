"""Deterministic JSON input/output for channels, dilations and reports.

All numbers are written with 17 significant digits (enough to round-trip a
double exactly), keys keep their insertion order, and no timestamps or other
environment-dependent fields are ever emitted, so identical inputs produce
byte-identical documents.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .dilations import Dilation
from .maps import (
    CpMap,
    _complex_to_pairs,
    _pairs_to_complex,
    channel_from_dict,
    channel_to_dict,
)

__all__ = [
    "dumps",
    "loads",
    "write_json",
    "read_json",
    "channel_to_json",
    "channel_from_json",
    "dilation_to_dict",
    "dilation_from_dict",
]


def _emit(obj, parts, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        val = float(obj)
        if not math.isfinite(val):
            raise ValueError(f"non-finite value {val!r} cannot be serialized")
        parts.append("%.17g" % val)
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise ValueError(f"JSON object keys must be strings, got {key!r}")
            parts.append(pad_in + json.dumps(key) + ": ")
            _emit(value, parts, indent, level + 1)
            parts.append(",\n" if i + 1 < len(obj) else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            parts.append("[]")
            return
        # short leaf lists (like [re, im] pairs) stay on one line
        if all(isinstance(v, (int, float, np.integer, np.floating))
               for v in obj):
            inner = []
            for v in obj:
                _emit(v, inner, indent, 0)
            parts.append("[" + ", ".join(inner) + "]")
            return
        parts.append("[\n")
        for i, value in enumerate(obj):
            parts.append(pad_in)
            _emit(value, parts, indent, level + 1)
            parts.append(",\n" if i + 1 < len(obj) else "\n")
        parts.append(pad + "]")
    else:
        raise ValueError(f"cannot serialize object of type {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to a deterministic JSON string with %.17g floats."""
    parts: list = []
    _emit(obj, parts, indent, 0)
    parts.append("\n")
    return "".join(parts)


def loads(text: str):
    """Parse JSON text; raises ValueError on malformed input."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from exc


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def channel_to_json(t: CpMap) -> str:
    return dumps(channel_to_dict(t))


def channel_from_json(text: str) -> CpMap:
    return channel_from_dict(loads(text))


def dilation_to_dict(dil: Dilation) -> dict:
    """JSON-ready dict {"d", "n", "m", "V"} with V as [re, im] pairs."""
    return {
        "d": int(dil.d),
        "n": int(dil.n),
        "m": int(dil.m),
        "V": _complex_to_pairs(dil.v),
    }


def dilation_from_dict(obj: dict) -> Dilation:
    """Inverse of dilation_to_dict; raises ValueError on malformed input."""
    if not isinstance(obj, dict):
        raise ValueError("dilation document must be a JSON object")
    try:
        d = int(obj["d"])
        n = int(obj["n"])
        m = int(obj["m"])
        rows = obj["V"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(
            f"dilation document missing or malformed field: {exc}") from exc
    v = _pairs_to_complex(rows, (d * m, n), "V")
    return Dilation(d, n, m, v)
