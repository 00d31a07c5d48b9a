"""Canonical report serialization.

All reports render to JSON with sorted keys, rationals as ``p/q`` in
lowest terms and floats with 12 significant digits, so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from .words import Word

# words longer than this serialize as {offset, length, support} instead
# of a dense bit string
MAX_JSON_WORD_LENGTH = 4096


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def real_str(x: float) -> str:
    return format(x, ".12g")


def word_jsonable(w: Word):
    if w.length <= MAX_JSON_WORD_LENGTH:
        return str(w)
    return {
        "offset": w.offset,
        "length": w.length,
        "support": sorted(w.support),
    }


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, Word):
        return word_jsonable(obj)
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, float):
        return real_str(obj)
    if isinstance(obj, (frozenset, set)):
        return [to_jsonable(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    return obj


def dumps(report) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"
