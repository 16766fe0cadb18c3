"""JSON/CSV/table rendering shared by the CLI.

Exact rationals become "num/den" strings, polynomials become coefficient
arrays (lowest degree first), and floats are only used for empirical
frequencies.
"""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .fields import FieldElement
from .polynomial import Poly

__all__ = ["jsonable", "dumps", "frac_str", "parse_rational", "render_table"]


def frac_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r} (use p/q)") from exc


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Poly):
        return obj.to_json()
    if isinstance(obj, FieldElement):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if hasattr(obj, "label"):
        return obj.label() if callable(obj.label) else obj.label
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)


def render_table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(jsonable(c)) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
