"""Exact feasibility of mixed equality / strict-inequality systems over Q.

Used to decide which sign vectors of an affine arrangement are realized by
a point, and to produce a rational witness for each.  Equalities are
eliminated by row reduction; the remaining strict inequalities go through
Fourier-Motzkin elimination, which keeps strictness exactly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg

__all__ = ["solve_strict_system"]


def _fm_feasible(rows: list[list[Fraction]], nvars: int):
    """rows: [c_0..c_{k-1}, d] meaning c.y + d > 0.  Returns a witness y or None."""
    stages = []
    current = rows
    for k in range(nvars - 1, -1, -1):
        lower, upper, rest = [], [], []
        for r in current:
            c = r[k]
            if c > 0:
                lower.append(r)
            elif c < 0:
                upper.append(r)
            else:
                rest.append(r)
        stages.append((k, lower, upper))
        new = list(rest)
        # y_k > -(rest_l)/c_l and y_k < (rest_u)/(-c_u); combine pairwise
        for lo in lower:
            for up in upper:
                a, b = lo[k], -up[k]
                new.append([b * x + a * y for x, y in zip(lo, up)])
        current = []
        seen = set()
        for r in new:
            r = list(r)
            r[k] = Fraction(0)
            key = tuple(r)
            if key not in seen:
                seen.add(key)
                current.append(r)
    if any(r[-1] <= 0 for r in current):
        return None
    y = [Fraction(0)] * nvars
    for k, lower, upper in reversed(stages):
        def bound(r):
            s = r[-1] + sum(r[j] * y[j] for j in range(nvars) if j != k)
            return -s / r[k]
        lows = [bound(r) for r in lower]
        ups = [bound(r) for r in upper]
        lo = max(lows) if lows else None
        hi = min(ups) if ups else None
        if lo is None and hi is None:
            y[k] = Fraction(0)
        elif hi is None:
            y[k] = lo + 1
        elif lo is None:
            y[k] = hi - 1
        else:
            y[k] = (lo + hi) / 2
    return y


def solve_strict_system(equalities: Sequence, positives: Sequence, ndim: int):
    """Find v with a.v = b for every (a, b) in ``equalities`` and a.v > b for (a, b) in ``positives``.

    Returns an exact rational witness point, or None when infeasible.
    """
    eq_rows = [[Fraction(x) for x in a] + [Fraction(b)] for a, b in equalities]
    if eq_rows:
        red, pivots = linalg.rref(eq_rows)
        if ndim in pivots:
            return None
    else:
        red, pivots = [], []
    free = [j for j in range(ndim) if j not in pivots]
    # v = base + sum_f y_f e_f with pivot coordinates determined by the free ones
    base = [Fraction(0)] * ndim
    for row, p in zip(red, pivots):
        base[p] = row[ndim]
    dirs = []
    for f in free:
        d = [Fraction(0)] * ndim
        d[f] = Fraction(1)
        for row, p in zip(red, pivots):
            d[p] = -row[f]
        dirs.append(d)
    rows = []
    for a, b in positives:
        a = [Fraction(x) for x in a]
        const = sum((x * y for x, y in zip(a, base)), Fraction(0)) - Fraction(b)
        coeffs = [sum((x * y for x, y in zip(a, d)), Fraction(0)) for d in dirs]
        rows.append(coeffs + [const])
    y = _fm_feasible(rows, len(free))
    if y is None:
        return None
    v = list(base)
    for yf, d in zip(y, dirs):
        if yf:
            v = [x + yf * z for x, z in zip(v, d)]
    return v
