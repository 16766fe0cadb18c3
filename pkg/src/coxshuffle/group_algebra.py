"""Exact elements of the rational group algebra Q[W], and signed measures.

Elements are dense coefficient vectors indexed by the element indices of a
:class:`~coxshuffle.coxeter.CoxeterGroup`.  The product is convolution:
the coefficient of u in f*g is the sum of f(v)g(w) over all v*w = u.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Iterable

import numpy as np

from .polynomial import Poly, _frac_str

__all__ = ["GroupAlgebraElement", "SignedMeasure", "SymbolicMeasure", "convolve", "total_variation"]


class GroupAlgebraElement:
    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs: Iterable):
        self.group = group
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != group.order:
            raise ValueError(f"expected {group.order} coefficients, got {len(c)}")
        self.coeffs = c

    @classmethod
    def zero(cls, group):
        return cls(group, [0] * group.order)

    @classmethod
    def point_mass(cls, group, w: int = 0):
        c = [0] * group.order
        c[w] = 1
        return cls(group, c)

    @classmethod
    def identity(cls, group):
        return cls.point_mass(group, 0)

    @classmethod
    def from_function(cls, group, f: Callable[[int], Fraction]):
        return cls(group, [f(w) for w in range(group.order)])

    @classmethod
    def uniform(cls, group):
        return cls(group, [Fraction(1, group.order)] * group.order)

    def __getitem__(self, w: int) -> Fraction:
        return self.coeffs[w]

    def __len__(self):
        return len(self.coeffs)

    def support(self) -> list[int]:
        return [w for w, c in enumerate(self.coeffs) if c]

    def total(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    def _same(self, other):
        if other.group is not self.group:
            raise ValueError("elements of different groups")

    def _wrap(self, coeffs):
        return GroupAlgebraElement(self.group, coeffs)

    def __add__(self, other):
        self._same(other)
        return self._wrap(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._same(other)
        return self._wrap(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._wrap(-a for a in self.coeffs)

    def scale(self, c) -> "GroupAlgebraElement":
        c = Fraction(c)
        return self._wrap(a * c for a in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return convolve(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return self.group is other.group and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse_pushforward(self) -> "GroupAlgebraElement":
        """The element w -> f(w^-1)."""
        inv = self.group.inverses
        return self._wrap(self.coeffs[inv[w]] for w in range(self.group.order))

    def left_multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of g -> f*g in the element basis: entry [u][v] = f(u v^-1)."""
        G = self.group
        inv = G.inverses
        out = []
        for u in range(G.order):
            row = G.mul_row(u)
            # row[inv[v]] = u * v^-1
            out.append([self.coeffs[row[inv[v]]] for v in range(G.order)])
        return out

    def to_json(self) -> list[str]:
        return [_frac_str(c) for c in self.coeffs]

    def __repr__(self):
        nz = [(w, c) for w, c in enumerate(self.coeffs) if c]
        body = ", ".join(f"{w}: {c}" for w, c in nz[:8])
        more = ", ..." if len(nz) > 8 else ""
        return f"GroupAlgebraElement({self.group.label}; {{{body}{more}}})"


class SignedMeasure(GroupAlgebraElement):
    """Group-algebra element whose coefficients sum to exactly one."""

    __slots__ = ()

    def __init__(self, group, coeffs: Iterable, check: bool = True):
        super().__init__(group, coeffs)
        if check and self.total() != 1:
            raise ValueError(f"coefficients sum to {self.total()}, not 1")

    @classmethod
    def of(cls, element: GroupAlgebraElement) -> "SignedMeasure":
        return cls(element.group, element.coeffs)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)


def _integer_vector(coeffs) -> tuple[np.ndarray, int]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    vec = np.array([int(c * den) for c in coeffs], dtype=object)
    return vec, den


def convolve(f: GroupAlgebraElement, g: GroupAlgebraElement) -> GroupAlgebraElement:
    """Exact group-algebra product f*g."""
    f._same(g)
    G = f.group
    fv, fd = _integer_vector(f.coeffs)
    gv, gd = _integer_vector(g.coeffs)
    out = np.zeros(G.order, dtype=object)
    table = G.multiplication_table() if G.order <= 2000 else None
    for v in np.nonzero(fv)[0]:
        row = table[v] if table is not None else G.mul_row(int(v))
        out[row] += fv[v] * gv
    den = fd * gd
    coeffs = [Fraction(int(x), den) for x in out]
    if isinstance(f, SignedMeasure) and isinstance(g, SignedMeasure):
        return SignedMeasure(G, coeffs)
    return GroupAlgebraElement(G, coeffs)


class SymbolicMeasure:
    """Per-element rational functions p_w(x) / x^degree in a free parameter x."""

    def __init__(self, group, numerators: list[Poly], degree: int):
        if len(numerators) != group.order:
            raise ValueError("one numerator per element required")
        self.group = group
        self.numerators = list(numerators)
        self.degree = degree

    def __getitem__(self, w: int) -> Poly:
        return self.numerators[w]

    def total(self) -> Poly:
        acc = Poly()
        for p in set(self.numerators):
            acc = acc + p * self.numerators.count(p)
        return acc

    def evaluate(self, x) -> SignedMeasure:
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("x must be nonzero")
        scale = x ** self.degree
        cache = {}
        out = []
        for p in self.numerators:
            if p not in cache:
                cache[p] = p(x) / scale
            out.append(cache[p])
        return SignedMeasure(self.group, out)

    def __eq__(self, other):
        if not isinstance(other, SymbolicMeasure):
            return NotImplemented
        if other.group is not self.group:
            return False
        # p/x^a == q/x^b  <=>  p*x^b == q*x^a
        xa = Poly.monomial(self.degree)
        xb = Poly.monomial(other.degree)
        return all(p * xb == q * xa for p, q in zip(self.numerators, other.numerators))

    def __sub__(self, other: "SymbolicMeasure") -> "SymbolicMeasure":
        d = max(self.degree, other.degree)
        a = Poly.monomial(d - self.degree)
        b = Poly.monomial(d - other.degree)
        return SymbolicMeasure(self.group, [p * a - q * b for p, q in zip(self.numerators, other.numerators)], d)

    def is_zero(self) -> bool:
        return not any(self.numerators)

    def by_descent_class(self) -> dict[int, Poly]:
        """Descent mask -> numerator, raising if the measure is not constant on descent classes."""
        out = {}
        for w, p in enumerate(self.numerators):
            d = self.group.descent_masks[w]
            if out.setdefault(d, p) != p:
                raise ValueError("measure is not constant on descent classes")
        return out


def total_variation(d1, d2) -> Fraction | float:
    """Half the L1 distance.  Exact for exact inputs; float when either side is a float vector."""
    a = d1.coeffs if isinstance(d1, GroupAlgebraElement) else list(d1)
    b = d2.coeffs if isinstance(d2, GroupAlgebraElement) else list(d2)
    if isinstance(d1, GroupAlgebraElement) and isinstance(d2, GroupAlgebraElement):
        d1._same(d2)
    if len(a) != len(b):
        raise ValueError(f"distributions over different supports ({len(a)} vs {len(b)} elements)")
    if all(isinstance(x, (int, Fraction)) for x in a) and all(isinstance(x, (int, Fraction)) for x in b):
        return sum((abs(Fraction(x) - Fraction(y)) for x, y in zip(a, b)), Fraction(0)) / 2
    return float(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)).sum() / 2)
