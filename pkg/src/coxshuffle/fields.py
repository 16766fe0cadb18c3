"""Exact real number fields Q(theta) with a designated real embedding.

Elements are coefficient vectors over Q in the power basis of ``theta``,
reduced modulo the minimal polynomial.  Signs are decided exactly by
interval arithmetic on a rational isolating interval for ``theta``, which
is bisected on demand.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

__all__ = [
    "NumberField",
    "FieldElement",
    "cos_field",
    "cyclotomic_polynomial",
    "sign",
    "to_float",
]


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _interval_mul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _interval_eval(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _interval_mul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _divide_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // den[-1]
        out[i] = q
        for j, d in enumerate(den):
            num[i + j] -= q * d
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


class NumberField:
    """A real number field Q(theta), theta a simple real root of ``minpoly``.

    Parameters
    ----------
    minpoly : sequence of rationals
        Monic irreducible polynomial, lowest degree first.
    interval : (lo, hi)
        Rational interval containing exactly one root of ``minpoly``, namely
        the designated real embedding of theta.
    name : str
        Display name of the generator.
    """

    def __init__(self, minpoly: Sequence, interval: tuple, name: str = "theta"):
        self.minpoly = tuple(Fraction(c) for c in minpoly)
        if self.minpoly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.degree = len(self.minpoly) - 1
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if _poly_eval(self.minpoly, lo) * _poly_eval(self.minpoly, hi) >= 0:
            raise ValueError("interval does not isolate a simple root")
        self._lo, self._hi = lo, hi
        self.name = name
        self._approx = float((lo + hi) / 2)
        for _ in range(80):
            if self._hi - self._lo < Fraction(1, 2**60):
                break
            self._refine()
        self._approx = float((self._lo + self._hi) / 2)

    def __repr__(self):
        return f"NumberField({self.name}, minpoly={[str(c) for c in self.minpoly]})"

    def __call__(self, coeffs) -> "FieldElement":
        if isinstance(coeffs, FieldElement):
            return coeffs
        if isinstance(coeffs, (int, Rational)):
            coeffs = [coeffs]
        return FieldElement(self, coeffs)

    @property
    def gen(self) -> "FieldElement":
        return FieldElement(self, [0, 1])

    def _refine(self):
        mid = (self._lo + self._hi) / 2
        f_lo = _poly_eval(self.minpoly, self._lo)
        f_mid = _poly_eval(self.minpoly, mid)
        if f_mid == 0:
            self._lo = self._hi = mid
        elif (f_lo < 0) == (f_mid < 0):
            self._lo = mid
        else:
            self._hi = mid

    def sign_of(self, coeffs: Sequence[Fraction]) -> int:
        if not coeffs:
            return 0
        while True:
            lo, hi = _interval_eval(coeffs, self._lo, self._hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if self._lo == self._hi:
                return 0 if lo == 0 else (1 if lo > 0 else -1)
            self._refine()


class FieldElement:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        c = [Fraction(x) for x in coeffs]
        d = field.degree
        f = field.minpoly
        for i in range(len(c) - 1, d - 1, -1):
            lead = c[i]
            if lead:
                for j in range(d):
                    c[i - d + j] -= lead * f[j]
            c[i] = Fraction(0)
        self.coeffs = tuple(_trim(c[:d]))
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise TypeError("elements of different number fields")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return FieldElement(self.field, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-x for x in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return FieldElement(self.field, [x * other for x in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return FieldElement(self.field, [])
        prod = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return FieldElement(self.field, prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in number field")
        d = self.field.degree
        # column j of the multiplication-by-self matrix is self * theta^j
        cols = []
        power = FieldElement(self.field, [1])
        for _ in range(d):
            v = (self * power).coeffs
            cols.append(list(v) + [Fraction(0)] * (d - len(v)))
            power = power * self.field.gen
        rows = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if rows[r][col] != 0)
            rows[col], rows[piv] = rows[piv], rows[col]
            p = rows[col][col]
            rows[col] = [x / p for x in rows[col]]
            for r in range(d):
                if r != col and rows[r][col] != 0:
                    f = rows[r][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
        return FieldElement(self.field, [rows[i][d] for i in range(d)])

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, [x / other for x in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            if not self.coeffs:
                return other == 0
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if len(self.coeffs) <= 1:
                self._hash = hash(self.coeffs[0] if self.coeffs else Fraction(0))
            else:
                self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def sign(self) -> int:
        return self.field.sign_of(self.coeffs)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __float__(self):
        t = self.field._approx
        return float(sum(float(c) * t**i for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{self.field.name}")
            else:
                terms.append(f"{c}*{self.field.name}^{i}")
        return " + ".join(terms)


def sign(value) -> int:
    """Exact sign of an int, Fraction or FieldElement."""
    if isinstance(value, FieldElement):
        return value.sign()
    return (value > 0) - (value < 0)


def to_float(value) -> float:
    return float(value)


def _two_cos_minpoly(m: int) -> list[int]:
    """Minimal polynomial of 2cos(pi/m), via the cyclotomic polynomial of order 2m."""
    phi = cyclotomic_polynomial(2 * m)
    deg = len(phi) - 1
    half = deg // 2
    # Dickson polynomials D_j(y) = z^j + z^-j with y = z + 1/z
    dickson = [[2], [0, 1]]
    for _ in range(2, half + 1):
        prev, cur = dickson[-2], dickson[-1]
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        dickson.append(nxt)
    out = [0] * (half + 1)
    out[0] += phi[half]
    for j in range(1, half + 1):
        for i, c in enumerate(dickson[j]):
            out[i] += phi[half + j] * c
    return _trim(out)


@lru_cache(maxsize=None)
def cos_field(m: int):
    """The real field Q(2cos(pi/m)) with theta = 2cos(pi/m).

    Returns None when 2cos(pi/m) is rational (m <= 3); callers then work
    over Q directly.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m <= 3:
        return None
    poly = _two_cos_minpoly(m)
    approx = 2 * math.cos(math.pi / m)
    eps = Fraction(1, 2**30)
    centre = Fraction(approx).limit_denominator(2**40)
    return NumberField(poly, (centre - eps, centre + eps), name=f"c{m}")


def two_cos(m: int):
    """Exact value of 2cos(pi/m) as an int or a FieldElement of ``cos_field(m)``."""
    if m == 1:
        return -2
    if m == 2:
        return 0
    if m == 3:
        return 1
    return cos_field(m).gen
