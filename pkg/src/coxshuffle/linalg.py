"""Exact linear algebra over Q and over the number fields of :mod:`fields`.

Row reduction works for any scalar type with exact ``+ - * /`` and a
reliable ``== 0`` test (int, Fraction, FieldElement).  Matrix inversion over
Q is fraction-free (integer Gauss-Jordan with exact Bareiss divisions).
Characteristic polynomials go through FLINT.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import flint

from .polynomial import Poly


class SingularMatrixError(ArithmeticError):
    pass


def _as_scalar(x):
    return Fraction(x) if isinstance(x, int) else x


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[_as_scalar(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {v : rows . v = 0}, one basis vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    zero = red[0][0] * 0 if red else Fraction(0)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = zero + 1
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def reduce_vector(red: Sequence[Sequence], pivots: Sequence[int], v: Sequence):
    """Remainder of v after elimination against an RREF basis (zero iff v is in the row span)."""
    v = list(v)
    for row, p in zip(red, pivots):
        if v[p] != 0:
            f = v[p]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def in_row_span(red, pivots, v) -> bool:
    return all(x == 0 for x in reduce_vector(red, pivots, v))


def inverse_fraction_free(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a rational square matrix.

    Rows are scaled to integers, then a Bareiss-style Gauss-Jordan sweep keeps
    every intermediate entry integral (each division by the previous pivot is
    exact).  The left block ends as det*I, the right as det*A^-1.
    """
    n = len(matrix)
    rows = []
    scales = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        s = lcm(*(x.denominator for x in row)) if row else 1
        scales.append(s)
        rows.append([int(x * s) for x in row] + [0] * n)
    for i in range(n):
        rows[i][n + i] = 1
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
        pk = rows[k][k]
        rk = rows[k]
        for i in range(n):
            if i == k:
                continue
            ri = rows[i]
            f = ri[k]
            rows[i] = [(pk * a - f * b) // prev for a, b in zip(ri, rk)]
        prev = pk
    det = prev
    # rows were permuted together with the identity block, so the right block
    # is det * (D A)^-1 with D = diag(scales); undo the scaling on columns.
    out = []
    for i in range(n):
        if rows[i][i] != det:
            raise ArithmeticError("fraction-free elimination lost exactness")
        out.append([Fraction(rows[i][n + j] * scales[j], det) for j in range(n)])
    return out


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def charpoly(matrix: Sequence[Sequence[Fraction]]) -> Poly:
    """Exact characteristic polynomial det(tI - A) of a rational matrix."""
    n = len(matrix)
    if n == 0:
        return Poly([1])
    flat = [flint.fmpq(Fraction(x).numerator, Fraction(x).denominator) for row in matrix for x in row]
    cp = flint.fmpq_mat(n, n, flat).charpoly()
    coeffs = []
    for c in cp.coeffs():
        c = flint.fmpq(c)
        coeffs.append(Fraction(int(c.p), int(c.q)))
    return Poly(coeffs)
