"""Intersection lattices of hyperplane arrangements.

A flat X is identified with the set of hyperplanes containing it, stored
as a Python int bitmask.  The order is reverse inclusion of subspaces, so
X <= Y iff hyperplanes(X) is a subset of hyperplanes(Y); the ambient space
V (empty mask) is the minimum.

Characteristic polynomials use the dimension exponent:
chi(L^Y, x) = sum over Z >= Y of mu(Y, Z) x^dim(Z).
"""
from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from . import linalg
from .polynomial import Poly

__all__ = ["IntersectionLattice", "lattice_from_hyperplanes"]


def _to_words(masks: Sequence[int], nbits: int) -> np.ndarray:
    """Split arbitrary-width bitmasks into an (N, words) uint64 array."""
    nwords = max(1, (nbits + 63) // 64)
    out = np.zeros((len(masks), nwords), dtype=np.uint64)
    lim = (1 << 64) - 1
    for i, m in enumerate(masks):
        for w in range(nwords):
            out[i, w] = (m >> (64 * w)) & lim
    return out


class IntersectionLattice:
    """Poset of flats with dimensions, Moebius values and characteristic polynomials.

    Parameters
    ----------
    masks : list of int
        Hyperplane sets of the flats; must contain 0 (the ambient space).
    dims : list of int
        Affine dimension of each flat.
    n_hyperplanes, ambient_dim : int
    """

    def __init__(self, masks: Sequence[int], dims: Sequence[int], n_hyperplanes: int, ambient_dim: int):
        order = sorted(range(len(masks)), key=lambda i: (-dims[i], masks[i]))
        self.masks = [masks[i] for i in order]
        self.dims = [dims[i] for i in order]
        self.n_hyperplanes = n_hyperplanes
        self.ambient_dim = ambient_dim
        self.node_of = {m: i for i, m in enumerate(self.masks)}
        if self.masks[0] != 0 or self.dims[0] != ambient_dim:
            raise ValueError("the ambient space must be a node")
        self._words = _to_words(self.masks, n_hyperplanes)
        self._dims_np = np.array(self.dims)
        self._mobius_rows: dict[int, dict[int, int]] = {}
        self._chi: dict[int, Poly] = {}

    def __len__(self):
        return len(self.masks)

    @property
    def nodes(self) -> range:
        return range(len(self.masks))

    def dim(self, node: int) -> int:
        return self.dims[node]

    def leq(self, x: int, y: int) -> bool:
        return self.masks[x] & ~self.masks[y] == 0

    def upper_set(self, y: int) -> np.ndarray:
        """Indices of nodes Z >= Y, in order of decreasing dimension."""
        w = self._words
        inside = np.all((w[y][None, :] & ~w) == 0, axis=1)
        return np.nonzero(inside)[0]

    def mobius_row(self, y: int) -> dict[int, int]:
        """{Z: mu(Y, Z)} for all Z >= Y."""
        if y in self._mobius_rows:
            return self._mobius_rows[y]
        up = self.upper_set(y)
        w = self._words[up]
        dims = self._dims_np[up]
        mu = np.zeros(len(up), dtype=np.int64)
        mu[0] = 1
        # nodes in `up` are sorted by decreasing dimension, with y first
        start = 1
        while start < len(up):
            d = dims[start]
            end = start
            while end < len(up) and dims[end] == d:
                end += 1
            # below[i, j]: earlier node j lies below layer node i
            layer = w[start:end]
            prev = w[:start]
            below = np.all((prev[None, :, :] & ~layer[:, None, :]) == 0, axis=2)
            mu[start:end] = -(below.astype(np.int64) @ mu[:start])
            start = end
        row = {int(z): int(m) for z, m in zip(up, mu) if m}
        self._mobius_rows[y] = row
        return row

    def mobius(self, x: int, y: int) -> int:
        if not self.leq(x, y):
            return 0
        return self.mobius_row(x).get(y, 0)

    def charpoly(self, y: int = 0) -> Poly:
        """chi(L^Y, x) with the dimension exponent."""
        if y not in self._chi:
            coeffs = [0] * (self.dims[y] + 1)
            for z, m in self.mobius_row(y).items():
                coeffs[self.dims[z]] += m
            self._chi[y] = Poly(coeffs)
        return self._chi[y]

    def set_charpoly(self, y: int, poly: Poly):
        """Record chi(L^Y) obtained from an isomorphic upper set (symmetry shortcut)."""
        self._chi[y] = poly

    def chamber_count(self) -> int:
        return sum(abs(m) for m in self.mobius_row(0).values())

    def eigen_profile(self) -> dict[int, int]:
        """codim -> sum of |mu(V, X)| over flats X of that codimension."""
        out: dict[int, int] = {}
        n = self.ambient_dim
        for z, m in self.mobius_row(0).items():
            out[n - self.dims[z]] = out.get(n - self.dims[z], 0) + abs(m)
        return out

    def to_json(self) -> dict:
        row = self.mobius_row(0)
        return {
            "ambient_dim": self.ambient_dim,
            "n_hyperplanes": self.n_hyperplanes,
            "nodes": [
                {"hyperplanes": [j for j in range(self.n_hyperplanes) if m >> j & 1],
                 "dim": d, "mobius": row.get(i, 0)}
                for i, (m, d) in enumerate(zip(self.masks, self.dims))
            ],
            "charpoly": self.charpoly(0).to_json(),
        }


def lattice_from_hyperplanes(hyperplanes: Sequence, ambient_dim: int) -> IntersectionLattice:
    """Build the intersection lattice of affine hyperplanes a.v = b by linear algebra.

    ``hyperplanes`` is a list of (normal, offset).  Entries may be ints,
    Fractions or number-field elements.  Empty intersections are dropped.
    """
    rows = [list(a) + [b] for a, b in hyperplanes]
    m = len(rows)
    n = ambient_dim

    def closure(mask: int):
        sel = [rows[j] for j in range(m) if mask >> j & 1]
        red, pivots = linalg.rref(sel)
        if n in pivots:
            return None, None
        closed = 0
        for j in range(m):
            if mask >> j & 1 or linalg.in_row_span(red, pivots, rows[j]):
                closed |= 1 << j
        return closed, n - len(pivots)

    masks = [0]
    dims = [n]
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for j in range(m):
            if x >> j & 1:
                continue
            closed, d = closure(x | 1 << j)
            if closed is None or closed in seen:
                continue
            seen.add(closed)
            masks.append(closed)
            dims.append(d)
            queue.append(closed)
    return IntersectionLattice(masks, dims, m, n)
