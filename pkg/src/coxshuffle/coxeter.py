"""Finite Coxeter groups realized through explicit root systems.

Roots are coefficient vectors in the basis of simple roots, with exact
entries (ints for crystallographic types, elements of Q(2cos(pi/m)) for
H3, H4 and I2(m)).  The ambient space is always the essential one: its
dimension is the rank and the simple roots form a basis.

Group elements act on the left on root vectors and are stored as
permutations of the root list.  Roots ``0..N-1`` are the positive roots
(the first ``rank`` of them simple), root ``r + N`` is ``-root r``.  After
construction every descent, length and coset query is integer-only.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .fields import two_cos

__all__ = [
    "CoxeterGroup",
    "SimpleSubsetClass",
    "UnsupportedGroupError",
    "build_group",
    "parse_type",
    "SUPPORTED",
]


class UnsupportedGroupError(ValueError):
    pass


# type label -> (min rank, max rank); I2 bounds refer to m
SUPPORTED = {
    "A": (1, 7),
    "B": (2, 5),
    "C": (2, 5),
    "D": (3, 5),
    "G": (2, 2),
    "F": (4, 4),
    "H": (3, 4),
    "I2": (2, 30),
}

_EXPONENTS = {
    "G2": (1, 5),
    "F4": (1, 5, 7, 11),
    "H3": (1, 5, 9),
    "H4": (1, 11, 19, 29),
}

_BAD_PRIMES = {"A": frozenset(), "B": frozenset({2}), "C": frozenset({2}), "D": frozenset({2}),
               "G": frozenset({2, 3}), "F": frozenset({2, 3})}


def parse_type(label: str, rank: int | None = None) -> tuple[str, int]:
    """Normalize a type label.

    Accepts ``("B", 3)``, ``"B3"``, ``"G2"``, ``"H4"``, ``"I2(7)"`` or
    ``("I2", 7)``.  Returns ``(family, parameter)`` where the parameter is
    the rank, or m for dihedral groups.
    """
    s = label.strip().upper().replace(" ", "")
    if s.startswith("I2"):
        rest = s[2:].strip("()")
        m = int(rest) if rest else rank
        if m is None:
            raise UnsupportedGroupError("I2 needs m, e.g. I2(5)")
        return "I2", m
    fam = s[0]
    rest = s[1:]
    if rest:
        r = int(rest)
        if rank is not None and rank != r:
            raise UnsupportedGroupError(f"conflicting ranks in {label!r} and rank={rank}")
        rank = r
    if rank is None:
        raise UnsupportedGroupError(f"type {label!r} needs a rank")
    return fam, rank


def _check_supported(fam: str, param: int):
    if fam not in SUPPORTED:
        raise UnsupportedGroupError(
            f"unsupported type {fam!r}; supported: A(n<=7), B/C(n<=5), D(n<=5), G2, F4, H3, H4, I2(m<=30)")
    lo, hi = SUPPORTED[fam]
    if not lo <= param <= hi:
        what = "m" if fam == "I2" else "rank"
        raise UnsupportedGroupError(f"unsupported {fam} {what} {param}: must satisfy {lo} <= {what} <= {hi}")


def _cartan(fam: str, n: int) -> list[list]:
    """Generalized Cartan matrix a[i][j] = <alpha_i^vee, alpha_j> (Bourbaki numbering, 0-based)."""
    if fam == "I2":
        c = two_cos(n)
        return [[2, -c], [-c, 2]]
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if fam == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif fam in ("B", "C"):
        for i in range(n - 2):
            link(i, i + 1)
        if fam == "B":
            link(n - 2, n - 1, -1, -2)
        else:
            link(n - 2, n - 1, -2, -1)
    elif fam == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif fam == "G":
        link(0, 1, -3, -1)
    elif fam == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif fam == "H":
        t = two_cos(5)
        link(0, 1, -t, -t)
        for i in range(1, n - 1):
            link(i, i + 1)
        for i in range(n):
            a[i][i] = t * 0 + 2
    return a


def _ambient_simple_roots(fam: str, n: int):
    """Standard ambient coordinates of the simple roots, for the classical and G2/F4 types."""
    F = Fraction

    def e(i, dim, c=1):
        v = [F(0)] * dim
        v[i] = F(c)
        return v

    def diff(i, j, dim):
        v = e(i, dim)
        v[j] -= 1
        return v

    if fam == "A":
        return [diff(i, i + 1, n + 1) for i in range(n)]
    if fam in ("B", "C", "D"):
        roots = [diff(i, i + 1, n) for i in range(n - 1)]
        if fam == "B":
            roots.append(e(n - 1, n))
        elif fam == "C":
            roots.append(e(n - 1, n, 2))
        else:
            v = e(n - 2, n)
            v[n - 1] = F(1)
            roots.append(v)
        return roots
    if fam == "G":
        return [[F(1), F(-1), F(0)], [F(-2), F(1), F(1)]]
    if fam == "F":
        h = F(1, 2)
        return [diff(1, 2, 4), diff(2, 3, 4), e(3, 4), [h, -h, -h, -h]]
    return None


@dataclass(frozen=True)
class SimpleSubsetClass:
    """A W-equivalence class of subsets of the simple roots (J ~ K iff w(J) = K)."""

    representative: frozenset
    members: tuple
    size: int
    rank: int

    @property
    def member_masks(self) -> tuple:
        return tuple(sum(1 << i for i in m) for m in self.members)


class CoxeterGroup:
    """A finite Coxeter group together with a chosen root system.

    Use :func:`build_group` rather than calling the constructor directly.
    """

    def __init__(self, family: str, param: int):
        _check_supported(family, param)
        self.family = family
        self.param = param
        if family == "I2":
            self.rank = 2
            self.m = param
            self.label = f"I2({param})"
        else:
            self.rank = param
            self.m = None
            self.label = f"{family}{param}"
        self.crystallographic = family not in ("H", "I2")
        self.cartan = _cartan(family, param)
        self._build_roots()
        self._build_elements()

    # ------------------------------------------------------------------ roots
    def _reflect(self, i: int, v: tuple) -> tuple:
        a = self.cartan[i]
        c = sum((a[j] * v[j] for j in range(self.rank)), 0 * v[0])
        if c == 0:
            return v
        out = list(v)
        out[i] = out[i] - c
        return tuple(out)

    def _build_roots(self):
        n = self.rank
        zero = self.cartan[0][0] * 0
        simple = [tuple(zero + int(i == j) for j in range(n)) for i in range(n)]
        pos = list(simple)
        seen = {r: k for k, r in enumerate(pos)}
        queue = deque(pos)
        while queue:
            beta = queue.popleft()
            for i in range(n):
                if beta == simple[i]:
                    continue
                gamma = self._reflect(i, beta)
                if gamma not in seen:
                    seen[gamma] = len(pos)
                    pos.append(gamma)
                    queue.append(gamma)
        self.n_pos = N = len(pos)
        self.roots = pos + [tuple(-c for c in r) for r in pos]
        self.root_index = {r: k for k, r in enumerate(self.roots)}
        self.support_mask = [sum(1 << j for j, c in enumerate(r) if c != 0) for r in self.roots]
        # simple reflections as permutations of root indices
        self.generator_perms = []
        for i in range(n):
            self.generator_perms.append(tuple(self.root_index[self._reflect(i, r)] for r in self.roots))
        if any(len(set(p)) != 2 * N for p in self.generator_perms):
            raise AssertionError("simple reflection is not a permutation of the roots")

    def negate(self, r: int) -> int:
        N = self.n_pos
        return r + N if r < N else r - N

    def is_positive(self, r: int) -> bool:
        return r < self.n_pos

    # --------------------------------------------------------------- elements
    def _build_elements(self):
        n, N = self.rank, self.n_pos
        identity = tuple(range(2 * N))
        perms = [identity]
        words = [()]
        index = {identity[:n]: 0}
        rmul = []
        gens = self.generator_perms
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                pw = perms[w]
                row = []
                for i, g in enumerate(gens):
                    key = tuple(pw[g[j]] for j in range(n))
                    u = index.get(key)
                    if u is None:
                        u = len(perms)
                        index[key] = u
                        perms.append(tuple(pw[x] for x in g))
                        words.append(words[w] + (i,))
                        nxt.append(u)
                    row.append(u)
                rmul.append(row)
            frontier = nxt
        # rows were appended in BFS order, which is index order
        self.perms = perms
        self.words = words
        self.index = index
        self.rmul_gen = rmul
        self.order = len(perms)
        self.lengths = [len(w) for w in words]
        self.descent_masks = [sum(1 << i for i in range(n) if p[i] >= N) for p in perms]
        self.identity = 0
        self.longest = max(range(self.order), key=self.lengths.__getitem__)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"CoxeterGroup({self.label}, order={self.order})"

    @property
    def elements(self) -> range:
        return range(self.order)

    def key_of(self, perm: Sequence[int]) -> int:
        return self.index[tuple(perm[j] for j in range(self.rank))]

    def mul(self, u: int, v: int) -> int:
        pu, pv = self.perms[u], self.perms[v]
        return self.index[tuple(pu[pv[j]] for j in range(self.rank))]

    @cached_property
    def inverses(self) -> list[int]:
        out = []
        for p in self.perms:
            inv = [0] * len(p)
            for r, s in enumerate(p):
                inv[s] = r
            out.append(self.index[tuple(inv[: self.rank])])
        return out

    def inverse(self, w: int) -> int:
        return self.inverses[w]

    @cached_property
    def _np_index(self):
        """Integer codes of element keys, sorted, for vectorized lookup."""
        base = 2 * self.n_pos
        P = np.array(self.perms, dtype=np.int64)
        weights = base ** np.arange(self.rank, dtype=np.int64)
        codes = P[:, : self.rank] @ weights
        order = np.argsort(codes)
        return P, weights, codes[order], order

    def mul_row(self, u: int) -> np.ndarray:
        """Vector whose entry v is the index of u*v."""
        P, weights, sorted_codes, order = self._np_index
        images = P[u][P[:, : self.rank]]
        codes = images @ weights
        return order[np.searchsorted(sorted_codes, codes)]

    def multiplication_table(self) -> np.ndarray:
        """table[u, v] = index of u*v.  Quadratic in |W|; meant for |W| up to a few thousand."""
        if not hasattr(self, "_mtable"):
            self._mtable = np.stack([self.mul_row(u) for u in range(self.order)])
        return self._mtable

    def act(self, w: int, r: int) -> int:
        return self.perms[w][r]

    def length(self, w: int) -> int:
        return self.lengths[w]

    def inversion_count(self, w: int) -> int:
        """Number of positive roots sent to negative roots (equals the length)."""
        N = self.n_pos
        p = self.perms[w]
        return sum(1 for r in range(N) if p[r] >= N)

    def element_from_word(self, word: Iterable[int]) -> int:
        w = 0
        for i in word:
            w = self.rmul_gen[w][i]
        return w

    # ---------------------------------------------------------------- subsets
    @staticmethod
    def mask_of(K: Iterable[int]) -> int:
        return sum(1 << i for i in set(K))

    def subset_of(self, mask: int) -> frozenset:
        return frozenset(i for i in range(self.rank) if mask >> i & 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.rank) - 1

    def descent_mask(self, w: int) -> int:
        return self.descent_masks[w]

    def descent_set(self, w: int) -> frozenset:
        """Simple roots (by index) sent to negative roots by w."""
        return self.subset_of(self.descent_masks[w])

    def descent_count(self, w: int) -> int:
        return bin(self.descent_masks[w]).count("1")

    def is_min_coset_rep(self, w: int, K: Iterable[int]) -> bool:
        """True iff w is the unique shortest element of the coset w W_K."""
        return not (self.descent_masks[w] & self.mask_of(K))

    def min_coset_rep(self, w: int, kmask: int) -> int:
        """Shortest element of w W_K, by stripping descents in K."""
        rmul = self.rmul_gen
        while True:
            d = self.descent_masks[w] & kmask
            if not d:
                return w
            w = rmul[w][(d & -d).bit_length() - 1]

    def parabolic_mask(self, kmask: int) -> list[int]:
        """Elements of W_K (K as bitmask), in BFS order from the identity."""
        gens = [i for i in range(self.rank) if kmask >> i & 1]
        seen = {0}
        out = [0]
        queue = deque([0])
        while queue:
            w = queue.popleft()
            for i in gens:
                u = self.rmul_gen[w][i]
                if u not in seen:
                    seen.add(u)
                    out.append(u)
                    queue.append(u)
        return out

    def parabolic_subgroup(self, K: Iterable[int]) -> frozenset:
        return frozenset(self.parabolic_mask(self.mask_of(K)))

    @cached_property
    def _parabolic_orders(self) -> dict:
        return {}

    def parabolic_order(self, kmask: int) -> int:
        cache = self._parabolic_orders
        if kmask not in cache:
            cache[kmask] = len(self.parabolic_mask(kmask))
        return cache[kmask]

    def parabolic_roots(self, kmask: int) -> list[int]:
        """Positive roots of the parabolic root subsystem spanned by K."""
        return [r for r in range(self.n_pos) if self.support_mask[r] & ~kmask == 0]

    def normalizer_order(self, K: Iterable[int] | int) -> int:
        """|N_W(W_K)|.  w normalizes W_K iff w maps K into the root subsystem of K."""
        kmask = K if isinstance(K, int) else self.mask_of(K)
        ks = [i for i in range(self.rank) if kmask >> i & 1]
        sup = self.support_mask
        count = 0
        for p in self.perms:
            if all(sup[p[i]] & ~kmask == 0 for i in ks):
                count += 1
        return count

    @cached_property
    def _subset_data(self):
        """Union-find over subset masks, plus counts[K][D] = #{w : Des(w)=D, w(K) in Pi}."""
        n = self.rank
        size = 1 << n
        parent = list(range(size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        counts = [dict() for _ in range(size)]
        for w, p in enumerate(self.perms):
            simple_to_simple = 0
            image = [0] * n
            for i in range(n):
                if p[i] < n:
                    simple_to_simple |= 1 << i
                    image[i] = 1 << p[i]
            d = self.descent_masks[w]
            sub = simple_to_simple
            while True:
                k = sub
                img = 0
                kk = k
                while kk:
                    low = kk & -kk
                    img |= image[low.bit_length() - 1]
                    kk ^= low
                a, b = find(k), find(img)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                cnt = counts[k]
                cnt[d] = cnt.get(d, 0) + 1
                if sub == 0:
                    break
                sub = (sub - 1) & simple_to_simple
        classes = {}
        for k in range(size):
            classes.setdefault(find(k), []).append(k)
        return classes, counts

    def subset_classes(self) -> list[SimpleSubsetClass]:
        """Partition of all subsets of the simple roots into W-equivalence classes."""
        classes, _ = self._subset_data
        out = []
        for members in sorted(classes.values(), key=lambda ms: (bin(ms[0]).count("1"), ms[0])):
            members = sorted(members, key=lambda k: (bin(k).count("1"), k))
            out.append(SimpleSubsetClass(
                representative=self.subset_of(members[0]),
                members=tuple(self.subset_of(k) for k in members),
                size=len(members),
                rank=bin(members[0]).count("1"),
            ))
        return out

    @cached_property
    def class_of_mask(self) -> dict[int, int]:
        """Subset mask -> representative mask of its equivalence class."""
        classes, _ = self._subset_data
        out = {}
        for members in classes.values():
            rep = min(members, key=lambda k: (bin(k).count("1"), k))
            for k in members:
                out[k] = rep
        return out

    def class_size(self, kmask: int) -> int:
        rep = self.class_of_mask[kmask]
        return sum(1 for v in self.class_of_mask.values() if v == rep)

    def simple_image_counts(self) -> list[dict]:
        """counts[K][D] = #{w : Des(w) = D and w(K) is a set of simple roots}."""
        return self._subset_data[1]

    # ------------------------------------------------------------ linear data
    def matrix(self, w: int) -> list[list]:
        """Matrix of w in the simple-root basis (column j = coordinates of w(alpha_j))."""
        cols = [self.roots[self.perms[w][j]] for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    @cached_property
    def conjugacy_class_of(self) -> list[int]:
        """Element -> smallest index in its conjugacy class."""
        parent = list(range(self.order))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        n = self.rank
        gens = self.generator_perms
        index = self.index
        for w, p in enumerate(self.perms):
            for g in gens:
                # s w s, with s an involution
                u = index[tuple(g[p[g[j]]] for j in range(n))]
                a, b = find(w), find(u)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return [find(w) for w in range(self.order)]

    @cached_property
    def _fixed_dims(self) -> list[int]:
        rep_dim = {}
        out = []
        n = self.rank
        for w, c in enumerate(self.conjugacy_class_of):
            if c not in rep_dim:
                m = self.matrix(c)
                diff = [[m[i][j] - int(i == j) for j in range(n)] for i in range(n)]
                rep_dim[c] = n - linalg.rank(diff)
            out.append(rep_dim[c])
        return out

    def fixed_space_dimension(self, w: int) -> int:
        """dim ker(w - 1) on the essential reflection representation."""
        return self._fixed_dims[w]

    def fixed_dimension_counts(self) -> list[int]:
        """counts[d] = #{w : dim fix(w) = d}, d = 0..rank."""
        out = [0] * (self.rank + 1)
        for d in self._fixed_dims:
            out[d] += 1
        return out

    @cached_property
    def exponents(self) -> tuple[int, ...]:
        fam, n = self.family, self.param
        if fam == "A":
            return tuple(range(1, n + 1))
        if fam in ("B", "C"):
            return tuple(range(1, 2 * n, 2))
        if fam == "D":
            return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
        if fam == "I2":
            return (1, n - 1)
        return _EXPONENTS[self.label]

    @property
    def bad_primes(self) -> frozenset | None:
        """Tabulated bad primes; None for non-crystallographic types."""
        if not self.crystallographic:
            return None
        return _BAD_PRIMES[self.family]

    def bad_primes_from_roots(self) -> frozenset | None:
        """Primes dividing some coefficient of a root over the simple roots."""
        if not self.crystallographic:
            return None
        out = set()
        for r in self.roots[: self.n_pos]:
            for c in r:
                c = abs(int(c))
                p = 2
                while c > 1:
                    while c % p == 0:
                        out.add(p)
                        c //= p
                    p += 1
        return frozenset(out)

    @cached_property
    def ambient_simple_roots(self):
        return _ambient_simple_roots(self.family, self.param)

    @cached_property
    def ambient_roots(self) -> list[tuple]:
        """Ambient coordinates of every root (classical, G2 and F4 types only)."""
        simple = self.ambient_simple_roots
        if simple is None:
            raise ValueError(f"no ambient realization for {self.label}")
        dim = len(simple[0])
        out = []
        for r in self.roots:
            v = [Fraction(0)] * dim
            for c, s in zip(r, simple):
                if c:
                    for k in range(dim):
                        v[k] += int(c) * s[k]
            out.append(tuple(v))
        return out

    def height(self, r: int):
        return sum(self.roots[r], 0 * self.roots[r][0])

    def summary(self) -> dict:
        return {
            "type": self.label,
            "rank": self.rank,
            "order": self.order,
            "n_roots": len(self.roots),
            "exponents": list(self.exponents),
            "crystallographic": self.crystallographic,
            "bad_primes": None if self.bad_primes is None else sorted(self.bad_primes),
            "longest_element_word": list(self.words[self.longest]),
            "subset_classes": [
                {"representative": sorted(c.representative), "size": c.size, "rank": c.rank,
                 "members": [sorted(m) for m in c.members]}
                for c in self.subset_classes()
            ],
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)

    # ------------------------------------------------- permutation encodings
    @cached_property
    def _ambient_lookup(self) -> dict:
        return {v: r for r, v in enumerate(self.ambient_roots)}

    def element_from_signed_permutation(self, images: Sequence[int]) -> int:
        """Element sending e_i to sign(c)*e_|c| for images[i-1] = c (1-based signed entries).

        Valid for types A (unsigned), B, C and D with their standard ambient coordinates.
        """
        lookup = self._ambient_lookup
        dim = len(self.ambient_roots[0])
        if len(images) != dim:
            raise ValueError(f"expected {dim} images, got {len(images)}")
        keys = []
        for j in range(self.rank):
            v = self.ambient_roots[j]
            out = [Fraction(0)] * dim
            for i, c in enumerate(images):
                if v[i]:
                    out[abs(c) - 1] += v[i] if c > 0 else -v[i]
            r = lookup.get(tuple(out))
            if r is None:
                raise ValueError(f"{list(images)} does not preserve the root system of {self.label}")
            keys.append(r)
        return self.index[tuple(keys)]

    def element_from_permutation(self, images: Sequence[int]) -> int:
        """Type A: element sending e_i to e_{images[i-1]} (images 1-based)."""
        return self.element_from_signed_permutation(list(images))

    def signed_permutation(self, w: int) -> tuple[int, ...]:
        """Inverse of :meth:`element_from_signed_permutation` (types A, B, C, D)."""
        cache = self.__dict__.setdefault("_signed_perm_cache", None)
        if cache is None:
            cache = self._build_signed_perm_cache()
            self.__dict__["_signed_perm_cache"] = cache
        return cache[w]

    def _build_signed_perm_cache(self) -> list[tuple]:
        dim = len(self.ambient_roots[0])
        simple = self.ambient_simple_roots
        gens = []
        for a in simple:
            aa = sum(x * x for x in a)
            mat = []
            for i in range(dim):
                e = [Fraction(int(i == k)) for k in range(dim)]
                dot = sum(x * y for x, y in zip(e, a))
                mat.append([e[k] - 2 * dot / aa * a[k] for k in range(dim)])
            gens.append(mat)  # row i = image of e_i
        out = [None] * self.order
        out[0] = tuple(range(1, dim + 1))
        for w in range(1, self.order):
            word = self.words[w]
            parent = self.element_from_word(word[:-1])
            g = gens[word[-1]]
            prev = out[parent]
            # w = parent * s: w(e_i) = parent(s(e_i))
            imgs = []
            for i in range(dim):
                row = g[i]
                nz = [(k, row[k]) for k in range(dim) if row[k] != 0]
                if len(nz) != 1 or abs(nz[0][1]) != 1:
                    raise ValueError(f"{self.label} generators are not signed permutations")
                k, s = nz[0]
                c = prev[k]
                imgs.append(c if s > 0 else -c)
            out[w] = tuple(imgs)
        return out


_CACHE: dict = {}


def build_group(type_label: str, rank: int | None = None) -> CoxeterGroup:
    """Construct (and memoize) a supported finite Coxeter group.

    >>> build_group("G2").order
    12
    """
    fam, param = parse_type(type_label, rank)
    if fam in ("G", "F", "H") and f"{fam}{param}" not in ("G2", "F4", "H3", "H4"):
        raise UnsupportedGroupError(f"unsupported type {fam}{param}")
    _check_supported(fam, param)
    key = (fam, param)
    if key not in _CACHE:
        _CACHE[key] = CoxeterGroup(fam, param)
    return _CACHE[key]
