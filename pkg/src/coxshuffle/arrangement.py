"""Hyperplane arrangements, faces, the Tits projection and BHR chamber walks.

Two kinds of arrangement share one interface:

* reflection arrangements of a :class:`CoxeterGroup`, where faces are the
  cosets wW_K (w a minimal coset representative) and everything is computed
  from the root permutations;
* generic rational arrangements a.v = b (possibly non-central), where faces
  are the realizable sign vectors, found by exact feasibility tests.

Sign vectors are stored as two bitmasks over the hyperplanes: ``zero_mask``
(hyperplanes containing the face) and ``neg_mask`` (hyperplanes with the
face on the negative side).  The Tits projection F o C is then
``neg(F) | (neg(C) & zero(F))``.

Face weights follow v_x(F) = chi(L^z(F), x) / (x^n |z^-1(z(F))|) with the
dimension-exponent characteristic polynomial.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from pathlib import Path
from typing import Sequence

import flint
import numpy as np

from .descent import measure_M, spectrum_profile
from .group_algebra import SignedMeasure, SymbolicMeasure
from .lattice import IntersectionLattice, lattice_from_hyperplanes
from .polyhedra import solve_strict_system
from .polynomial import Poly

__all__ = [
    "Arrangement",
    "Face",
    "FaceWeights",
    "IdentityFailure",
    "NotApplicableError",
    "ResourceLimitError",
    "reflection_arrangement",
    "generic_arrangement",
    "load_arrangement",
    "test_arrangements",
    "zero_map_fiber_size",
    "tits_project",
    "tits_project_coset",
    "tits_project_fewest",
    "face_weights",
    "measure_H",
    "measure_H_parabolic",
    "measure_H_face_weights",
    "bhr_transition_matrix",
    "bhr_spectrum",
    "verify_bhr_spectrum",
    "verify_identities",
    "verify_lattice_identities",
    "good_prime_positivity",
]

MAX_GENERIC_HYPERPLANES = 14


class ResourceLimitError(RuntimeError):
    pass


class NotApplicableError(ValueError):
    pass


class IdentityFailure(AssertionError):
    """An identity that must hold exactly did not."""


def _popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class Face:
    zero_mask: int
    neg_mask: int
    node: int
    coset: tuple | None = None     # (w, K mask) for reflection faces
    witness: tuple | None = None   # rational point for generic faces

    def sign_vector(self, m: int) -> tuple[int, ...]:
        return tuple(0 if self.zero_mask >> j & 1 else (-1 if self.neg_mask >> j & 1 else 1)
                     for j in range(m))

    @property
    def is_chamber(self) -> bool:
        return self.zero_mask == 0


class Arrangement:
    """A real hyperplane arrangement with its faces and intersection lattice.

    Build instances with :func:`reflection_arrangement` or :func:`generic_arrangement`.
    """

    kind: str
    dim: int
    hyperplanes: list
    gamma: tuple
    lattice: IntersectionLattice

    def __len__(self):
        return len(self.hyperplanes)

    @property
    def n_hyperplanes(self) -> int:
        return len(self.hyperplanes)

    @property
    def is_central(self) -> bool:
        return all(b == 0 for _, b in self.hyperplanes)

    # subclasses fill these
    def faces(self) -> list[Face]:
        raise NotImplementedError

    def chamber_masks(self) -> np.ndarray:
        """neg_mask of every chamber, in chamber order."""
        raise NotImplementedError

    def face_arrays(self):
        """(zero masks, neg masks, node ids) as int64 arrays over all faces."""
        raise NotImplementedError

    @property
    def n_chambers(self) -> int:
        return len(self.chamber_masks())

    def chamber_of_mask(self, neg_mask: int) -> int:
        masks = self._sorted_chambers
        i = int(np.searchsorted(masks[0], neg_mask))
        if i >= len(masks[0]) or masks[0][i] != neg_mask:
            raise KeyError(f"no chamber with sign mask {neg_mask}")
        return int(masks[1][i])

    @property
    def _sorted_chambers(self):
        if not hasattr(self, "_sorted_chamber_cache"):
            cm = self.chamber_masks()
            order = np.argsort(cm)
            self._sorted_chamber_cache = (cm[order], order)
        return self._sorted_chamber_cache

    def fiber_sizes(self) -> Counter:
        """node -> number of faces with that support."""
        if not hasattr(self, "_fibers"):
            _, _, nodes = self.face_arrays()
            self._fibers = Counter({int(k): int(v) for k, v in zip(*np.unique(nodes, return_counts=True))})
        return self._fibers

    def node_charpoly(self, node: int) -> Poly:
        return self.lattice.charpoly(node)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "hyperplanes": [{"normal": [str(c) for c in a], "offset": str(b)} for a, b in self.hyperplanes],
            "gamma": [str(c) for c in self.gamma],
            "n_faces": len(self.face_arrays()[0]),
            "n_chambers": self.n_chambers,
            "lattice": self.lattice.to_json(),
        }


# --------------------------------------------------------------------------
# reflection arrangements


class ReflectionArrangement(Arrangement):
    """Root hyperplanes of a finite Coxeter group in coweight coordinates.

    A point v is given by its pairings v_i = <alpha_i, v> with the simple
    roots, so the hyperplane of a positive root beta has normal beta (its
    simple-root coefficients) and the fundamental chamber is the positive
    orthant.  gamma = (1, ..., 1).
    """

    kind = "reflection"

    def __init__(self, G, exhaustive: bool | None = None):
        if G.n_pos > 62:
            raise ResourceLimitError(f"{G.label} has more than 62 reflecting hyperplanes")
        self.group = G
        self.dim = G.rank
        N = G.n_pos
        zero = G.roots[0][0] * 0
        self.hyperplanes = [(G.roots[r], zero) for r in range(N)]
        self.gamma = tuple(zero + 1 for _ in range(G.rank))
        P = np.array(G.perms, dtype=np.int64)
        bits = np.int64(1) << np.arange(N, dtype=np.int64)
        inv = np.array(G.inverses, dtype=np.int64)
        # invmask[u] = {beta > 0 : u(beta) < 0}
        invmask = ((P[:, :N] >= N).astype(np.int64) * bits).sum(axis=1)
        # chamber c lies on the negative side of beta iff c^-1(beta) < 0
        self._chamber_neg = invmask[inv]
        desc = np.array(G.descent_masks, dtype=np.int64)
        zeros, negs, cosets_w, cosets_k = [], [], [], []
        self._k_roots = {}
        for K in range(1 << G.rank):
            roots_k = G.parabolic_roots(K)
            self._k_roots[K] = roots_k
            reps = np.nonzero((desc & K) == 0)[0]
            if roots_k:
                imgs = P[np.ix_(reps, roots_k)] % N
                z = np.bitwise_or.reduce(np.int64(1) << imgs, axis=1)
            else:
                z = np.zeros(len(reps), dtype=np.int64)
            zeros.append(z)
            negs.append(self._chamber_neg[reps] & ~z)
            cosets_w.append(reps)
            cosets_k.append(np.full(len(reps), K, dtype=np.int64))
        self._zero = np.concatenate(zeros)
        self._neg = np.concatenate(negs)
        self._coset_w = np.concatenate(cosets_w)
        self._coset_k = np.concatenate(cosets_k)
        uniq, inverse = np.unique(self._zero, return_inverse=True)
        ranks = {}
        for K, z in zip(self._coset_k, self._zero):
            ranks.setdefault(int(z), _popcount(int(K)))
        masks = [int(m) for m in uniq]
        self.lattice = IntersectionLattice(masks, [G.rank - ranks[m] for m in masks], N, G.rank)
        node_of = self.lattice.node_of
        remap = np.array([node_of[m] for m in masks], dtype=np.int64)
        self._node = remap[inverse]
        # chi is W-invariant: every node produced by a face wW_K has the chi of Fix(W_K)
        self.fix_node = {K: node_of[int(sum(1 << r for r in self._k_roots[K]))] for K in range(1 << G.rank)}
        if exhaustive is None:
            exhaustive = G.rank <= 4
        self.exhaustive = exhaustive
        if not exhaustive:
            for K, z in zip(self._coset_k, self._node):
                self.lattice.set_charpoly(int(z), self.lattice.charpoly(self.fix_node[int(K)]))

    def face_arrays(self):
        return self._zero, self._neg, self._node

    def chamber_masks(self) -> np.ndarray:
        return self._chamber_neg

    def charpoly_K(self, K: int) -> Poly:
        """chi(L^Fix(W_K), x)."""
        return self.lattice.charpoly(self.fix_node[K])

    def faces(self) -> list[Face]:
        return [Face(int(z), int(n), int(v), (int(w), int(k)))
                for z, n, v, w, k in zip(self._zero, self._neg, self._node, self._coset_w, self._coset_k)]

    def face_index(self, w: int, K: int) -> int:
        """Position of the face wW_K (w must be the minimal representative)."""
        if not hasattr(self, "_face_pos"):
            self._face_pos = {(int(w_), int(k_)): i for i, (w_, k_) in enumerate(zip(self._coset_w, self._coset_k))}
        return self._face_pos[(w, K)]


@lru_cache(maxsize=None)
def reflection_arrangement(G) -> ReflectionArrangement:
    return ReflectionArrangement(G)


# --------------------------------------------------------------------------
# generic arrangements


class GenericArrangement(Arrangement):
    kind = "generic"

    def __init__(self, hyperplanes: Sequence, dim: int, gamma: Sequence | None = None,
                 max_hyperplanes: int = MAX_GENERIC_HYPERPLANES, name: str = "generic"):
        hs = [([Fraction(c) for c in a], Fraction(b)) for a, b in hyperplanes]
        if len(hs) > max_hyperplanes:
            raise ResourceLimitError(
                f"{len(hs)} hyperplanes exceeds the generic-arrangement cap of {max_hyperplanes}")
        for a, _ in hs:
            if len(a) != dim:
                raise ValueError(f"normal {a} does not have dimension {dim}")
            if all(c == 0 for c in a):
                raise ValueError("zero normal vector")
        if len({(tuple(a), b) for a, b in _normalized(hs)}) != len(hs):
            raise ValueError("repeated hyperplane")
        self.name = name
        self.dim = dim
        self._enumerate_faces(hs)
        if gamma is None:
            gamma = self._witness[next(i for i, z in enumerate(self._zero_list) if z == 0)]
        gamma = tuple(Fraction(c) for c in gamma)
        # orient every hyperplane so that gamma is on its positive side
        oriented = []
        flip = 0
        for j, (a, b) in enumerate(hs):
            s = sum(x * y for x, y in zip(a, gamma)) - b
            if s == 0:
                raise ValueError("gamma lies on a hyperplane")
            if s < 0:
                a, b = [-c for c in a], -b
                flip |= 1 << j
            oriented.append((a, b))
        self.hyperplanes = oriented
        self.gamma = gamma
        # flipping orientation swaps + and - on those hyperplanes
        self._neg_list = [(n ^ flip) & ~z for n, z in zip(self._neg_list, self._zero_list)]
        self.lattice = lattice_from_hyperplanes(self.hyperplanes, dim)
        node_of = self.lattice.node_of
        self._zero = np.array(self._zero_list, dtype=np.int64)
        self._neg = np.array(self._neg_list, dtype=np.int64)
        self._node = np.array([node_of[z] for z in self._zero_list], dtype=np.int64)
        chambers = [i for i, z in enumerate(self._zero_list) if z == 0]
        self._chamber_faces = chambers
        self._chamber_neg = self._neg[chambers]

    def _enumerate_faces(self, hs):
        n = self.dim
        # each face: (zero mask, neg mask, witness)
        faces = [(0, 0, tuple(Fraction(0) for _ in range(n)))]
        for j, (a, b) in enumerate(hs):
            new = []
            for zero, neg, wit in faces:
                val = sum(x * y for x, y in zip(a, wit)) - b
                for s in (1, 0, -1):
                    z2 = zero | (1 << j) if s == 0 else zero
                    n2 = neg | (1 << j) if s < 0 else neg
                    if (val > 0 and s > 0) or (val < 0 and s < 0) or (val == 0 and s == 0):
                        new.append((z2, n2, wit))
                        continue
                    eqs, pos = [], []
                    for i in range(j + 1):
                        ai, bi = hs[i]
                        if z2 >> i & 1:
                            eqs.append((ai, bi))
                        elif n2 >> i & 1:
                            pos.append(([-c for c in ai], -bi))
                        else:
                            pos.append((ai, bi))
                    w = solve_strict_system(eqs, pos, n)
                    if w is not None:
                        new.append((z2, n2, tuple(w)))
            faces = new
        self._zero_list = [f[0] for f in faces]
        self._neg_list = [f[1] for f in faces]
        self._witness = [f[2] for f in faces]

    def face_arrays(self):
        return self._zero, self._neg, self._node

    def chamber_masks(self) -> np.ndarray:
        return self._chamber_neg

    def faces(self) -> list[Face]:
        return [Face(int(z), int(n), int(v), None, w)
                for z, n, v, w in zip(self._zero, self._neg, self._node, self._witness)]


def _normalized(hs):
    """Scale (a, b) so the first nonzero normal entry is 1, for duplicate detection."""
    out = []
    for a, b in hs:
        lead = next(c for c in a if c != 0)
        out.append(([c / lead for c in a], b / lead))
    return out


def generic_arrangement(hyperplanes: Sequence, dim: int, gamma=None, name: str = "generic") -> GenericArrangement:
    """Arrangement of affine hyperplanes given as (normal, offset) pairs meaning normal . v = offset."""
    return GenericArrangement(hyperplanes, dim, gamma, name=name)


def load_arrangement(path) -> GenericArrangement:
    """Read a generic arrangement file.

    JSON: ``{"dim": n, "hyperplanes": [{"normal": [...], "offset": b}, ...], "gamma": [...]}``
    (entries may be ints or "p/q" strings; a hyperplane may also be a plain list
    [a_1, ..., a_n, b]).  Plain text: first line n, then one hyperplane per
    line as n + 1 rationals, optional line ``gamma`` followed by n rationals.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if data is not None:
        dim = int(data["dim"])
        hs = []
        for h in data["hyperplanes"]:
            if isinstance(h, dict):
                hs.append(([Fraction(c) for c in h["normal"]], Fraction(h.get("offset", 0))))
            else:
                hs.append(([Fraction(c) for c in h[:dim]], Fraction(h[dim]) if len(h) > dim else Fraction(0)))
        gamma = data.get("gamma")
        return generic_arrangement(hs, dim, gamma and [Fraction(c) for c in gamma], name=Path(path).stem)
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    dim = int(lines[0])
    hs, gamma = [], None
    for ln in lines[1:]:
        parts = ln.replace(",", " ").split()
        if parts[0].lower() == "gamma":
            gamma = [Fraction(c) for c in parts[1:]]
            continue
        vals = [Fraction(c) for c in parts]
        hs.append((vals[:dim], vals[dim] if len(vals) > dim else Fraction(0)))
    return generic_arrangement(hs, dim, gamma, name=Path(path).stem)


def test_arrangements() -> dict[str, GenericArrangement]:
    """Five fixed generic arrangements used by the identity checks."""
    return {
        "boolean2": generic_arrangement([([1, 0], 0), ([0, 1], 0)], 2, name="boolean2"),
        "braid_a2": generic_arrangement([([1, -1, 0], 0), ([0, 1, -1], 0), ([1, 0, -1], 0)], 3,
                                        name="braid_a2"),
        "generic_planes": generic_arrangement(
            [([1, 0, 0], 0), ([0, 1, 0], 0), ([0, 0, 1], 0), ([1, 1, 1], 1)], 3, name="generic_planes"),
        "triangle": generic_arrangement([([1, 0], 0), ([0, 1], 0), ([1, 1], 1)], 2, name="triangle"),
        "nonessential": generic_arrangement([([1, 0, 0], 0), ([0, 1, 0], 0), ([1, 1, 0], 0)], 3,
                                            name="nonessential"),
    }


# --------------------------------------------------------------------------
# lattice-level quantities


def zero_map_fiber_size(lattice: IntersectionLattice, A: Arrangement | None, Y: int) -> int:
    """(-1)^dim(Y) chi(L^Y, -1); when A is given, checked against the enumerated face count."""
    value = (-1) ** lattice.dim(Y) * lattice.charpoly(Y)(-1)
    if A is not None:
        counted = A.fiber_sizes()[Y]
        if counted != value:
            raise IdentityFailure(f"fiber of node {Y}: enumerated {counted}, formula {value}")
    return int(value)


# --------------------------------------------------------------------------
# Tits projection


def tits_project(A: Arrangement, face: Face | int, chamber: int) -> int:
    """Chamber index of F o C by sign-vector composition."""
    if isinstance(face, int):
        z, n = int(A.face_arrays()[0][face]), int(A.face_arrays()[1][face])
    else:
        z, n = face.zero_mask, face.neg_mask
    c = int(A.chamber_masks()[chamber])
    return A.chamber_of_mask(n | (c & z))


def tits_project_coset(G, w: int, K: int, c: int) -> int:
    """Group-theoretic projection of wW_K onto chamber c: c * minrep(c^-1 w W_K)."""
    return G.mul(c, G.min_coset_rep(G.mul(G.inverse(c), w), K))


def tits_project_fewest(A: Arrangement, face: Face | int, chamber: int) -> int:
    """Among chambers whose closure contains F, the one separated from C by the fewest hyperplanes."""
    if isinstance(face, int):
        z, n = int(A.face_arrays()[0][face]), int(A.face_arrays()[1][face])
    else:
        z, n = face.zero_mask, face.neg_mask
    cm = A.chamber_masks()
    c = int(cm[chamber])
    fixed = ~z
    best, best_d, ties = None, None, 0
    for i, m in enumerate(cm):
        m = int(m)
        if (m ^ n) & fixed:
            continue
        d = _popcount(m ^ c)
        if best_d is None or d < best_d:
            best, best_d, ties = i, d, 1
        elif d == best_d:
            ties += 1
    if ties != 1:
        raise IdentityFailure("nearest chamber containing the face is not unique")
    return best


# --------------------------------------------------------------------------
# face weights and the measure H


class FaceWeights:
    """v_x(F) per lattice node (weights only depend on the support).

    Numeric mode stores exact Fractions; symbolic mode stores numerator
    polynomials over x^n.
    """

    def __init__(self, A: Arrangement, x):
        self.arrangement = A
        self.symbolic = isinstance(x, str)
        if self.symbolic and x != "symbolic":
            raise ValueError(f"x must be a nonzero rational or 'symbolic', got {x!r}")
        if not self.symbolic:
            x = Fraction(x)
            if x == 0:
                raise ValueError("x must be nonzero")
        self.x = x
        fibers = A.fiber_sizes()
        n = A.dim
        self.node_values = {}
        for node, count in fibers.items():
            chi = A.node_charpoly(node)
            if self.symbolic:
                self.node_values[node] = chi / count
            else:
                self.node_values[node] = chi(x) / (x**n * count)

    def face_value(self, index: int):
        return self.node_values[int(self.arrangement.face_arrays()[2][index])]

    def values(self) -> list:
        nodes = self.arrangement.face_arrays()[2]
        return [self.node_values[int(v)] for v in nodes]

    def total(self):
        """Sum over all faces (a numerator polynomial over x^n in symbolic mode)."""
        fibers = self.arrangement.fiber_sizes()
        acc = Poly() if self.symbolic else Fraction(0)
        for node, v in self.node_values.items():
            acc = acc + v * fibers[node]
        return acc


def face_weights(A: Arrangement, x) -> FaceWeights:
    return FaceWeights(A, x)


def _parabolic_terms(G):
    """K -> |W_K| chi(L^Fix(W_K), x) / (|N_W(W_K)| |lambda(K)|), as polynomials."""
    A = reflection_arrangement(G)
    out = {}
    for K in range(1 << G.rank):
        coeff = Fraction(G.parabolic_order(K), G.normalizer_order(K) * G.class_size(K))
        out[K] = A.charpoly_K(K) * coeff
    return out


def measure_H_parabolic(G, x="symbolic"):
    """H_{W,x} from group data: sum over K in Pi - Des(w) of the parabolic face weight |W_K| chi(Fix W_K) / (|N(W_K)| |lambda(K)|)."""
    terms = _parabolic_terms(G)
    nums = {}
    for D in range(1 << G.rank):
        acc = Poly()
        for K, t in terms.items():
            if not K & D:
                acc = acc + t
        nums[D] = acc
    sym = SymbolicMeasure(G, [nums[d] for d in G.descent_masks], G.rank)
    if isinstance(x, str):
        return sym
    return sym.evaluate(x)


def measure_H_face_weights(G, x="symbolic"):
    """H_{W,x} as the identity row of the chamber walk: chamber w collects v_x(wW_K) for K in Pi - Des(w)."""
    A = reflection_arrangement(G)
    fw = face_weights(A, x)
    _, neg, nodes = A.face_arrays()
    out = np.empty(G.order, dtype=object)
    out[:] = [Poly() if fw.symbolic else Fraction(0) for _ in range(G.order)]
    vals = np.empty(len(nodes), dtype=object)
    vals[:] = [fw.node_values[int(v)] for v in nodes]
    # F o C_0 has sign mask neg(F); find that chamber for every face
    cm, order = A._sorted_chambers
    target = order[np.searchsorted(cm, neg)]
    # a chamber can receive many faces, so accumulate unbuffered
    np.add.at(out, target, vals)
    if fw.symbolic:
        return SymbolicMeasure(G, list(out), G.rank)
    return SignedMeasure(G, list(out))


def measure_H(G, x="symbolic", check: bool = True):
    """H_{W,x}.  With ``check`` both constructions are computed and must agree exactly."""
    h2 = measure_H_parabolic(G, x)
    if check:
        h3 = measure_H_face_weights(G, x)
        if h2 != h3:
            raise IdentityFailure(f"parabolic and face-weight constructions of H differ for {G.label}")
    return h2


# --------------------------------------------------------------------------
# transition matrix and spectrum


def _integer_node_weights(fw: FaceWeights):
    den = lcm(*(v.denominator for v in fw.node_values.values()))
    return {k: int(v * den) for k, v in fw.node_values.items()}, den


def bhr_transition_matrix(A: Arrangement, weights: FaceWeights | dict, max_chambers: int = 2000):
    """Dense transition matrix as (integer matrix, common denominator).

    ``weights`` is a FaceWeights object or a dict face index -> Fraction.
    Entry [c, c'] / den is the total weight of faces F with F o c = c'.
    """
    nch = A.n_chambers
    if nch > max_chambers:
        raise ResourceLimitError(f"{nch} chambers exceeds the dense-matrix cap of {max_chambers}")
    zero, neg, nodes = A.face_arrays()
    if isinstance(weights, FaceWeights):
        if weights.symbolic:
            raise ValueError("transition matrix needs a numeric x")
        iw, den = _integer_node_weights(weights)
        face_w = [iw[int(v)] for v in nodes]
    else:
        den = lcm(*(Fraction(v).denominator for v in weights.values())) if weights else 1
        face_w = [int(Fraction(weights.get(i, 0)) * den) for i in range(len(zero))]
    cm = A.chamber_masks()
    sorted_masks, order = A._sorted_chambers
    # row sums equal den, so int64 is exact whenever den is comfortably below 2^63
    T = np.zeros((nch, nch), dtype=np.int64 if den < 2**60 else object)
    rows = np.arange(nch)
    for f in range(len(zero)):
        wgt = face_w[f]
        if not wgt:
            continue
        res = int(neg[f]) | (cm & int(zero[f]))
        cols = order[np.searchsorted(sorted_masks, res)]
        T[rows, cols] += wgt
    return T, den


def transition_matrix_fractions(T, den) -> list[list[Fraction]]:
    return [[Fraction(int(v), den) for v in row] for row in T]


def bhr_spectrum(A: Arrangement, x) -> list[tuple]:
    """Predicted eigenvalues 1/x^i with multiplicity sum of |mu(V, X)| over codim-i flats.

    Symbolic x returns (i, multiplicity) pairs instead.
    """
    prof = A.lattice.eigen_profile()
    if isinstance(x, str):
        return sorted(prof.items())
    x = Fraction(x)
    merged: dict[Fraction, int] = {}
    for i, m in sorted(prof.items()):
        merged[1 / x**i] = merged.get(1 / x**i, 0) + m
    return sorted(merged.items(), key=lambda t: -abs(t[0]))


def _charpoly_scaled(T, den) -> Poly:
    """det(tI - T/den) from the integer matrix T."""
    m = T.shape[0]
    M = flint.fmpz_mat(m, m, [int(v) for v in T.flat])
    cp = M.charpoly()
    # det(tI - T/den) = den^-m det(den t I - T)
    coeffs = [Fraction(int(c)) for c in cp.coeffs()]
    return Poly([c * Fraction(den) ** i / Fraction(den) ** m for i, c in enumerate(coeffs)])


def verify_bhr_spectrum(A: Arrangement, x, charpoly_limit: int = 400) -> dict:
    x = Fraction(x)
    fw = face_weights(A, x)
    prof = A.lattice.eigen_profile()
    n = A.dim
    predicted_trace = sum((Fraction(m) / x**i for i, m in prof.items()), Fraction(0))
    report = {"profile": {int(k): int(v) for k, v in sorted(prof.items())}, "x": x,
              "chambers": A.n_chambers, "predicted_trace": predicted_trace}
    if A.n_chambers > 2000:
        # trace from the diagonal without forming T: F o c = c iff F's signs agree with c off z(F)
        zero, neg, nodes = A.face_arrays()
        cm = A.chamber_masks()
        iw, den = _integer_node_weights(fw)
        tr = 0
        for f in range(len(zero)):
            z, ng = int(zero[f]), int(neg[f])
            hits = int(np.count_nonzero(((cm & ~z) ^ ng) == 0))
            tr += iw[int(nodes[f])] * hits
        report["trace"] = Fraction(tr, den)
        report["method"] = "trace"
        report["ok"] = report["trace"] == predicted_trace
        return report
    T, den = bhr_transition_matrix(A, fw)
    row_sums_ok = all(sum(row) == den for row in T)
    trace = Fraction(int(sum(T[i, i] for i in range(T.shape[0]))), den)
    report.update(trace=trace, row_sums_ok=row_sums_ok)
    ok = row_sums_ok and trace == predicted_trace
    if A.n_chambers <= charpoly_limit:
        cp = _charpoly_scaled(T, den)
        expected = Poly([1])
        for i, m in prof.items():
            expected = expected * Poly([-1 / x**i, 1]) ** m
        report["method"] = "charpoly"
        report["charpoly_ok"] = cp == expected
        ok = ok and report["charpoly_ok"]
    else:
        # annihilating polynomial prod_i (T - x^-i) on a few random rational vectors
        rng = np.random.default_rng(12345)
        m = T.shape[0]
        Tq = flint.fmpq_mat(m, m, [int(v) for v in T.flat]) / den
        V = flint.fmpq_mat(m, 3, [int(c) for c in rng.integers(-5, 6, size=3 * m)])
        for i in sorted(prof):
            e = 1 / x**i
            V = Tq * V - V * flint.fmpq(e.numerator, e.denominator)
        good = all(V[r, c] == 0 for r in range(m) for c in range(3))
        report["method"] = "annihilation+trace"
        report["annihilation_ok"] = good
        ok = ok and good
    report["ok"] = ok
    return report


# --------------------------------------------------------------------------
# identity suites


def verify_lattice_identities(A: Arrangement, x="symbolic") -> dict:
    """Zero-map fiber sizes, upper-set charpoly sums and total face weight for every node of A."""
    L = A.lattice
    fibers = A.fiber_sizes()
    fiber_bad = []
    for y in L.nodes:
        formula = (-1) ** L.dim(y) * L.charpoly(y)(-1)
        if fibers.get(y, 0) != formula:
            fiber_bad.append((y, fibers.get(y, 0), formula))
    sum_bad = []
    for xnode in L.nodes:
        acc = Poly()
        for z in L.upper_set(xnode):
            acc = acc + L.charpoly(int(z))
        if acc != Poly.monomial(L.dim(xnode)):
            sum_bad.append(xnode)
    total = face_weights(A, x).total()
    target = Poly.monomial(A.dim) if isinstance(x, str) else Fraction(1)
    return {
        "nodes": len(L),
        "fiber_sizes": {"ok": not fiber_bad, "failures": fiber_bad},
        "upper_sums": {"ok": not sum_bad, "failures": sum_bad},
        "weights_sum_to_one": {"ok": total == target, "value": total},
    }


def verify_identities(G, x="symbolic", raise_on_failure: bool = True) -> dict:
    """Exact checks of the lattice/face-weight identities for the reflection arrangement of G."""
    A = reflection_arrangement(G)
    n = G.rank
    xs = Poly.monomial(1) if isinstance(x, str) else Fraction(x)
    report = {"group": G.label, "x": "symbolic" if isinstance(x, str) else x}
    lat = verify_lattice_identities(A, x) if A.exhaustive else None
    if lat is None:
        # orbit representatives only: nodes Fix(W_K)
        fibers = A.fiber_sizes()
        bad = [K for K in range(1 << n)
               if fibers[A.fix_node[K]] != (-1) ** (n - _popcount(K)) * A.charpoly_K(K)(-1)]
        sums = []
        for K in range(1 << n):
            node = A.fix_node[K]
            acc = Poly()
            for z in A.lattice.upper_set(node):
                acc = acc + A.lattice.charpoly(int(z))
            if acc != Poly.monomial(n - _popcount(K)):
                sums.append(K)
        total = face_weights(A, x).total()
        target = Poly.monomial(n) if isinstance(x, str) else Fraction(1)
        lat = {"nodes": len(A.lattice), "scope": "orbit representatives",
               "fiber_sizes": {"ok": not bad, "failures": bad},
               "upper_sums": {"ok": not sums, "failures": sums},
               "weights_sum_to_one": {"ok": total == target, "value": total}}
    report.update(lat)
    ratio_bad = []
    for K in range(1 << n):
        lhs = Fraction(G.normalizer_order(K) * G.class_size(K), G.parabolic_order(K))
        rhs = (-1) ** (n - _popcount(K)) * A.charpoly_K(K)(-1)
        if lhs != rhs:
            ratio_bad.append((K, lhs, rhs))
    report["normalizer_ratio"] = {"ok": not ratio_bad, "failures": ratio_bad}
    new_id = Poly() if isinstance(x, str) else Fraction(0)
    for K in range(1 << n):
        chi = A.charpoly_K(K)
        term = Fraction((-1) ** (n - _popcount(K)) * G.order, G.parabolic_order(K)) / chi(-1)
        new_id = new_id + (chi * term if isinstance(x, str) else chi(xs) * term)
    target = Poly.monomial(n) if isinstance(x, str) else xs**n
    report["weighted_sum_identity"] = {"ok": new_id == target, "value": new_id}
    alt = sum(Fraction((-1) ** _popcount(K) * G.order, G.parabolic_order(K)) for K in range(1 << n))
    report["alternating_sum"] = {"ok": alt == 1, "value": alt}
    report["ok"] = all(v["ok"] for v in report.values() if isinstance(v, dict))
    if raise_on_failure and not report["ok"]:
        raise IdentityFailure(f"identity failure for {G.label}: {report}")
    return report


def good_prime_positivity(G, p: int) -> dict:
    """Signs of the face weights and of H_{W,p} at a prime p."""
    if not G.crystallographic:
        raise NotApplicableError(f"good/bad primes are not defined for non-crystallographic {G.label}")
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    A = reflection_arrangement(G)
    fw = face_weights(A, p)
    negative_nodes = sorted(k for k, v in fw.node_values.items() if v < 0)
    H = measure_H_parabolic(G, p)
    negative_elements = [w for w in G.elements if H[w] < 0]
    good = p not in G.bad_primes
    report = {
        "group": G.label, "p": p, "good": good,
        "min_face_weight": min(fw.node_values.values()),
        "negative_face_weights": len(negative_nodes),
        "negative_H_values": len(negative_elements),
    }
    report["ok"] = (not negative_nodes and not negative_elements) if good else True
    if not good:
        report["note"] = ("negative face weight present: expected" if negative_nodes
                          else "no negative face weight at this bad prime")
    return report
