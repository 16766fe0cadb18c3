"""Solomon's descent algebra: the x_J basis, the mu/beta matrices, the
orthogonal idempotents e_lambda and the measure M_{W,x} = sum_lambda e_lambda / x^|lambda|.

Everything here is constant on descent classes, so the heavy lifting is done
on the 2^n descent masks and only expanded to elements at the end.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .group_algebra import GroupAlgebraElement, SignedMeasure, SymbolicMeasure, convolve
from .polynomial import Poly

__all__ = [
    "MuBetaMatrices",
    "subset_order",
    "x_basis",
    "mu_beta",
    "idempotent_expansions",
    "idempotents",
    "measure_M",
    "descent_class_numerators",
    "spectrum_profile",
    "spectrum_M",
    "endpoint_values",
    "verify_spectrum_M",
]


def _popcount(m: int) -> int:
    return bin(m).count("1")


def subset_order(n: int) -> list[int]:
    """All subset masks of an n-set ordered by cardinality, then lexicographically."""
    def key(m):
        return (_popcount(m), [i for i in range(n) if m >> i & 1])
    return sorted(range(1 << n), key=key)


def x_basis(G, J) -> GroupAlgebraElement:
    """x_J: sum of the elements with no descent in J."""
    jm = G.mask_of(J)
    return GroupAlgebraElement(G, [int(not (d & jm)) for d in G.descent_masks])


@dataclass(frozen=True)
class MuBetaMatrices:
    masks: tuple  # row/column order
    mu: tuple     # mu[a][b] = mu_K^J with K = masks[a], J = masks[b]
    beta: tuple

    def position(self, mask: int) -> int:
        return self.masks.index(mask)

    def mu_entry(self, K: int, J: int) -> Fraction:
        return self.mu[self.position(K)][self.position(J)]

    def beta_entry(self, K: int, J: int) -> Fraction:
        return self.beta[self.position(K)][self.position(J)]


@lru_cache(maxsize=None)
def mu_beta(G) -> MuBetaMatrices:
    """mu_K^J = |{w in X_J : w(K) subset of Pi}| / |lambda(K)| (zero unless K in J), and its inverse."""
    n = G.rank
    masks = subset_order(n)
    counts = G.simple_image_counts()
    sizes = {k: G.class_size(k) for k in masks}
    mu = []
    for K in masks:
        row = []
        for J in masks:
            if K & ~J:
                row.append(Fraction(0))
                continue
            c = sum(v for d, v in counts[K].items() if not d & J)
            row.append(Fraction(c, sizes[K]))
        mu.append(row)
    beta = linalg.inverse_fraction_free(mu)
    return MuBetaMatrices(tuple(masks), tuple(tuple(r) for r in mu), tuple(tuple(r) for r in beta))


@lru_cache(maxsize=None)
def idempotent_expansions(G) -> dict[int, dict[int, Fraction]]:
    """class representative mask -> {K mask: coefficient of x_K in e_lambda}."""
    mb = mu_beta(G)
    pos = {m: i for i, m in enumerate(mb.masks)}
    out = {}
    for cls in G.subset_classes():
        members = cls.member_masks
        coeffs: dict[int, Fraction] = {}
        for J in members:
            j = pos[J]
            sub = J
            while True:
                b = mb.beta[pos[sub]][j]
                if b:
                    coeffs[sub] = coeffs.get(sub, Fraction(0)) + b / len(members)
                if sub == 0:
                    break
                sub = (sub - 1) & J
        out[members[0]] = {k: v for k, v in coeffs.items() if v}
    return out


def _values_on_descent_masks(G, expansion: dict[int, Fraction]) -> dict[int, Fraction]:
    """Value of sum_K c_K x_K at any element with descent mask D."""
    return {D: sum((c for K, c in expansion.items() if not K & D), Fraction(0))
            for D in range(1 << G.rank)}


def idempotents(G) -> dict[frozenset, GroupAlgebraElement]:
    """Class representative -> e_lambda as an element of the group algebra."""
    out = {}
    for rep, exp in idempotent_expansions(G).items():
        vals = _values_on_descent_masks(G, exp)
        out[G.subset_of(rep)] = GroupAlgebraElement(G, [vals[d] for d in G.descent_masks])
    return out


@lru_cache(maxsize=None)
def descent_class_numerators(G) -> dict[int, Poly]:
    """Descent mask D -> p_D with M_{W,x}(w) = p_D(x) / x^n for Des(w) = D."""
    n = G.rank
    out = {D: Poly() for D in range(1 << n)}
    for rep, exp in idempotent_expansions(G).items():
        shift = Poly.monomial(n - _popcount(rep))
        vals = _values_on_descent_masks(G, exp)
        for D, v in vals.items():
            if v:
                out[D] = out[D] + shift * v
    return out


def measure_M(G, x="symbolic"):
    """M_{W,x}.  Returns a SymbolicMeasure for x="symbolic", else an exact SignedMeasure."""
    nums = descent_class_numerators(G)
    sym = SymbolicMeasure(G, [nums[d] for d in G.descent_masks], G.rank)
    if isinstance(x, str):
        if x != "symbolic":
            raise ValueError(f"x must be a nonzero rational or 'symbolic', got {x!r}")
        return sym
    x = Fraction(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    return sym.evaluate(x)


def spectrum_profile(G) -> list[int]:
    """mult[i] = #{w : dim fix(w) = n - i}, the multiplicity of 1/x^i."""
    counts = G.fixed_dimension_counts()
    n = G.rank
    return [counts[n - i] for i in range(n + 1)]


def spectrum_M(G, x) -> list[tuple[Fraction, int]]:
    """Eigenvalues 1/x^i (i = 0..n) with multiplicities, coinciding values merged."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    merged: dict[Fraction, int] = {}
    for i, m in enumerate(spectrum_profile(G)):
        if m:
            ev = 1 / x**i
            merged[ev] = merged.get(ev, 0) + m
    return sorted(merged.items(), key=lambda t: -abs(t[0]))


def endpoint_values(G, x="symbolic"):
    """Closed forms prod(x + m_i) / (x^n |W|) and prod(x - m_i) / (x^n |W|).

    Symbolic mode returns the two numerators over x^n.
    """
    ex = G.exponents
    top = Poly.from_roots([-m for m in ex]) / G.order
    bottom = Poly.from_roots(ex) / G.order
    if isinstance(x, str):
        return top, bottom
    x = Fraction(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    d = x**G.rank
    return top(x) / d, bottom(x) / d


def expected_charpoly(profile: list[int], x) -> Poly:
    x = Fraction(x)
    out = Poly([1])
    for i, m in enumerate(profile):
        out = out * Poly([-1 / x**i, 1]) ** m
    return out


def verify_spectrum_M(G, x, charpoly_limit: int = 120, annihilation_limit: int = 2000) -> dict:
    """Check the predicted spectrum of left multiplication by M_{W,x}.

    Exact characteristic polynomial up to ``charpoly_limit`` elements; above
    that the group-algebra identity prod_i (M - x^-i) = 0 (which, the
    representation being faithful, says the operator is diagonalizable with
    eigenvalues among the 1/x^i) together with the trace |W| M(id).
    """
    x = Fraction(x)
    M = measure_M(G, x)
    profile = spectrum_profile(G)
    predicted_trace = sum((m / x**i for i, m in enumerate(profile)), Fraction(0))
    trace = G.order * M[0]
    report = {"group": G.label, "x": x, "profile": profile,
              "trace": trace, "predicted_trace": predicted_trace, "trace_ok": trace == predicted_trace}
    if G.order <= charpoly_limit:
        cp = linalg.charpoly(M.left_multiplication_matrix())
        report["method"] = "charpoly"
        report["charpoly_ok"] = cp == expected_charpoly(profile, x)
        report["ok"] = report["charpoly_ok"] and report["trace_ok"]
    elif G.order <= annihilation_limit:
        acc = GroupAlgebraElement.identity(G)
        delta = GroupAlgebraElement.identity(G)
        for i in range(G.rank + 1):
            acc = convolve(acc, M - delta.scale(1 / x**i))
        report["method"] = "annihilation+trace"
        report["annihilation_ok"] = acc.is_zero()
        report["ok"] = report["annihilation_ok"] and report["trace_ok"]
    else:
        report["method"] = "trace"
        report["ok"] = report["trace_ok"]
    return report
