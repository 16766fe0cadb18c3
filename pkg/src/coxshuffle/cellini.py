"""Cellini's measures x_k on Weyl groups, built from lattice-point counts a_{k,I}.

Points t of the ambient space are handled through their pairing vector
p = (<alpha_1, t>, ..., <alpha_n, t>).  A point lies in the coroot lattice
Y iff p = A^T n for an integer vector n (A the Cartan matrix), and
<alpha_0, t> = sum c_i p_i where alpha_0 = sum c_i alpha_i is the highest
root.  Every p in the closed dilated alcove {p >= 0, <alpha_0, t> <= k}
contributes to exactly one a_{k,I}: I collects the simple roots with p_i = 0,
plus alpha_0 when <alpha_0, t> = k.

Cyclic descents admit several readings (which side w acts on, the sign test
for alpha_0, and whether the measure or its inverse pushforward is meant).
:func:`calibrate_convention` evaluates all of them against the type C closed
form; :data:`DEFAULT_CONVENTION` is the one that survives.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm

from . import linalg
from .coxeter import build_group
from .group_algebra import GroupAlgebraElement, SignedMeasure, convolve
from .polynomial import Poly

__all__ = [
    "AffineData",
    "Convention",
    "DEFAULT_CONVENTION",
    "LITERAL_CONVENTION",
    "affine_data",
    "cyclic_descent",
    "cyclic_descent_mask",
    "a_coeffs",
    "a_coeff",
    "measure_xk",
    "verify_convolution_xk",
    "verify_coincide",
    "type_c_closed_form",
    "calibrate_convention",
    "non_polynomiality_witness",
    "measure_identity_check",
]

SUPPORTED = {"A": 5, "B": 4, "C": 4, "D": 4, "G": 2}
MAX_K = 9


class NotApplicableError(ValueError):
    pass


@dataclass(frozen=True)
class Convention:
    """How Cdes(w) and x_k are read.

    action : "w" tests w(alpha), "winv" tests w^-1(alpha).
    alpha0 : "literal" puts alpha_0 in Cdes when its image is negative,
             "affine" when its image is positive (i.e. the affine simple
             root -alpha_0 is sent to a negative root).
    side   : "measure" uses the formula as written, "inverse" its pushforward
             under w -> w^-1.
    """

    action: str = "w"
    alpha0: str = "affine"
    side: str = "measure"

    def label(self) -> str:
        return f"action={self.action}, alpha0={self.alpha0}, side={self.side}"


LITERAL_CONVENTION = Convention("w", "literal", "measure")
# fixed by calibrate_convention(); tests re-run the calibration and compare
DEFAULT_CONVENTION = Convention("w", "affine", "measure")


@dataclass(frozen=True)
class AffineData:
    highest_root: int               # root index
    highest_coeffs: tuple            # alpha_0 in simple-root coordinates
    coroot_basis: tuple              # simple coroots as pairing vectors (rows of A^T)
    adjugate: tuple                  # det * B^-1, B the coroot pairing matrix
    det: int

    def in_coroot_lattice(self, p) -> bool:
        n = len(p)
        for row in self.adjugate:
            if sum(row[j] * p[j] for j in range(n)) % self.det:
                return False
        return True


def _check(G):
    if not G.crystallographic:
        raise NotApplicableError(f"Cellini's construction needs a Weyl group; {G.label} is not crystallographic")
    lim = SUPPORTED.get(G.family)
    if lim is None or G.rank > lim:
        raise NotApplicableError(
            f"Cellini measures supported for A(n<=5), B/C(n<=4), D4, G2; got {G.label}")


@lru_cache(maxsize=None)
def affine_data(G) -> AffineData:
    _check(G)
    n = G.rank
    heights = [sum(int(c) for c in G.roots[r]) for r in range(G.n_pos)]
    top = max(range(G.n_pos), key=heights.__getitem__)
    coeffs = tuple(int(c) for c in G.roots[top])
    # row j = pairing vector of the simple coroot alpha_j^vee: <alpha_i, alpha_j^vee> = a_ji
    coroots = [[int(G.cartan[j][i]) for i in range(n)] for j in range(n)]
    # p = sum_j m_j coroots[j], so the coefficients are m = B^-1 p with B[i][j] = coroots[j][i]
    inv = linalg.inverse_fraction_free([[Fraction(coroots[j][i]) for j in range(n)] for i in range(n)])
    det = lcm(*(x.denominator for row in inv for x in row))
    adj = tuple(tuple(int(x * det) for x in row) for row in inv)
    return AffineData(top, coeffs, tuple(tuple(r) for r in coroots), adj, det)


def cyclic_descent_mask(G, w: int, convention: Convention = DEFAULT_CONVENTION) -> int:
    """Bits 0..n-1 for the simple roots, bit n for alpha_0."""
    ad = affine_data(G)
    u = G.inverse(w) if convention.action == "winv" else w
    p = G.perms[u]
    N = G.n_pos
    mask = G.descent_masks[u]
    image_negative = p[ad.highest_root] >= N
    if image_negative == (convention.alpha0 == "literal"):
        mask |= 1 << G.rank
    return mask


def cyclic_descent(G, w: int, convention: Convention = DEFAULT_CONVENTION) -> frozenset:
    """Cdes(w) as a set of indices; index n stands for alpha_0."""
    m = cyclic_descent_mask(G, w, convention)
    return frozenset(i for i in range(G.rank + 1) if m >> i & 1)


@lru_cache(maxsize=None)
def a_coeffs(G, k: int) -> dict[int, int]:
    """I mask (bit n = alpha_0) -> a_{k,I}, over all I with a nonzero count."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k > MAX_K:
        raise NotApplicableError(f"k={k} exceeds the supported bound k <= {MAX_K}")
    ad = affine_data(G)
    n = G.rank
    c = ad.highest_coeffs
    out: dict[int, int] = {}
    for p in product(*(range(k // ci + 1) for ci in c)):
        level = sum(ci * pi for ci, pi in zip(c, p))
        if level > k or not ad.in_coroot_lattice(p):
            continue
        mask = sum(1 << i for i in range(n) if p[i] == 0)
        if level == k:
            mask |= 1 << n
        out[mask] = out.get(mask, 0) + 1
    return out


def a_coeff(G, k: int, I) -> int:
    """a_{k,I} for I a set of indices (n meaning alpha_0)."""
    mask = sum(1 << i for i in set(I))
    return a_coeffs(G, k).get(mask, 0)


def measure_xk(G, k: int, convention: Convention = DEFAULT_CONVENTION, check: bool = True) -> GroupAlgebraElement:
    """x_k = sum_w (k^-n sum_{I in Pi~ - Cdes(w)} a_{k,I}) w."""
    a = a_coeffs(G, k)
    scale = Fraction(1, k**G.rank)
    by_cdes: dict[int, Fraction] = {}
    coeffs = []
    for w in G.elements:
        cd = cyclic_descent_mask(G, w, convention)
        if cd not in by_cdes:
            by_cdes[cd] = scale * sum(v for I, v in a.items() if not I & cd)
        coeffs.append(by_cdes[cd])
    elem = GroupAlgebraElement(G, coeffs)
    if convention.side == "inverse":
        elem = elem.inverse_pushforward()
    if check:
        return SignedMeasure(G, elem.coeffs)
    return elem


def measure_identity_check(G, k: int, convention: Convention = DEFAULT_CONVENTION) -> dict:
    """sum_I a_{k,I} #{w : Cdes(w) meets no element of I} = k^n, without assembling x_k."""
    a = a_coeffs(G, k)
    counts: dict[int, int] = {}
    for w in G.elements:
        cd = cyclic_descent_mask(G, w, convention)
        counts[cd] = counts.get(cd, 0) + 1
    total = sum(v * sum(m for cd, m in counts.items() if not cd & I) for I, v in a.items())
    return {"lhs": total, "rhs": k**G.rank, "ok": total == k**G.rank}


def verify_convolution_xk(G, k: int, h: int, convention: Convention = DEFAULT_CONVENTION) -> bool:
    lhs = convolve(measure_xk(G, k, convention, check=False), measure_xk(G, h, convention, check=False))
    return lhs == measure_xk(G, k * h, convention, check=False)


def type_c_closed_form(G, k: int) -> GroupAlgebraElement:
    """C((k-1)/2 + n - d(w), n) / k^n, the odd-k coefficient for type C."""
    n = G.rank
    vals = {}
    for d in range(n + 1):
        vals[d] = Poly.binomial(Fraction(k - 1, 2) + n - d, 0, n)(0) / k**n
    return GroupAlgebraElement(G, [vals[G.descent_count(w)] for w in G.elements])


def verify_coincide(n: int, k: int, convention: Convention = DEFAULT_CONVENTION) -> dict:
    """x_k = M_{C_n,k} = H_{C_n,k} for odd k."""
    if k % 2 == 0:
        raise NotApplicableError("the type C coincidence is claimed for odd k only")
    from .arrangement import measure_H
    from .descent import measure_M
    G = build_group("C", n)
    xk = measure_xk(G, k, convention)
    M = measure_M(G, k)
    H = measure_H(G, k)
    closed = type_c_closed_form(G, k)
    return {"group": G.label, "k": k, "x_k=M": xk == M, "M=H": M == H, "closed_form": M == closed,
            "ok": xk == M and M == H}


def _all_conventions():
    for action in ("w", "winv"):
        for alpha0 in ("literal", "affine"):
            for side in ("measure", "inverse"):
                yield Convention(action, alpha0, side)


def calibrate_convention(anchors=((2, 3), (3, 3)), conv_groups=(("A", 2, 2, 2), ("C", 2, 3, 3))) -> dict:
    """Evaluate every reading of Cdes against the type C closed form and the convolution law.

    Returns a report with one row per convention and the list of survivors.
    """
    rows = []
    for conv in _all_conventions():
        row = {"convention": conv.label()}
        ok = True
        for n, k in anchors:
            G = build_group("C", n)
            el = measure_xk(G, k, conv, check=False)
            good = el == type_c_closed_form(G, k)
            row[f"C{n},k={k}"] = good
            ok &= good
        for fam, n, k, h in conv_groups:
            G = build_group(fam, n)
            good = verify_convolution_xk(G, k, h, conv)
            row[f"{fam}{n}: x{k}*x{h}=x{k*h}"] = good
            ok &= good
        row["ok"] = ok
        rows.append((conv, row))
    survivors = [c for c, r in rows if r["ok"]]
    # readings that define the same measure on every probe are one convention
    probes = [(build_group(fam, n), k) for fam, n, k, _ in conv_groups] + \
             [(build_group("A", 3), 2), (build_group("B", 3), 3), (build_group("G", 2), 4)]
    classes: list[list[Convention]] = []
    for conv in survivors:
        for cls in classes:
            if all(measure_xk(G, k, conv, check=False) == measure_xk(G, k, cls[0], check=False)
                   for G, k in probes):
                cls.append(conv)
                break
        else:
            classes.append([conv])
    return {"rows": [r for _, r in rows], "survivors": survivors, "classes": classes,
            "chosen": classes[0][0] if len(classes) == 1 else None}


def non_polynomiality_witness(G=None, ks=(2, 3, 4, 5), convention: Convention = DEFAULT_CONVENTION) -> dict:
    """Exhibit an element whose coefficient in x_k is not a polynomial in k.

    If x_k(w) = P(k)/k^n for a polynomial P, then 0 <= P(k) <= k^n forces
    deg P <= n, so the (n+1)-st finite difference of k^n x_k(w) over
    consecutive k would vanish.  A nonzero difference is a certificate.
    """
    if G is None:
        G = build_group("A", 2)
    n = G.rank
    if len(ks) < n + 2:
        raise ValueError(f"need at least {n + 2} consecutive k")
    series = {}
    for k in ks:
        x = measure_xk(G, k, convention)
        series[k] = [x[w] * k**n for w in G.elements]
    witnesses = []
    for w in G.elements:
        vals = [series[k][w] for k in ks]
        diffs = vals
        for _ in range(n + 1):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if any(diffs):
            witnesses.append({"element": w, "word": list(G.words[w]), "scaled_values": {k: series[k][w] for k in ks},
                              "difference": diffs[0]})
    residues = {}
    for k in ks:
        residues.setdefault(k % (n + 1), []).append(k)
    return {"group": G.label, "ks": list(ks), "witnesses": witnesses, "ok": bool(witnesses),
            "k_mod_classes": residues}
