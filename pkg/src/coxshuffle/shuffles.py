"""Physical card-shuffling models, exact laws by enumeration, and Monte Carlo.

Decks are tuples of card labels 1..n listed top to bottom; signed decks
carry a negative label for a face-down card.  Every model here can be
described by a uniform label sequence over output positions: position p
takes the next card from packet L[p].  That is how the exact laws are
enumerated and how the vectorized samplers work.

Deck-to-group encodings:

* ``"position"`` (default): deck (c_1, ..., c_n) is the element with
  w(e_i) = sign(c_i) e_|c_i|;
* ``"card"``: the inverse of that element.
"""
from __future__ import annotations

import io
import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np

from .coxeter import build_group
from .group_algebra import SignedMeasure, total_variation

__all__ = [
    "MODELS",
    "EmpiricalDistribution",
    "ResourceLimitError",
    "gsr_a_shuffle",
    "typeC_flip_shuffle",
    "x2_physical_shuffle",
    "exact_model_distribution",
    "exact_sequential_gsr",
    "monte_carlo",
    "model_group",
    "deck_to_element",
    "total_variation",
    "default_workers",
    "calibrate_encodings",
]

MODELS = ("gsr", "typeC_flip", "x2_physical")
ENCODINGS = ("position", "card")
MAX_BRANCHES = 10**7
N_SHARDS = 16


class ResourceLimitError(RuntimeError):
    pass


def default_workers() -> int:
    env = os.environ.get("COXSHUFFLE_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


# --------------------------------------------------------------------------
# label-sequence mechanics


def _stable_ranks(labels: np.ndarray) -> np.ndarray:
    """Rank of each position after a stable sort by label (last axis)."""
    order = np.argsort(labels, axis=-1, kind="stable")
    return np.argsort(order, axis=-1, kind="stable")


def _gsr_from_labels(labels: np.ndarray) -> np.ndarray:
    """Decks (cards 1..n) produced by a GSR shuffle of the identity deck."""
    return _stable_ranks(labels) + 1


def _flip_from_labels(labels: np.ndarray, n_stacks: int) -> np.ndarray:
    """Signed decks for the stack-flip shuffle; packets with odd 0-based label are flipped."""
    ranks = _stable_ranks(labels)
    onehot = labels[..., None] == np.arange(n_stacks)
    sizes = onehot.sum(axis=-2)                                # (..., stacks)
    offsets = np.cumsum(sizes, axis=-1) - sizes
    off = np.take_along_axis(offsets, labels, axis=-1)
    size = np.take_along_axis(sizes, labels, axis=-1)
    flipped = labels % 2 == 1
    card = np.where(flipped, 2 * off + size - 1 - ranks, ranks) + 1
    return np.where(flipped, -card, card)


def _x2_deck(n: int, j: int, pattern) -> tuple:
    """Deck from the x2 procedure with second pile of size 2j; pattern[p] = 1 takes from that pile."""
    deck = list(range(1, n + 1))
    second = deck[n - j:] + deck[:j] if j else []
    first = deck[j:n - j]
    out, a, b = [], 0, 0
    for t in pattern:
        if t:
            out.append(second[b])
            b += 1
        else:
            out.append(first[a])
            a += 1
    return tuple(out)


# --------------------------------------------------------------------------
# single samples


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def gsr_a_shuffle(n: int, a: int, rng=None) -> tuple:
    """One GSR a-shuffle of the deck 1..n."""
    if n < 1 or a < 1:
        raise ValueError("need n >= 1 and a >= 1")
    labels = _rng(rng).integers(0, a, size=n)
    return tuple(int(c) for c in _gsr_from_labels(labels))


def typeC_flip_shuffle(n: int, k: int, rng=None) -> tuple:
    """Cut into 2k+1 stacks multinomially, flip the even-numbered stacks, riffle by packet size."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    labels = _rng(rng).integers(0, 2 * k + 1, size=n)
    return tuple(int(c) for c in _flip_from_labels(labels, 2 * k + 1))


def x2_physical_shuffle(N: int, rng=None) -> tuple:
    """Choose 2j with probability C(N,2j)/2^(N-1); pile2 = bottom j cards on top of the top j cards; riffle."""
    if N < 2:
        raise ValueError("need N >= 2")
    r = _rng(rng)
    js = list(range(N // 2 + 1))
    probs = np.array([comb(N, 2 * j) for j in js], dtype=float)
    j = int(r.choice(js, p=probs / probs.sum()))
    pattern = np.zeros(N, dtype=int)
    if j:
        pattern[r.choice(N, size=2 * j, replace=False)] = 1
    return _x2_deck(N, j, pattern)


# --------------------------------------------------------------------------
# group side


def model_group(model: str, params: dict):
    if model == "gsr":
        return build_group("A", params["n"] - 1)
    if model == "typeC_flip":
        return build_group("C", params["n"])
    if model == "x2_physical":
        return build_group("A", params["N"] - 1)
    raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")


def deck_to_element(G, deck, encoding: str = "position") -> int:
    if encoding not in ENCODINGS:
        raise ValueError(f"encoding must be one of {ENCODINGS}")
    w = G.element_from_signed_permutation(list(deck))
    return G.inverse(w) if encoding == "card" else w


_PARAMS = {"gsr": ("n", "a"), "typeC_flip": ("n", "k"), "x2_physical": ("N",)}


def _check_model(model: str, params: dict):
    if model not in _PARAMS:
        raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    missing = [k for k in _PARAMS[model] if k not in params]
    if missing:
        raise ValueError(f"model {model} needs parameters {', '.join(missing)}")


def _branch_count(model, params) -> int:
    if model == "gsr":
        return params["a"] ** params["n"]
    if model == "typeC_flip":
        return (2 * params["k"] + 1) ** params["n"]
    return 2 ** (params["N"] - 1)


def _exact_decks(model: str, params: dict):
    """Yield (deck, probability) over every branch of the procedure."""
    if model == "gsr":
        n, a = params["n"], params["a"]
        p = Fraction(1, a**n)
        for labels in product(range(a), repeat=n):
            yield tuple(int(c) for c in _gsr_from_labels(np.array(labels))), p
    elif model == "typeC_flip":
        n, k = params["n"], params["k"]
        p = Fraction(1, (2 * k + 1) ** n)
        for labels in product(range(2 * k + 1), repeat=n):
            yield tuple(int(c) for c in _flip_from_labels(np.array(labels), 2 * k + 1)), p
    elif model == "x2_physical":
        N = params["N"]
        p = Fraction(1, 2 ** (N - 1))
        for j in range(N // 2 + 1):
            for pattern in product((0, 1), repeat=N):
                if sum(pattern) == 2 * j:
                    yield _x2_deck(N, j, pattern), p
    else:
        raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")


def exact_model_distribution(model: str, params: dict, encoding: str = "position") -> SignedMeasure:
    """Exact law of the model on its group by summing over every branch."""
    _check_model(model, params)
    branches = _branch_count(model, params)
    if branches > MAX_BRANCHES:
        raise ResourceLimitError(f"{branches} branches exceeds the enumeration cap of {MAX_BRANCHES}")
    G = model_group(model, params)
    coeffs = [Fraction(0)] * G.order
    for deck, p in _exact_decks(model, params):
        coeffs[deck_to_element(G, deck, encoding)] += p
    return SignedMeasure(G, coeffs)


def exact_sequential_gsr(n: int, shuffles, encoding: str = "position") -> SignedMeasure:
    """Exact law of performing GSR a-shuffles in sequence (e.g. a 2-shuffle then a 3-shuffle)."""
    G = build_group("A", n - 1)
    dist = {tuple(range(1, n + 1)): Fraction(1)}
    for a in shuffles:
        if len(dist) * a**n > MAX_BRANCHES:
            raise ResourceLimitError("sequential enumeration too large")
        moves = [(_stable_ranks(np.array(lab)), Fraction(1, a**n)) for lab in product(range(a), repeat=n)]
        new: dict = {}
        for deck, p in dist.items():
            for src, q in moves:
                out = tuple(deck[int(s)] for s in src)
                new[out] = new.get(out, 0) + p * q
        dist = new
    coeffs = [Fraction(0)] * G.order
    for deck, p in dist.items():
        coeffs[deck_to_element(G, deck, encoding)] += p
    return SignedMeasure(G, coeffs)


# --------------------------------------------------------------------------
# Monte Carlo


@dataclass
class EmpiricalDistribution:
    group: object
    model: str
    params: dict
    counts: np.ndarray
    trials: int
    seed: int
    encoding: str = "position"
    meta: dict = field(default_factory=dict)

    def frequencies(self) -> np.ndarray:
        return self.counts / self.trials

    def tv_to(self, exact) -> float:
        return total_variation(list(self.frequencies()), [float(c) for c in exact.coeffs])

    def header(self) -> dict:
        return {"model": self.model, "params": self.params, "trials": self.trials, "seed": self.seed,
                "encoding": self.encoding, "group": self.group.label, **self.meta}

    def to_json(self, precision: int = 8) -> dict:
        G = self.group
        return {
            **self.header(),
            "entries": [
                {"word": list(G.words[w]), "descents": G.descent_count(w), "count": int(c),
                 "frequency": f"{c / self.trials:.{precision}f}"}
                for w, c in enumerate(self.counts) if c
            ],
        }

    def to_csv(self, precision: int = 8) -> str:
        G = self.group
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.header(), sort_keys=True) + "\n")
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["word", "descents", "count", "frequency"])
        for w, c in enumerate(self.counts):
            if c:
                wr.writerow([" ".join(map(str, G.words[w])), G.descent_count(w), int(c),
                             f"{c / self.trials:.{precision}f}"])
        return buf.getvalue()


def _decks_to_codes(decks: np.ndarray, n: int) -> np.ndarray:
    """Encode signed decks as integers: card c -> c + n in base 2n+1."""
    base = 2 * n + 1
    weights = base ** np.arange(n, dtype=np.int64)
    return (decks.astype(np.int64) + n) @ weights


def _code_table(G, n: int, encoding: str):
    """Sorted deck codes and the element index for each."""
    decks, elems = [], []
    for w in G.elements:
        deck = G.signed_permutation(w)
        decks.append(deck)
        elems.append(G.inverse(w) if encoding == "card" else w)
    codes = _decks_to_codes(np.array(decks), n)
    order = np.argsort(codes)
    return codes[order], np.array(elems)[order]


def _shard_decks(model: str, params: dict, trials: int, rng: np.random.Generator) -> np.ndarray:
    if model == "gsr":
        labels = rng.integers(0, params["a"], size=(trials, params["n"]))
        return _gsr_from_labels(labels)
    if model == "typeC_flip":
        s = 2 * params["k"] + 1
        labels = rng.integers(0, s, size=(trials, params["n"]))
        return _flip_from_labels(labels, s)
    return np.array([x2_physical_shuffle(params["N"], rng) for _ in range(trials)])


def monte_carlo(model: str, params: dict, trials: int, seed: int = 0, encoding: str = "position",
                workers: int | None = None) -> EmpiricalDistribution:
    """Sample the model; results depend only on (model, params, trials, seed), not on ``workers``.

    Trials are split over a fixed number of shards, each with its own child
    seed from ``SeedSequence(seed)``; shard counts are summed in shard order.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    _check_model(model, params)
    G = model_group(model, params)
    n = params["N"] if model == "x2_physical" else params["n"]
    codes, elems = _code_table(G, n, encoding)
    children = np.random.SeedSequence(seed).spawn(N_SHARDS)
    sizes = [trials // N_SHARDS + (1 if i < trials % N_SHARDS else 0) for i in range(N_SHARDS)]

    def run(i):
        if not sizes[i]:
            return np.zeros(G.order, dtype=np.int64)
        rng = np.random.Generator(np.random.PCG64(children[i]))
        counts = np.zeros(G.order, dtype=np.int64)
        done = 0
        while done < sizes[i]:
            t = min(200_000, sizes[i] - done)
            decks = _shard_decks(model, params, t, rng)
            idx = elems[np.searchsorted(codes, _decks_to_codes(decks, n))]
            counts += np.bincount(idx, minlength=G.order)
            done += t
        return counts

    workers = workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        shard_counts = list(pool.map(run, range(N_SHARDS)))
    total = np.zeros(G.order, dtype=np.int64)
    for c in shard_counts:
        total += c
    return EmpiricalDistribution(G, model, dict(params), total, trials, seed, encoding,
                                 {"shards": N_SHARDS, "generator": "PCG64"})


def calibrate_encodings(gsr_sizes=((3, 2), (4, 2), (4, 3)), flip_sizes=(2, 3), x2_sizes=(3, 4)) -> dict:
    """For each model, record which encodings give the target measure and which give its inverse pushforward.

    Targets: M_{S_n,a} for gsr, M_{C_n,2k+1} for typeC_flip (k = 1), and
    the Cellini measure x_2 on S_N for x2_physical.
    """
    from .cellini import measure_xk
    from .descent import measure_M

    cases = []
    for n, a in gsr_sizes:
        cases.append(("gsr", {"n": n, "a": a}, measure_M(build_group("A", n - 1), a)))
    for n in flip_sizes:
        cases.append(("typeC_flip", {"n": n, "k": 1}, measure_M(build_group("C", n), 3)))
    for N in x2_sizes:
        cases.append(("x2_physical", {"N": N}, measure_xk(build_group("A", N - 1), 2)))
    out: dict = {}
    for model, params, target in cases:
        inv = target.inverse_pushforward()
        row = out.setdefault(model, {"measure": set(ENCODINGS), "inverse": set(ENCODINGS)})
        for enc in ENCODINGS:
            law = exact_model_distribution(model, params, enc)
            if law != target:
                row["measure"].discard(enc)
            if law != inv:
                row["inverse"].discard(enc)
    return {m: {k: sorted(v) for k, v in row.items()} for m, row in out.items()}
