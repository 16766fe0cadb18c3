"""Named verification checks and an aggregate report.

Every check returns a :class:`CheckResult`.  Status values:

* PASS / FAIL: an identity that is claimed to hold;
* EXPECTED: a failure that is predicted (negative weights at a bad prime);
* INFO: a comparison with no claim attached (H vs M outside the agreeing types);
* WARN: soft statistical checks and empty scopes.
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import arrangement as arr
from . import cellini, descent, shuffles
from .coxeter import build_group, parse_type
from .group_algebra import convolve
from .polynomial import Poly

__all__ = ["CheckResult", "CHECKS", "DEFAULT_SCOPE", "run_check", "verify_all", "agreement_claimed",
           "resolve_group"]

HARD_FAIL = {"FAIL"}


@dataclass
class CheckResult:
    check: str
    target: str
    status: str
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status in HARD_FAIL

    def line(self) -> str:
        return f"{self.check} [{self.target}]: {self.status}"

    def to_json(self) -> dict:
        return {"check": self.check, "target": self.target, "status": self.status,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def resolve_group(group):
    if isinstance(group, str):
        return build_group(*parse_type(group))
    return build_group(group["type"], group.get("rank"))


def agreement_claimed(G) -> bool:
    """H = M is asserted for types A, B, C, H3 and every rank-2 group."""
    return G.family in ("A", "B", "C") or G.label == "H3" or G.rank == 2


def _status(ok) -> str:
    return "PASS" if ok else "FAIL"


def _x(value):
    return "symbolic" if value in (None, "symbolic") else Fraction(value)


# --------------------------------------------------------------------------
# individual checks


def check_agree(G, x="symbolic"):
    x = _x(x)
    H = arr.measure_H(G, x)
    M = descent.measure_M(G, x)
    equal = H == M
    detail = {"x": x, "equal": equal}
    if agreement_claimed(G):
        return _status(equal), detail
    detail["note"] = "no agreement claimed for this type"
    return "INFO", detail


def check_endpoints(G, x="symbolic"):
    x = _x(x)
    M = descent.measure_M(G, x)
    top, bottom = descent.endpoint_values(G, x)
    got_top, got_bottom = M[G.identity], M[G.longest]
    ok = got_top == top and got_bottom == bottom
    return _status(ok), {"x": x, "identity": got_top, "longest": got_bottom,
                         "expected_identity": top, "expected_longest": bottom}


def check_convolution(G, a=2, b=3):
    lhs = convolve(descent.measure_M(G, a), descent.measure_M(G, b))
    ok = lhs == descent.measure_M(G, Fraction(a) * Fraction(b))
    return _status(ok), {"a": a, "b": b}


def check_spectrum(G, x=2):
    x = Fraction(x)
    m_rep = descent.verify_spectrum_M(G, x)
    b_rep = arr.verify_bhr_spectrum(arr.reflection_arrangement(G), x)
    prof_m = {i: m for i, m in enumerate(descent.spectrum_profile(G)) if m}
    prof_b = {int(k): int(v) for k, v in b_rep["profile"].items() if v}
    same = prof_m == prof_b
    ok = m_rep["ok"] and b_rep["ok"] and same
    return _status(ok), {"x": x, "M_method": m_rep["method"], "M_ok": m_rep["ok"],
                         "BHR_method": b_rep["method"], "BHR_ok": b_rep["ok"],
                         "fixed_space_profile": prof_m, "mobius_profile": prof_b, "profiles_agree": same}


def check_identities(G, x="symbolic"):
    rep = arr.verify_identities(G, _x(x), raise_on_failure=False)
    return _status(rep["ok"]), {k: v["ok"] for k, v in rep.items() if isinstance(v, dict)}


def check_h_routes(G, xs=(2, 3, 5)):
    out = {}
    for x in xs:
        out[str(x)] = arr.measure_H_parabolic(G, x) == arr.measure_H_face_weights(G, x)
    return _status(all(out.values())), out


def check_good_prime(G, p):
    rep = arr.good_prime_positivity(G, int(p))
    if rep["good"]:
        return _status(rep["ok"]), rep
    return ("EXPECTED" if rep["negative_face_weights"] else "INFO"), rep


def check_generic(name=None):
    arrs = arr.test_arrangements()
    names = [name] if name else sorted(arrs)
    detail = {}
    ok = True
    for nm in names:
        A = arrs[nm]
        lat = arr.verify_lattice_identities(A)
        bhr = arr.verify_bhr_spectrum(A, 2)
        good = lat["fiber_sizes"]["ok"] and lat["upper_sums"]["ok"] and lat["weights_sum_to_one"]["ok"] and bhr["ok"]
        detail[nm] = good
        ok &= good
    return _status(ok), detail


def check_cellini_measure(G, k):
    rep = cellini.measure_identity_check(G, int(k))
    xk = cellini.measure_xk(G, int(k))
    ok = rep["ok"] and xk.total() == 1
    return _status(ok), {"k": k, **rep}


def check_cellini_convolution(G, k, h):
    return _status(cellini.verify_convolution_xk(G, int(k), int(h))), {"k": k, "h": h}


def check_coincide(G, k):
    rep = cellini.verify_coincide(G.rank, int(k))
    return _status(rep["ok"]), rep


def check_nonpolynomial(G):
    rep = cellini.non_polynomiality_witness(G)
    return _status(bool(rep["witnesses"])), {"witnesses": len(rep["witnesses"])}


def check_oracle(model, **params):
    enc = params.pop("encoding", "card")
    law = shuffles.exact_model_distribution(model, params, enc)
    G = law.group
    if model == "gsr":
        target = descent.measure_M(G, params["a"])
    elif model == "typeC_flip":
        target = descent.measure_M(G, 2 * params["k"] + 1)
    else:
        target = cellini.measure_xk(G, 2)
    if enc == "position":
        target = target.inverse_pushforward()
    return _status(law == target), {"model": model, "params": params, "encoding": enc}


def check_monte_carlo(n=6, a=2, trials=10**6, seed=0, threshold=0.01):
    emp = shuffles.monte_carlo("gsr", {"n": n, "a": a}, trials, seed)
    tv = emp.tv_to(shuffles.exact_model_distribution("gsr", {"n": n, "a": a}))
    again = shuffles.monte_carlo("gsr", {"n": n, "a": a}, trials, seed)
    same = emp.to_csv() == again.to_csv()
    if not same:
        return "FAIL", {"tv": tv, "reproducible": False}
    return ("PASS" if tv < threshold else "WARN"), {"tv": tv, "threshold": threshold, "reproducible": True}


CHECKS = {
    "agree": (check_agree, True),
    "endpoints": (check_endpoints, True),
    "convolution": (check_convolution, True),
    "spectrum": (check_spectrum, True),
    "identities": (check_identities, True),
    "h_routes": (check_h_routes, True),
    "good_prime": (check_good_prime, True),
    "generic": (check_generic, False),
    "cellini_measure": (check_cellini_measure, True),
    "cellini_convolution": (check_cellini_convolution, True),
    "coincide": (check_coincide, True),
    "nonpolynomial": (check_nonpolynomial, True),
    "oracle": (check_oracle, False),
    "monte_carlo": (check_monte_carlo, False),
}


def run_check(item: dict) -> CheckResult:
    """Run one scope item such as {"check": "agree", "group": "B3", "x": "symbolic"}."""
    item = dict(item)
    name = item.pop("check")
    if name not in CHECKS:
        raise ValueError(f"unknown check {name!r}; choose from {', '.join(sorted(CHECKS))}")
    fn, needs_group = CHECKS[name]
    target = ", ".join(f"{k}={v}" for k, v in item.items())
    start = time.perf_counter()
    if needs_group:
        G = resolve_group(item.pop("group"))
        status, detail = fn(G, **item)
    else:
        status, detail = fn(**item)
    return CheckResult(name, target, status, detail, time.perf_counter() - start)


DEFAULT_SCOPE = (
    [{"check": "agree", "group": g} for g in ("A3", "B3", "C3", "G2", "I2(5)", "H3")]
    + [{"check": "endpoints", "group": g} for g in ("A4", "B4", "D4", "F4", "H3")]
    + [{"check": "convolution", "group": g} for g in ("A3", "B3", "G2", "H3")]
    + [{"check": "spectrum", "group": g} for g in ("A3", "B3", "G2", "H3")]
    + [{"check": "identities", "group": g} for g in ("A3", "B3", "D4", "G2", "H3", "F4")]
    + [{"check": "h_routes", "group": g} for g in ("A3", "B3", "D4", "G2", "H3")]
    + [{"check": "good_prime", "group": "G2", "p": p} for p in (3, 5, 7)]
    + [{"check": "good_prime", "group": "B3", "p": p} for p in (3, 5)]
    + [{"check": "generic"}]
    + [{"check": "cellini_measure", "group": g, "k": k} for g in ("A2", "B3", "C3") for k in (2, 3)]
    + [{"check": "cellini_convolution", "group": "C2", "k": 3, "h": 3}]
    + [{"check": "coincide", "group": g, "k": 3} for g in ("C2", "C3")]
    + [{"check": "nonpolynomial", "group": "A2"}]
    + [{"check": "oracle", "model": "gsr", "n": 4, "a": 3},
       {"check": "oracle", "model": "typeC_flip", "n": 3, "k": 1, "encoding": "position"},
       {"check": "oracle", "model": "x2_physical", "N": 4}]
)


def verify_all(scope=None) -> dict:
    """Run every item of ``scope`` (default: DEFAULT_SCOPE) and summarize."""
    scope = DEFAULT_SCOPE if scope is None else list(scope)
    if not scope:
        warnings.warn("empty verification scope")
        return {"status": "PASS", "warning": "empty scope", "results": []}
    results = [run_check(item) for item in scope]
    failed = [r for r in results if r.failed]
    return {"status": "FAIL" if failed else "PASS", "failures": len(failed),
            "results": results}
