"""Acceptance suite: twelve end-to-end criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also printed when output is captured.
"""
import time
from fractions import Fraction
from math import comb

import pytest

from coxshuffle import arrangement as arr
from coxshuffle import cellini, descent, shuffles
from coxshuffle.coxeter import SUPPORTED, build_group
from coxshuffle.group_algebra import GroupAlgebraElement, convolve
from coxshuffle.polynomial import Poly

X = Poly.monomial(1)


def supported_labels():
    out = []
    for fam, (lo, hi) in SUPPORTED.items():
        if fam == "I2":
            out += [f"I2({m})" for m in range(lo, hi + 1)]
        elif fam in ("G", "F"):
            out.append(f"{fam}{lo}")
        else:
            out += [f"{fam}{r}" for r in range(lo, hi + 1)]
    return out


@pytest.fixture
def report(capsys):
    start = time.perf_counter()

    def emit(number, ok, text):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[acceptance {number:2d}] {status}: {text} ({time.perf_counter() - start:.1f}s)")
        assert ok, text
    return emit


def _forms(factors_by_d, scale):
    return {d: Poly.from_roots([-c for c in cs]) / scale for d, cs in factors_by_d.items()}


def _matches_forms(G, sym, forms):
    return all(sym[w] == forms[G.descent_count(w)] for w in G.elements)


def test_01_g2_golden(report):
    G = build_group("G2")
    M = descent.measure_M(G)
    ok = _matches_forms(G, M, _forms({0: (5, 1), 1: (1, -1), 2: (-1, -5)}, 12))
    ok = ok and arr.measure_H(G) == M
    report(1, ok, "G2: symbolic M equals the three closed forms; H = M")


def test_02_h3_golden(report):
    G = build_group("H3")
    M = descent.measure_M(G)
    forms = _forms({0: (9, 5, 1), 1: (5, 1, -1), 2: (1, -1, -5), 3: (-1, -5, -9)}, 120)
    ok = _matches_forms(G, M, forms) and arr.measure_H(G) == M
    report(2, ok, "H3: symbolic M equals the four closed forms; H = M")


def test_03_type_a_b_golden(report):
    ok = True
    for n in range(2, 6):
        G = build_group("A", n - 1)
        M = descent.measure_M(G)
        # stored numerators are over x^(n-1); the closed form is over x^n
        ok &= all(M[w] * X == Poly.binomial(n - 1 - G.descent_count(w), 1, n) for w in G.elements)
    # B_1 is A_1 as a Coxeter group
    H1 = arr.measure_H(build_group("A1"))
    A1 = build_group("A1")
    ok &= all(H1[w] == Poly.binomial(Fraction(-1, 2) + 1 - A1.descent_count(w), Fraction(1, 2), 1)
              for w in A1.elements)
    for n in range(2, 5):
        G = build_group("B", n)
        H = arr.measure_H(G)
        ok &= all(H[w] == Poly.binomial(Fraction(-1, 2) + n - G.descent_count(w), Fraction(1, 2), n)
                  for w in G.elements)
    report(3, ok, "M_{S_n,x} for n<=5 and H_{B_n,x} for n<=4 match the binomial closed forms")


def test_04_endpoint_formulas(report):
    bad = []
    for label in supported_labels():
        G = build_group(label)
        if label == "H4":
            for x in (2, 3, 5):
                M = descent.measure_M(G, x)
                top, bottom = descent.endpoint_values(G, x)
                if (M[G.identity], M[G.longest]) != (top, bottom):
                    bad.append((label, x))
            continue
        M = descent.measure_M(G)
        top, bottom = descent.endpoint_values(G)
        if (M[G.identity], M[G.longest]) != (top, bottom):
            bad.append(label)
    report(4, not bad, f"endpoint formulas at id and w0 for all {len(supported_labels())} supported groups "
                       f"(H4 at x=2,3,5); failures: {bad}")


def test_05_convolution(report):
    ok = True
    for label in ("A3", "B3", "G2", "H3"):
        G = build_group(label)
        ok &= convolve(descent.measure_M(G, 2), descent.measure_M(G, 3)) == descent.measure_M(G, 6)
    ok &= cellini.verify_convolution_xk(build_group("C2"), 3, 3)
    report(5, ok, "M_2*M_3 = M_6 for A3, B3, G2, H3; x_3*x_3 = x_9 for C2")


def test_06_spectra(report):
    ok = True
    notes = []
    for label in ("A3", "B3", "G2", "H3", "B4", "F4"):
        G = build_group(label)
        m_rep = descent.verify_spectrum_M(G, 2)
        b_rep = arr.verify_bhr_spectrum(arr.reflection_arrangement(G), 2)
        prof_m = {i: m for i, m in enumerate(descent.spectrum_profile(G)) if m}
        same = prof_m == b_rep["profile"]
        if G.order <= 120:
            ok &= m_rep["method"] == "charpoly" and b_rep["method"] == "charpoly"
        else:
            ok &= "trace" in m_rep["method"] and m_rep.get("annihilation_ok", False)
        ok &= m_rep["ok"] and b_rep["ok"] and same
        notes.append(f"{label}:{m_rep['method']}/{b_rep['method']}")
    report(6, ok, "spectra at x=2 with agreeing multiplicity profiles; " + ", ".join(notes))


def test_07_identity_suite(report):
    ok = True
    for label in supported_labels():
        G = build_group(label)
        rep = arr.verify_identities(G, raise_on_failure=False)
        ok &= rep["ok"]
        if G.rank <= 4:
            ok &= arr.reflection_arrangement(G).exhaustive
    for name, A in arr.test_arrangements().items():
        rep = arr.verify_lattice_identities(A)
        ok &= rep["fiber_sizes"]["ok"] and rep["upper_sums"]["ok"] and rep["weights_sum_to_one"]["ok"]
    ok &= not arr.test_arrangements()["triangle"].is_central
    report(7, ok, "face weights sum to 1, fiber and upper-sum identities, normalizer ratio, weighted-sum identity x^n and alternating sum 1 "
                  "on all supported W and 5 generic arrangements")


def test_08_parabolic_formula_equals_face_weights(report):
    bad = []
    for label in supported_labels():
        G = build_group(label)
        for x in (2, 3, 5):
            if arr.measure_H_parabolic(G, x) != arr.measure_H_face_weights(G, x):
                bad.append((label, x))
    report(8, not bad, f"parabolic-formula and face-weight H agree at x=2,3,5 for all supported W; failures: {bad}")


def test_09_good_primes(report):
    ok = True
    for label, ps in (("G2", (5, 7)), ("B3", (3, 5)), ("F4", (5, 7))):
        for p in ps:
            rep = arr.good_prime_positivity(build_group(label), p)
            ok &= rep["good"] and rep["negative_face_weights"] == 0 and rep["negative_H_values"] == 0
    bad = arr.good_prime_positivity(build_group("G2"), 3)
    ok &= bad["negative_face_weights"] > 0
    report(9, ok, "nonnegative face weights at good primes; negative weight exhibited for G2, p=3")


def test_10_cellini(report):
    ok = True
    for n in (2, 3):
        for k in (1, 3, 5):
            ok &= cellini.verify_coincide(n, k)["ok"]
    for label in ("A2", "A3", "B3", "C3"):
        G = build_group(label)
        for k in range(1, 6):
            ok &= cellini.measure_identity_check(G, k)["ok"] and cellini.measure_xk(G, k).total() == 1
    wit = cellini.non_polynomiality_witness(build_group("A2"))
    ok &= bool(wit["witnesses"])
    report(10, ok, f"x_k = M = H for C2/C3 at k=1,3,5; measure property; {len(wit['witnesses'])} "
                   f"non-polynomial coefficients in k on A2")


def test_11_oracle_equivalence(report):
    ok = True
    for n in range(2, 6):
        for a in range(1, 5):
            M = descent.measure_M(build_group("A", n - 1), a)
            ok &= shuffles.exact_model_distribution("gsr", {"n": n, "a": a}, "card") == M
    for n in (2, 3):
        target = descent.measure_M(build_group("C", n), 3).inverse_pushforward()
        ok &= shuffles.exact_model_distribution("typeC_flip", {"n": n, "k": 1}, "position") == target
    for N in (3, 4):
        x2 = cellini.measure_xk(build_group("A", N - 1), 2)
        ok &= shuffles.exact_model_distribution("x2_physical", {"N": N}, "card") == x2
    cal = shuffles.calibrate_encodings()
    conv = cellini.calibrate_convention()["chosen"]
    ok &= conv == cellini.DEFAULT_CONVENTION
    summary = "; ".join(f"{m}: measure<-{v['measure']}, inverse<-{v['inverse']}" for m, v in cal.items())
    report(11, ok, f"GSR = M (card encoding), flip = inverse of M_C3 (position encoding), x2 procedure = x_2 "
                   f"(card encoding). Calibration: Cdes reading [{conv.label()}]; {summary}")


def test_12_monte_carlo(report):
    params = {"n": 6, "a": 2}
    first = shuffles.monte_carlo("gsr", params, 10**6, seed=2024)
    second = shuffles.monte_carlo("gsr", params, 10**6, seed=2024, workers=1)
    exact = shuffles.exact_model_distribution("gsr", params)
    tv = first.tv_to(exact)
    same = first.to_csv() == second.to_csv()
    ok = tv < 0.01 and same
    assert exact[exact.group.identity] == Fraction(comb(7, 6), 64)
    report(12, ok, f"gsr n=6 a=2 10^6 trials: TV = {tv:.5f} < 0.01; byte-identical rerun: {same}")
