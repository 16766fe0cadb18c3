from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxshuffle import descent as D
from coxshuffle.coxeter import build_group
from coxshuffle.group_algebra import GroupAlgebraElement, SymbolicMeasure, convolve
from coxshuffle.polynomial import Poly

SMALL = ["A2", "A3", "B2", "B3", "C3", "D4", "G2", "H3", "I2(5)"]


def _closed_form_by_descents(G, factors_by_d, scale):
    """Numerators keyed by descent count, each a product of (x + c) over c."""
    return {d: Poly.from_roots([-c for c in cs]) / scale for d, cs in factors_by_d.items()}


def test_x_basis():
    for label in ("A2", "G2", "B3"):
        G = build_group(label)
        assert D.x_basis(G, []) == GroupAlgebraElement.from_function(G, lambda w: 1)
        assert D.x_basis(G, range(G.rank)) == GroupAlgebraElement.point_mass(G, G.identity)
    assert len(D.x_basis(build_group("A2"), [0]).support()) == 3


def test_mu_beta_basic_entries():
    for label in SMALL:
        G = build_group(label)
        mb = D.mu_beta(G)
        assert mb.mu_entry(0, 0) == G.order
        assert mb.beta_entry(0, 0) == Fraction(1, G.order)
    G2 = build_group("G2")
    mb = D.mu_beta(G2)
    for K in range(4):
        for J in range(4):
            if K & ~J:
                assert mb.mu_entry(K, J) == 0


def test_mu_beta_inverse():
    G = build_group("B3")
    mb = D.mu_beta(G)
    n = len(mb.masks)
    for i in range(n):
        for j in range(n):
            s = sum(mb.mu[i][k] * mb.beta[k][j] for k in range(n))
            assert s == (1 if i == j else 0)


def test_g2_idempotents():
    G = build_group("G2")
    e = D.idempotents(G)
    x = lambda J: D.x_basis(G, J)
    assert e[frozenset()] == GroupAlgebraElement.from_function(G, lambda w: Fraction(1, 12))
    for a in (0, 1):
        assert e[frozenset({a})] == x([]).scale(Fraction(-1, 4)) + x([a]).scale(Fraction(1, 2))
    full = x([]).scale(Fraction(5, 12)) - x([0]).scale(Fraction(1, 2)) - x([1]).scale(Fraction(1, 2)) + x([0, 1])
    assert e[frozenset({0, 1})] == full


@pytest.mark.parametrize("label", ["A2", "A3", "B2", "G2", "B3", "H3"])
def test_idempotents_orthogonal_and_sum_to_one(label):
    G = build_group(label)
    e = D.idempotents(G)
    reps = list(e)
    total = GroupAlgebraElement.zero(G)
    for a in reps:
        total = total + e[a]
        sums = e[a].total()
        assert sums == (1 if not a else 0)
    assert total == GroupAlgebraElement.identity(G)
    if G.order <= 48:
        for a in reps:
            for b in reps:
                prod = convolve(e[a], e[b])
                assert prod == (e[a] if a == b else GroupAlgebraElement.zero(G))


def test_m_g2_closed_forms():
    G = build_group("G2")
    sym = D.measure_M(G)
    forms = _closed_form_by_descents(G, {0: (5, 1), 1: (1, -1), 2: (-1, -5)}, 12)
    for w in G.elements:
        assert sym[w] == forms[G.descent_count(w)]
    m2 = D.measure_M(G, 2)
    vals = {G.descent_count(w): m2[w] for w in G.elements}
    assert vals == {0: Fraction(7, 16), 1: Fraction(1, 16), 2: Fraction(-1, 16)}


def test_m_h3_closed_forms():
    G = build_group("H3")
    sym = D.measure_M(G)
    forms = _closed_form_by_descents(G, {0: (9, 5, 1), 1: (5, 1, -1), 2: (1, -1, -5), 3: (-1, -5, -9)}, 120)
    for w in G.elements:
        assert sym[w] == forms[G.descent_count(w)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_type_a_closed_form(n):
    # M(w) = C(x + n - 1 - d, n) / x^n while the stored numerator sits over x^(n-1)
    G = build_group("A", n - 1)
    sym = D.measure_M(G)
    x = Poly.monomial(1)
    for w in G.elements:
        assert sym[w] * x == Poly.binomial(n - 1 - G.descent_count(w), 1, n)


def test_m_s3_at_two():
    G = build_group("A2")
    m = D.measure_M(G, 2)
    vals = sorted(m.coeffs)
    assert m[G.identity] == Fraction(1, 2) and m[G.longest] == 0
    assert vals.count(Fraction(1, 8)) == 4


@pytest.mark.parametrize("label", SMALL)
def test_m_at_one_is_point_mass(label):
    G = build_group(label)
    assert D.measure_M(G, 1) == GroupAlgebraElement.identity(G)


@settings(max_examples=30, deadline=None)
@given(label=st.sampled_from(SMALL), num=st.integers(-20, 20).filter(bool), den=st.integers(1, 9))
def test_m_sums_to_one(label, num, den):
    G = build_group(label)
    assert D.measure_M(G, Fraction(num, den)).total() == 1


@pytest.mark.parametrize("label", SMALL)
def test_symbolic_total_is_x_to_the_n(label):
    G = build_group(label)
    assert D.measure_M(G).total() == Poly.monomial(G.rank)


def test_spectrum_a2():
    G = build_group("A2")
    assert D.spectrum_M(G, 2) == [(1, 1), (Fraction(1, 2), 3), (Fraction(1, 4), 2)]


@pytest.mark.parametrize("label", SMALL + ["F4"])
def test_spectrum_profile_basic(label):
    G = build_group(label)
    prof = D.spectrum_profile(G)
    assert sum(prof) == G.order and prof[0] == 1


@pytest.mark.parametrize("label", ["A2", "A3", "B3", "G2", "H3", "I2(5)"])
def test_spectrum_charpoly(label):
    rep = D.verify_spectrum_M(build_group(label), 2)
    assert rep["method"] == "charpoly" and rep["ok"]


def test_endpoint_values():
    for label in SMALL:
        G = build_group(label)
        top, bottom = D.endpoint_values(G, 1)
        assert top == 1
        sym = D.measure_M(G)
        t, b = D.endpoint_values(G)
        assert sym[G.identity] == t and sym[G.longest] == b
    G2 = build_group("G2")
    assert D.measure_M(G2, 5)[G2.longest] == 0
    H3 = build_group("H3")
    assert D.measure_M(H3)[H3.identity] == Poly.from_roots([-1, -5, -9]) / 120


def test_measure_m_rejects_zero():
    with pytest.raises(ValueError):
        D.measure_M(build_group("A2"), 0)
