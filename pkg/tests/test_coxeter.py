from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxshuffle.coxeter import UnsupportedGroupError, build_group, parse_type

SMALL = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "H3", "I2(5)"]


def test_orders_and_exponents():
    G2 = build_group("G2")
    assert G2.order == 12 and G2.exponents == (1, 5)
    H3 = build_group("H3")
    assert H3.order == 120 and H3.exponents == (1, 5, 9)
    A2 = build_group("A", 2)
    assert A2.order == 6 and len(A2.roots) == 6 and A2.exponents == (1, 2)


@pytest.mark.parametrize("label,order", [("A4", 120), ("B4", 384), ("C3", 48), ("D4", 192), ("D5", 1920),
                                         ("F4", 1152), ("I2(7)", 14), ("A1", 2)])
def test_orders(label, order):
    assert build_group(label).order == order


def test_exponents_multiply_to_order():
    for label in SMALL + ["F4", "B4"]:
        G = build_group(label)
        prod = 1
        for m in G.exponents:
            prod *= m + 1
        assert prod == G.order
        assert sum(G.exponents) == G.n_pos


def test_parse_type_forms():
    assert parse_type("B", 3) == ("B", 3)
    assert parse_type("b3") == ("B", 3)
    assert parse_type("I2(7)") == ("I2", 7)
    assert parse_type("I2", 7) == ("I2", 7)


@pytest.mark.parametrize("label", ["A8", "B6", "E6", "D2", "H5", "I2(31)", "Q3"])
def test_unsupported(label):
    with pytest.raises(UnsupportedGroupError):
        build_group(label)


def test_descent_sets_basic():
    for label in SMALL:
        G = build_group(label)
        assert G.descent_set(G.identity) == frozenset()
        assert G.descent_set(G.longest) == frozenset(range(G.rank))
    A2 = build_group("A2")
    s1 = A2.element_from_word([0])
    assert A2.descent_set(s1) == {0}


def test_parabolic_subgroups():
    A2 = build_group("A2")
    assert A2.parabolic_subgroup([]) == {A2.identity}
    assert len(A2.parabolic_subgroup([0])) == 2
    G2 = build_group("G2")
    assert len(G2.parabolic_subgroup([0, 1])) == 12


def test_normalizer_orders():
    A2 = build_group("A2")
    assert A2.normalizer_order([0]) == 2
    for label in SMALL:
        G = build_group(label)
        assert G.normalizer_order([]) == G.order
        assert G.normalizer_order(range(G.rank)) == G.order


def test_normalizer_by_brute_force():
    G = build_group("B3")
    for K in range(1 << G.rank):
        P = set(G.parabolic_mask(K))
        count = sum(1 for w in G.elements
                    if {G.mul(G.mul(w, p), G.inverse(w)) for p in P} == P)
        assert count == G.normalizer_order(K)


def test_subset_classes():
    G2 = build_group("G2")
    classes = G2.subset_classes()
    assert len(classes) == 4 and all(c.size == 1 for c in classes)
    A2 = build_group("A2")
    sizes = sorted((c.rank, c.size) for c in A2.subset_classes())
    assert sizes == [(0, 1), (1, 2), (2, 1)]
    for label in SMALL:
        G = build_group(label)
        assert G.class_size(0) == 1


def test_fixed_space_dimensions():
    A2 = build_group("A2")
    assert A2.fixed_space_dimension(A2.identity) == 2
    for w in A2.elements:
        if A2.length(w) % 2 == 1:
            assert A2.fixed_space_dimension(w) == 1


@pytest.mark.parametrize("label", SMALL + ["F4"])
def test_fixed_space_generating_function(label):
    G = build_group(label)
    counts = G.fixed_dimension_counts()
    for x in (1, 2, 3):
        lhs = sum(c * x**d for d, c in enumerate(counts))
        rhs = 1
        for m in G.exponents:
            rhs *= x + m
        assert lhs == rhs


def test_min_coset_rep_matches_descent_condition_b3():
    # w is minimal in wW_K iff no element of K is a descent, checked by length
    G = build_group("B3")
    for K in range(1 << G.rank):
        P = G.parabolic_mask(K)
        for w in G.elements:
            coset_min = min(G.length(G.mul(w, p)) for p in P)
            brute = G.length(w) == coset_min
            assert brute == G.is_min_coset_rep(w, G.subset_of(K))
            assert brute == (G.descent_mask(w) & K == 0)


def test_identity_and_longest_min_coset():
    G = build_group("A3")
    assert all(G.is_min_coset_rep(G.identity, G.subset_of(K)) for K in range(8))
    assert not any(G.is_min_coset_rep(G.longest, G.subset_of(K)) for K in range(1, 8))


@settings(max_examples=60, deadline=None)
@given(label=st.sampled_from(SMALL), data=st.data())
def test_group_axioms(label, data):
    G = build_group(label)
    u = data.draw(st.integers(0, G.order - 1))
    v = data.draw(st.integers(0, G.order - 1))
    w = data.draw(st.integers(0, G.order - 1))
    assert G.mul(G.mul(u, v), w) == G.mul(u, G.mul(v, w))
    assert G.mul(u, G.inverse(u)) == G.identity
    assert G.length(u) == G.inversion_count(u) == G.length(G.inverse(u))
    assert G.element_from_word(G.words[u]) == u
    assert G.length(G.mul(u, G.longest)) == G.length(G.longest) - G.length(u)


@settings(max_examples=40, deadline=None)
@given(label=st.sampled_from(["A3", "B3", "C3", "D4"]), data=st.data())
def test_signed_permutation_round_trip(label, data):
    G = build_group(label)
    w = data.draw(st.integers(0, G.order - 1))
    assert G.element_from_signed_permutation(G.signed_permutation(w)) == w


def test_mul_row_agrees_with_mul():
    G = build_group("H3")
    row = G.mul_row(17)
    assert all(row[v] == G.mul(17, v) for v in G.elements)


def test_bad_primes_from_roots_agree_with_table():
    for label in ["A3", "B3", "C3", "D4", "G2", "F4"]:
        G = build_group(label)
        assert G.bad_primes_from_roots() == G.bad_primes
    assert build_group("G2").bad_primes == {2, 3}


def test_summary_json_is_deterministic():
    assert build_group("G2").summary_json() == build_group("G", 2).summary_json()
    assert Fraction(build_group("A2").summary()["order"]) == 6
