from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxshuffle import cellini as C
from coxshuffle.coxeter import build_group
from coxshuffle.group_algebra import GroupAlgebraElement


def test_affine_data_highest_roots():
    assert C.affine_data(build_group("A2")).highest_coeffs == (1, 1)
    assert C.affine_data(build_group("C2")).highest_coeffs == (2, 1)
    assert C.affine_data(build_group("B2")).highest_coeffs == (1, 2)
    A2 = build_group("A2")
    assert A2.ambient_roots[C.affine_data(A2).highest_root] == (1, 0, -1)
    C2 = build_group("C2")
    assert C2.ambient_roots[C.affine_data(C2).highest_root] == (2, 0)
    B2 = build_group("B2")
    assert B2.ambient_roots[C.affine_data(B2).highest_root] == (1, 1)


def test_coroot_lattice_membership():
    # A2: pairings (<a1,t>, <a2,t>) of integer zero-sum t = (t1, t2, t3) are (t1-t2, t2-t3)
    ad = C.affine_data(build_group("A2"))
    assert ad.in_coroot_lattice((1, 1)) and ad.in_coroot_lattice((2, -1))
    # C2 coroot lattice is Z^2: pairings (t1 - t2, 2 t2) with t integral
    ad = C.affine_data(build_group("C2"))
    assert ad.in_coroot_lattice((1, 2)) and not ad.in_coroot_lattice((0, 1))


def test_literal_reading_of_cyclic_descents():
    for label in ("A2", "A3", "B3", "C3", "G2"):
        G = build_group(label)
        lit = C.LITERAL_CONVENTION
        assert C.cyclic_descent(G, G.identity, lit) == frozenset()
        assert C.cyclic_descent(G, G.longest, lit) == frozenset(range(G.rank + 1))


def test_affine_reading_of_cyclic_descents():
    G = build_group("A2")
    assert C.cyclic_descent(G, G.identity) == {2}
    assert C.cyclic_descent(G, G.longest) == {0, 1}


def test_a2_alpha0_split():
    G = build_group("A2")
    n = G.rank
    without = [w for w in G.elements if not C.cyclic_descent_mask(G, w, C.LITERAL_CONVENTION) >> n & 1]
    assert len(without) == 3


def test_a2_k2_coefficients():
    G = build_group("A2")
    assert C.a_coeff(G, 2, {0, 1}) == 1
    assert C.a_coeff(G, 2, {2}) == 1
    assert C.a_coeff(G, 2, set()) == 0
    assert C.a_coeffs(G, 2) == {0b011: 1, 0b100: 1}


@pytest.mark.parametrize("label", ["A2", "C2", "B3"])
def test_x1_is_identity(label):
    G = build_group(label)
    assert C.measure_xk(G, 1) == GroupAlgebraElement.identity(G)


def test_c2_k3_values():
    G = build_group("C2")
    x3 = C.measure_xk(G, 3)
    assert {G.descent_count(w): x3[w] for w in G.elements} == {0: Fraction(1, 3), 1: Fraction(1, 9), 2: 0}


def test_a2_x2_uniform_on_four():
    G = build_group("A2")
    x2 = C.measure_xk(G, 2)
    decks = {G.signed_permutation(w): x2[w] for w in G.elements if x2[w]}
    assert decks == {d: Fraction(1, 4) for d in [(1, 2, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]}


@pytest.mark.parametrize("label,kmax", [("A2", 5), ("A3", 5), ("B3", 5), ("C3", 5), ("G2", 5), ("D4", 3),
                                        ("B4", 3), ("A5", 2)])
def test_measure_property(label, kmax):
    G = build_group(label)
    for k in range(1, kmax + 1):
        assert C.measure_identity_check(G, k)["ok"]
        assert C.measure_xk(G, k).total() == 1


@pytest.mark.parametrize("label,k,h", [("C2", 3, 3), ("A2", 2, 2), ("A2", 2, 3), ("B2", 2, 2), ("G2", 2, 2),
                                       ("A3", 2, 2), ("C2", 1, 4)])
def test_convolution(label, k, h):
    assert C.verify_convolution_xk(build_group(label), k, h)


@pytest.mark.parametrize("n,k", [(2, 1), (2, 3), (2, 5), (3, 1), (3, 3), (3, 5)])
def test_type_c_coincidence(n, k):
    rep = C.verify_coincide(n, k)
    assert rep["ok"] and rep["closed_form"]


def test_coincidence_rejects_even_k():
    with pytest.raises(C.NotApplicableError):
        C.verify_coincide(2, 2)


def test_literal_convention_fails_convolution():
    assert not C.verify_convolution_xk(build_group("A2"), 2, 2, C.LITERAL_CONVENTION)


def test_calibration_selects_default():
    rep = C.calibrate_convention()
    assert len(rep["rows"]) == 8
    assert rep["chosen"] == C.DEFAULT_CONVENTION
    assert C.LITERAL_CONVENTION not in rep["survivors"]


def test_non_polynomiality_in_k():
    rep = C.non_polynomiality_witness()
    assert rep["witnesses"]
    ident = next(w for w in rep["witnesses"] if w["element"] == 0)
    assert [ident["scaled_values"][k] for k in (2, 3, 4, 5)] == [1, 2, 4, 5]


def test_unsupported_groups():
    with pytest.raises(C.NotApplicableError):
        C.measure_xk(build_group("H3"), 2)
    with pytest.raises(C.NotApplicableError):
        C.measure_xk(build_group("A6"), 2)
    with pytest.raises(C.NotApplicableError):
        C.measure_xk(build_group("A2"), C.MAX_K + 1)
    with pytest.raises(ValueError):
        C.measure_xk(build_group("A2"), 0)


@settings(max_examples=20, deadline=None)
@given(label=st.sampled_from(["A2", "A3", "B2", "C2", "G2", "B3"]), k=st.integers(1, 6))
def test_measure_sums_to_one_property(label, k):
    G = build_group(label)
    assert C.measure_xk(G, k).total() == 1
    assert C.measure_identity_check(G, k)["lhs"] == k**G.rank
