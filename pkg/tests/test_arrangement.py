from fractions import Fraction
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coxshuffle import arrangement as arr
from coxshuffle import descent
from coxshuffle.coxeter import build_group
from coxshuffle.lattice import lattice_from_hyperplanes
from coxshuffle.polynomial import Poly

X = Poly.monomial(1)


def _braid(n):
    """Essential braid arrangement of S_n via the reflection arrangement of A_{n-1}."""
    return arr.reflection_arrangement(build_group("A", n - 1))


@pytest.mark.parametrize("label,count,dim", [("A2", 3, 2), ("G2", 6, 2), ("B3", 9, 3), ("H3", 15, 3)])
def test_hyperplane_counts(label, count, dim):
    A = arr.reflection_arrangement(build_group(label))
    assert A.n_hyperplanes == count and A.dim == dim


def test_boolean_lattice_mobius():
    A = arr.test_arrangements()["boolean2"]
    L = A.lattice
    assert len(L) == 4
    assert sorted(L.mobius_row(0).values()) == [-1, -1, 1, 1]
    assert A.n_chambers == 4
    assert (-1) ** 2 * L.charpoly(0)(-1) == 4
    assert len(A.faces()) == 9


def test_braid_a2_lattice():
    A = _braid(3)
    L = A.lattice
    origin = max(L.nodes, key=lambda v: bin(L.masks[v]).count("1"))
    assert L.dim(origin) == 0
    assert L.mobius(0, origin) == 2
    assert L.charpoly(0) == Poly.from_roots([1, 2])
    assert L.charpoly(origin) == Poly([1])
    for y in L.nodes:
        if L.dim(y) == 1:
            assert L.charpoly(y) == X - 1
    assert A.n_chambers == 6 and len(A.faces()) == 13


@pytest.mark.parametrize("n", [3, 4, 5])
def test_braid_charpoly(n):
    assert _braid(n).lattice.charpoly(0) == Poly.from_roots(range(1, n))


@pytest.mark.parametrize("label", ["G2", "B3", "H3", "F4", "D4", "A4"])
def test_reflection_charpoly_factors_by_exponents(label):
    G = build_group(label)
    assert arr.reflection_arrangement(G).lattice.charpoly(0) == Poly.from_roots(G.exponents)


def test_face_counts():
    assert len(arr.reflection_arrangement(build_group("G2")).faces()) == 25
    for label in ("A3", "B3", "H3"):
        G = build_group(label)
        expected = sum(G.order // G.parabolic_order(K) for K in range(1 << G.rank))
        assert len(arr.reflection_arrangement(G).faces()) == expected


def test_lattice_from_hyperplanes_matches_reflection_lattice():
    G = build_group("B3")
    A = arr.reflection_arrangement(G)
    L2 = lattice_from_hyperplanes(A.hyperplanes, A.dim)
    assert len(L2) == len(A.lattice)
    assert L2.charpoly(0) == A.lattice.charpoly(0)
    assert sorted(L2.masks) == sorted(A.lattice.masks)


@pytest.mark.parametrize("label", ["A2", "B2", "A3", "B3"])
def test_tits_projection_three_ways(label):
    G = build_group(label)
    A = arr.reflection_arrangement(G)
    for idx, face in enumerate(A.faces()):
        w, K = face.coset
        for c in G.elements:
            by_signs = arr.tits_project(A, idx, c)
            assert by_signs == arr.tits_project_coset(G, w, K, c)
            assert by_signs == arr.tits_project_fewest(A, idx, c)


def test_tits_projection_extremes():
    G = build_group("A3")
    A = arr.reflection_arrangement(G)
    faces = A.faces()
    central = next(i for i, f in enumerate(faces) if f.coset[1] == G.full_mask)
    for c in G.elements:
        assert arr.tits_project(A, central, c) == c
    for i, f in enumerate(faces):
        if f.coset[1] == 0:
            assert arr.tits_project(A, i, 5) == f.coset[0]


def test_face_weights_a2():
    A = _braid(3)
    fw = arr.face_weights(A, 2)
    vals = sorted(fw.values())
    assert vals.count(Fraction(0)) == 6 and vals.count(Fraction(1, 8)) == 6 and vals.count(Fraction(1, 4)) == 1
    assert fw.total() == 1


def test_face_weights_g2_at_five():
    G = build_group("G2")
    fw = arr.face_weights(arr.reflection_arrangement(G), 5)
    chamber_vals = {fw.face_value(i) for i, f in enumerate(arr.reflection_arrangement(G).faces()) if f.coset[1] == 0}
    assert chamber_vals == {0}


def test_central_face_weight():
    for label in ("A3", "B3", "H3"):
        G = build_group(label)
        A = arr.reflection_arrangement(G)
        fw = arr.face_weights(A, 3)
        central = next(i for i, f in enumerate(A.faces()) if f.coset[1] == G.full_mask)
        assert fw.face_value(central) == Fraction(1, 3**G.rank)


def test_h_b2_at_three():
    G = build_group("B2")
    H = arr.measure_H(G, 3)
    assert {G.descent_count(w): H[w] for w in G.elements} == {0: Fraction(1, 3), 1: Fraction(1, 9), 2: 0}


def test_h_g2_and_h3_symbolic():
    for label in ("G2", "H3", "B3", "A3"):
        G = build_group(label)
        assert arr.measure_H(G) == descent.measure_M(G)
    H3 = build_group("H3")
    assert arr.measure_H(H3)[H3.longest] == Poly.from_roots([1, 5, 9]) / 120


@pytest.mark.parametrize("n", [2, 3, 4])
def test_h_type_b_closed_form(n):
    G = build_group("B", n)
    H = arr.measure_H(G)
    for w in G.elements:
        # C((x-1)/2 + n - d, n) over x^n
        assert H[w] == Poly.binomial(Fraction(-1, 2) + n - G.descent_count(w), Fraction(1, 2), n)


def test_transition_matrix_identity_row_and_rows():
    G = build_group("A2")
    A = arr.reflection_arrangement(G)
    T, den = arr.bhr_transition_matrix(A, arr.face_weights(A, 2))
    Tq = arr.transition_matrix_fractions(T, den)
    H = arr.measure_H(G, 2)
    assert [Tq[G.identity][c] for c in G.elements] == list(H.coeffs)
    assert all(sum(row) == 1 for row in Tq)
    assert {Tq[i][i] for i in range(6)} == {Fraction(1, 2)}


def test_point_mass_on_central_face_gives_identity():
    G = build_group("A3")
    A = arr.reflection_arrangement(G)
    central = next(i for i, f in enumerate(A.faces()) if f.coset[1] == G.full_mask)
    T, den = arr.bhr_transition_matrix(A, {central: Fraction(1)})
    assert den == 1 and np.array_equal(T, np.eye(G.order, dtype=T.dtype))


def test_bhr_spectrum_values():
    A = _braid(3)
    assert arr.bhr_spectrum(A, 2) == [(1, 1), (Fraction(1, 2), 3), (Fraction(1, 4), 2)]
    B = arr.test_arrangements()["boolean2"]
    assert arr.bhr_spectrum(B, 2) == [(1, 1), (Fraction(1, 2), 2), (Fraction(1, 4), 1)]


@pytest.mark.parametrize("label", ["A2", "A3", "B3", "G2", "H3", "I2(5)"])
def test_bhr_charpoly(label):
    G = build_group(label)
    rep = arr.verify_bhr_spectrum(arr.reflection_arrangement(G), 2)
    assert rep["method"] == "charpoly" and rep["ok"]
    prof = {i: m for i, m in enumerate(descent.spectrum_profile(G)) if m}
    assert rep["profile"] == prof


@pytest.mark.parametrize("name", sorted(arr.test_arrangements()))
def test_generic_arrangement_identities(name):
    A = arr.test_arrangements()[name]
    rep = arr.verify_lattice_identities(A)
    assert rep["fiber_sizes"]["ok"] and rep["upper_sums"]["ok"] and rep["weights_sum_to_one"]["ok"]
    assert arr.verify_bhr_spectrum(A, 3)["ok"]


def test_triangle_is_non_central():
    A = arr.test_arrangements()["triangle"]
    assert not A.is_central and A.n_chambers == 7


def test_identities_all_groups():
    for label in ("A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "G2", "F4", "H3", "I2(7)"):
        rep = arr.verify_identities(build_group(label))
        assert rep["ok"], label


def test_alternating_sum_a2_and_ratio_bad():
    G = build_group("A2")
    A = arr.reflection_arrangement(G)
    assert sum((-1) ** bin(K).count("1") * G.order // G.parabolic_order(K) for K in range(4)) == 1
    K = 1
    assert G.normalizer_order(K) * G.class_size(K) // G.parabolic_order(K) == 2
    assert (-1) * A.charpoly_K(K)(-1) == 2


def test_upper_charpoly_sum_g2():
    A = arr.reflection_arrangement(build_group("G2"))
    L = A.lattice
    total = sum((L.charpoly(z) for z in L.nodes), Poly())
    assert total == X * X


@pytest.mark.parametrize("label", ["A3", "B3", "G2", "H3", "D4"])
def test_parabolic_formula_equals_face_weights(label):
    G = build_group(label)
    for x in (2, 3, 5):
        assert arr.measure_H_parabolic(G, x) == arr.measure_H_face_weights(G, x)
    assert arr.measure_H_parabolic(G) == arr.measure_H_face_weights(G)


def test_good_primes():
    for label, ps in (("G2", (5, 7)), ("B3", (3, 5))):
        for p in ps:
            rep = arr.good_prime_positivity(build_group(label), p)
            assert rep["good"] and rep["ok"] and rep["negative_face_weights"] == 0
    rep = arr.good_prime_positivity(build_group("G2"), 3)
    assert not rep["good"] and rep["negative_face_weights"] > 0
    assert rep["min_face_weight"] == Fraction(2 * -2, 9 * 12)


def test_good_prime_errors():
    with pytest.raises(arr.NotApplicableError):
        arr.good_prime_positivity(build_group("H3"), 7)
    with pytest.raises(ValueError):
        arr.good_prime_positivity(build_group("G2"), 6)


def test_load_arrangement_formats(tmp_path):
    j = tmp_path / "tri.json"
    j.write_text(json.dumps({"dim": 2, "hyperplanes": [{"normal": [1, 0], "offset": 0},
                                                       [0, 1, 0], {"normal": ["1", "1"], "offset": "1"}]}))
    t = tmp_path / "tri.txt"
    t.write_text("2\n1 0 0\n0 1 0\n1 1 1  # x + y = 1\n")
    a1, a2 = arr.load_arrangement(j), arr.load_arrangement(t)
    assert a1.n_chambers == a2.n_chambers == 7
    assert a1.lattice.charpoly(0) == a2.lattice.charpoly(0)


def test_generic_rejects_bad_input():
    with pytest.raises(ValueError):
        arr.generic_arrangement([([0, 0], 1)], 2)
    with pytest.raises(ValueError):
        arr.generic_arrangement([([1, 0], 0), ([2, 0], 0)], 2)
    with pytest.raises(arr.ResourceLimitError):
        arr.generic_arrangement([([1, i], i) for i in range(20)], 2)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)),
                min_size=1, max_size=5, unique=True))
def test_random_line_arrangements(rows):
    hs = [([a, b], c) for a, b, c in rows if (a, b) != (0, 0)]
    try:
        A = arr.generic_arrangement(hs, 2)
    except ValueError:
        return
    rep = arr.verify_lattice_identities(A)
    assert rep["fiber_sizes"]["ok"] and rep["upper_sums"]["ok"] and rep["weights_sum_to_one"]["ok"]
    # Zaslavsky: chamber count is |chi(-1)|
    assert A.n_chambers == abs(A.lattice.charpoly(0)(-1))
