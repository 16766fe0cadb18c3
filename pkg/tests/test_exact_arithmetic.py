import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxshuffle import linalg
from coxshuffle.coxeter import build_group
from coxshuffle.fields import cos_field, sign, to_float, two_cos
from coxshuffle.group_algebra import GroupAlgebraElement, SignedMeasure, convolve
from coxshuffle.polyhedra import solve_strict_system
from coxshuffle.polynomial import Poly

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@pytest.mark.parametrize("m", [4, 5, 6, 7, 8, 10, 12, 30])
def test_two_cos_value_and_sign(m):
    c = two_cos(m)
    assert abs(to_float(c) - 2 * math.cos(math.pi / m)) < 1e-9
    assert sign(c) == 1
    assert sign(c - 2) == -1


def test_golden_ratio_field():
    phi = two_cos(5)
    assert phi * phi == phi + 1
    assert (phi - 1) * phi == 1
    assert phi.inverse() == phi - 1
    assert cos_field(3) is None and two_cos(3) == 1


@settings(max_examples=50, deadline=None)
@given(a=fracs, b=fracs, c=fracs, d=fracs)
def test_field_arithmetic_properties(a, b, c, d):
    phi = two_cos(5)
    x = phi * a + b
    y = phi * c + d
    assert x * y == y * x
    assert (x + y) - y == x
    if x != 0:
        assert (x * y) * x.inverse() == y
    assert sign(x) == (to_float(x) > 0) - (to_float(x) < 0)


@settings(max_examples=50, deadline=None)
@given(p=st.lists(fracs, max_size=5), q=st.lists(fracs, max_size=5), x=fracs)
def test_poly_ring_laws(p, q, x):
    P, Q = Poly(p), Poly(q)
    assert (P * Q)(x) == P(x) * Q(x)
    assert (P + Q)(x) == P(x) + Q(x)
    assert P - P == Poly()


def test_poly_constructors():
    assert Poly.from_roots([1, 2]) == Poly([2, -3, 1])
    assert Poly.binomial(0, 1, 2)(5) == 10
    assert Poly.binomial(Fraction(1), Fraction(1, 2), 2)(3) == Fraction(15, 8)
    assert Poly.monomial(3).degree == 3
    assert repr(Poly([1, -2, 0, 1])) == "1 - 2*x + x^3"
    assert Poly([Fraction(1, 2), 3]).to_json() == ["1/2", "3"]


def test_rref_rank_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert linalg.rank(rows) == 2
    ns = linalg.nullspace(rows)
    assert len(ns) == 1
    v = ns[0]
    assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_fraction_free(m):
    if linalg.rank(m) < 3:
        return
    inv = linalg.inverse_fraction_free(m)
    prod = linalg.mat_mul(m, inv)
    assert prod == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def test_charpoly_small():
    m = [[Fraction(2), Fraction(1)], [Fraction(0), Fraction(3)]]
    assert linalg.charpoly(m) == Poly.from_roots([2, 3])


def test_strict_system():
    # x > 0, y > 0, x + y < 1
    v = solve_strict_system([], [([1, 0], 0), ([0, 1], 0), ([-1, -1], -1)], 2)
    assert v[0] > 0 and v[1] > 0 and v[0] + v[1] < 1
    assert solve_strict_system([], [([1, 0], 0), ([-1, 0], 0)], 2) is None
    w = solve_strict_system([([1, -1], 0)], [([1, 0], 2)], 2)
    assert w[0] == w[1] and w[0] > 2
    assert solve_strict_system([([1, 0], 0), ([1, 0], 1)], [], 2) is None


def test_group_algebra_basics():
    G = build_group("A2")
    e = GroupAlgebraElement.identity(G)
    u = GroupAlgebraElement.uniform(G)
    assert convolve(e, u) == u and convolve(u, u) == u
    assert (u * 2).total() == 2
    s = GroupAlgebraElement.point_mass(G, 1)
    assert convolve(s, s) == e
    with pytest.raises(ValueError):
        SignedMeasure(G, [Fraction(1, 2)] * 6)


@settings(max_examples=20, deadline=None)
@given(label=st.sampled_from(["A2", "B2", "G2", "A3"]), data=st.data())
def test_convolution_associative_and_inverse_antihomomorphism(label, data):
    G = build_group(label)
    vec = lambda: [Fraction(data.draw(st.integers(-3, 3))) for _ in range(G.order)]
    f, g, h = (GroupAlgebraElement(G, vec()) for _ in range(3))
    assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))
    lhs = convolve(f, g).inverse_pushforward()
    assert lhs == convolve(g.inverse_pushforward(), f.inverse_pushforward())


def test_left_multiplication_matrix_matches_convolution():
    G = build_group("G2")
    f = GroupAlgebraElement(G, [Fraction(i) for i in range(G.order)])
    g = GroupAlgebraElement.point_mass(G, 3)
    mat = f.left_multiplication_matrix()
    col = [mat[u][3] for u in G.elements]
    assert col == list(convolve(f, g).coeffs)
