from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import member
from corpus import make, plane_arrangements
from hyperjump.kernel import TruncatedPoly, monomials
from hyperjump.lattice import cone, full_building_set, minimal_building_set
from hyperjump.ring import (
    GradedIdealSlice,
    build_presentation,
    evaluate_top,
    graded_quotient_dims,
    ideal_slice,
    is_in_ideal,
    minimal_non_nested,
    point_class,
)


def setup(a, kind="full"):
    l = cone(a)
    g = full_building_set(l) if kind == "full" else minimal_building_set(l)
    p = build_presentation(g)
    return g, p, ideal_slice(p)


def poly_in(g, degree, coeffs):
    """Polynomial from {tuple of member indices (with repeats): coefficient}."""
    nv = len(g.members)
    terms = {}
    for idx, c in coeffs.items():
        e = [0] * nv
        for i in idx:
            e[i] += 1
        terms[tuple(e)] = F(c)
    return TruncatedPoly(nv, degree, terms)


def test_three_lines_slice(three_lines):
    g, p, s = setup(three_lines)
    assert p.nvars == 5
    assert len(s.monomial_basis) == 15
    assert s.quotient_dim == 1
    assert graded_quotient_dims(p) == [1, 2, 1]
    # nothing survives above the top degree
    assert GradedIdealSlice(p, 3).quotient_dim == 0


def test_three_lines_reduced_presentation(three_lines):
    g, p, s = setup(three_lines)
    L = member(g, 0, 1, 2)
    deg1 = GradedIdealSlice(p, 1)
    for i in range(3):
        assert deg1.contains(poly_in(g, 1, {(0,): 1, (L,): 1, (member(g, i),): 1}))
    assert s.contains(poly_in(g, 2, {(0, L): 1}))
    assert s.contains(poly_in(g, 2, {(0, 0): 1, (0, L): 2, (L, L): 1}))
    assert GradedIdealSlice(p, 3).contains(poly_in(g, 3, {(0, 0, 0): 1}))


def test_three_lines_membership_and_evaluation(three_lines):
    g, p, s = setup(three_lines)
    L = member(g, 0, 1, 2)
    assert is_in_ideal(poly_in(g, 2, {(0, L): F(-5, 2)}), s)
    assert not is_in_ideal(poly_in(g, 2, {(0, L): F(-5, 2), (L, L): 1}), s)
    assert is_in_ideal(TruncatedPoly.zero(5, 2), s)
    assert evaluate_top(poly_in(g, 2, {(0, L): F(-3, 2), (L, L): -1}), s) == 1
    assert evaluate_top(poly_in(g, 2, {(0, L): F(-3, 2), (L, L): -2}), s) == 2
    assert evaluate_top(point_class(s), s) == 1


def test_contains_rejects_wrong_degree(three_lines):
    g, p, s = setup(three_lines)
    with pytest.raises(ValueError):
        s.contains(poly_in(g, 2, {(0,): 1}))


def test_four_planes_known_generators(four_planes_first):
    g, p, s = setup(four_planes_first)
    assert p.nvars == 12 and s.quotient_dim == 1
    C = member(g, 0, 1, 2, 3)
    lines = [i for i in g.nonzero if g.r(i) == 2]
    planes = [i for i in g.nonzero if g.r(i) == 1]
    deg1, deg2 = GradedIdealSlice(p, 1), GradedIdealSlice(p, 2)
    for a in planes:
        coeffs = {(a,): 1, (C,): 1, (0,): 1}
        coeffs.update({(b,): 1 for b in lines if g.leq[b][a]})
        assert deg1.contains(poly_in(g, 1, coeffs))
    assert deg2.contains(poly_in(g, 2, {(0, C): 1}))
    for b in lines:
        assert deg2.contains(poly_in(g, 2, {(b, 0): 1, (b, C): 1}))
        for b2 in lines:
            if b2 != b:
                assert deg2.contains(poly_in(g, 2, {(b, b2): 1}))


def test_single_hyperplane():
    g, p, s = setup(make(2, [[1, 0]]))
    assert p.nvars == 2 and s.quotient_dim == 1
    assert GradedIdealSlice(p, 1).contains(poly_in(g, 1, {(0,): 1, (1,): 1}))
    assert evaluate_top(point_class(s), s) == 1


def test_minimal_non_nested_three_lines(three_lines):
    g, _, _ = setup(three_lines)
    fams = minimal_non_nested(g)
    assert sorted(tuple(sorted(g.label(i) for i in h)) for h in fams) == [
        ((0,), (1,)), ((0,), (2,)), ((1,), (2,))
    ]


CASES = {**plane_arrangements(), "three": make(2, [[1, -1], [1, 1], [1, 0]]),
         "crossing": make(2, [[1, 0], [0, 1]])}


@pytest.mark.parametrize("name", sorted(CASES))
@pytest.mark.parametrize("kind", ["full", "minimal"])
def test_top_quotient_is_one_dimensional(name, kind):
    g, p, s = setup(CASES[name], kind)
    assert s.quotient_dim == 1
    assert evaluate_top(point_class(s), s) == 1


@pytest.mark.parametrize("name", ["b-first", "coordinate", "pencil-and-plane", "three"])
def test_all_non_nested_gives_same_top_span(name):
    l = cone(CASES[name])
    g = full_building_set(l)
    s_min = ideal_slice(build_presentation(g, "minimal"))
    p_all = build_presentation(g, "all")
    s_all = ideal_slice(p_all)
    assert s_all.quotient_dim == s_min.quotient_dim == 1
    k = p_all.top_degree
    for gen in p_all.generators:
        if gen.kind == 1 and gen.degree <= k:
            for m in monomials(p_all.nvars, k - gen.degree):
                assert s_min.contains(gen.poly.shift(m, order=k))


def random_top(nvars, degree):
    basis = monomials(nvars, degree)
    return st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)).map(
        lambda cs: TruncatedPoly(nvars, degree, {e: F(c) for e, c in zip(basis, cs)})
    )


SLICES = {name: setup(CASES[name], kind)[2] for name, kind in [("three", "full"), ("b-first", "minimal")]}


@pytest.mark.parametrize("name", sorted(SLICES))
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_evaluation_linear_and_matches_membership(name, data):
    s = SLICES[name]
    q1 = data.draw(random_top(s.nvars, s.degree))
    q2 = data.draw(random_top(s.nvars, s.degree))
    a, b = data.draw(st.integers(-4, 4)), data.draw(st.integers(-4, 4))
    assert evaluate_top(q1.scale(a) + q2.scale(b), s) == a * evaluate_top(q1, s) + b * evaluate_top(q2, s)
    assert is_in_ideal(q1, s) == (evaluate_top(q1, s) == 0)
    residue = q1 - point_class(s).scale(evaluate_top(q1, s))
    assert is_in_ideal(residue, s) and evaluate_top(residue, s) == 0
