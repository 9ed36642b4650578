from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import member
from corpus import make
from hyperjump.engine import (
    Context,
    SeriesContext,
    analyze,
    candidates,
    constants,
    criterion_poly,
    inner_multiplicity,
    is_jumping,
    make_candidate,
    p_series,
    t_series,
)
from hyperjump.kernel import TruncatedPoly
from hyperjump.lattice import NestedSet, Subspace, cone, full_building_set
from hyperjump.ring import GradedIdealSlice


def var(g, i, order=None):
    return TruncatedPoly.variable(len(g.members), g.n - 1 if order is None else order, i)


def lin(g, coeffs, order=None):
    return TruncatedPoly.linear(len(g.members), g.n - 1 if order is None else order, coeffs)


@pytest.fixture
def ctx_a(three_lines):
    return Context.build(three_lines)


@pytest.fixture
def ctx_b(four_planes_first):
    return Context.build(four_planes_first)


def test_constants_examples(ctx_a, ctx_b):
    ka = ctx_a.constants
    L = member(ctx_a.building_set, 0, 1, 2)
    assert (ka.n, ka.d, ka.a0, ka.s[L], ka.r[L]) == (3, 3, 1, 3, 2)
    kb = ctx_b.constants
    assert (kb.n, kb.d, kb.a0) == (4, 4, 1)
    l = cone(make(2, [[1, 0]], [5]))
    assert constants(l, full_building_set(l)).a0 == 4


def test_candidates_examples(ctx_a, ctx_b):
    assert [c.c for c in candidates(ctx_a.constants, ctx_a.building_set)] == [F(1, 3), F(2, 3), 1]
    g = ctx_b.building_set
    got = {c.c: {g.label(i) for i in c.s_c} for c in candidates(ctx_b.constants, g)}
    C = (0, 1, 2, 3)
    lines = {g.label(i) for i in g.nonzero if g.r(i) == 2}
    assert list(got) == [F(1, 4), F(1, 2), F(3, 4), 1]
    assert got[F(1, 4)] == got[F(3, 4)] == {C}
    assert got[F(1, 2)] == {C} | lines
    l = cone(make(2, [[1, 0]]))
    g1 = full_building_set(l)
    assert [c.c for c in candidates(constants(l, g1), g1)] == [1]


def test_a_values(ctx_a):
    g = ctx_a.building_set
    L = member(g, 0, 1, 2)
    cand = make_candidate(F(2, 3), ctx_a.constants, g)
    assert cand.a_values[0] == -1
    assert cand.a_values[L] == 0  # r - cs = 2 - 2
    assert cand.a_values[member(g, 0)] == 0  # r - 1 - floor(2/3)
    cand = make_candidate(F(1, 3), ctx_a.constants, g)
    assert cand.a_values[L] == 1


def test_p_series_three_lines(ctx_a):
    g = ctx_a.building_set
    L = member(g, 0, 1, 2)
    S = NestedSet((L,), g)
    lspace = g.members[L]
    whole = Subspace.whole(3)
    p0 = p_series(S, lspace, 0)
    assert p0.homogeneous_part(1) == lin(g, {0: F(-1, 2)})
    pl = p_series(S, whole, L)
    assert pl.homogeneous_part(1) == lin(g, {0: -1, L: -1})
    for i in range(3):
        assert p_series(S, whole, member(g, i)).homogeneous_part(1) == TruncatedPoly.zero(5, 2)
    with pytest.raises(ValueError):
        p_series(S, lspace, L)


def test_t_series_three_lines(ctx_a):
    g = ctx_a.building_set
    L = member(g, 0, 1, 2)
    t = t_series(NestedSet((L,), g))
    assert t.homogeneous_part(0) == TruncatedPoly.constant(5, 2)
    assert t.homogeneous_part(1) == lin(g, {0: F(-3, 2), L: -1})


def test_t_series_four_planes_reference_values(ctx_b):
    """Known T^S modulo I, compared only in the degrees the criterion consumes."""
    g = ctx_b.building_set
    order = 3
    series = SeriesContext(g, order)
    slices = [GradedIdealSlice(ctx_b.presentation, k) for k in range(order + 1)]
    C = member(g, 0, 1, 2, 3)
    lines = [i for i in g.nonzero if g.r(i) == 2]
    c0, cC = var(g, 0, order), var(g, C, order)
    one = TruncatedPoly.constant(len(g.members), order)
    sum_b = lin(g, {b: 1 for b in lines}, order)

    def agree(members, known, upto):
        diff = t_series(NestedSet(members, g), series) - known
        return all(slices[k].contains(diff.homogeneous_part(k)) for k in range(upto + 1))

    tc = (c0.power(3).scale(F(-2, 3)) + cC.power(2) + c0.power(2).scale(F(11, 6))
          + (sum_b * c0).scale(F(1, 4)) - sum_b.scale(F(1, 2)) - cC.scale(F(3, 2)) - c0.scale(2) + one)
    assert agree((C,), tc, 2)
    for b in lines:
        cb = var(g, b, order)
        tcb = cb * c0.scale(F(1, 2)) + c0.power(2).scale(F(7, 4)) - cb - cC.scale(F(3, 2)) - c0.scale(2) + one
        assert agree((C, b), tcb, 1)
        tb = (cC.power(2).scale(F(1, 4)) + cb * c0 + c0.power(2).scale(F(7, 4))
              - cb - cC - c0.scale(2) + one)
        assert agree((b,), tb, 2)


def test_criterion_three_lines(ctx_a):
    g = ctx_a.building_set
    L = member(g, 0, 1, 2)
    c0L = var(g, 0) * var(g, L)
    cLL = var(g, L).power(2)
    k = ctx_a.constants
    assert criterion_poly(make_candidate(F(1, 3), k, g), g, k) == c0L.scale(F(-5, 2))
    # -c_L^2 here; with the opposite sign the class is still outside I, so the verdict is stable
    assert criterion_poly(make_candidate(F(2, 3), k, g), g, k) == c0L.scale(F(-5, 2)) - cLL
    assert not ctx_a.slice.contains(c0L.scale(F(-5, 2)) + cLL)
    assert criterion_poly(make_candidate(F(1, 2), k, g), g, k) == TruncatedPoly.zero(5, 2)


def test_is_jumping_examples(ctx_a, ctx_b):
    ka, kb = ctx_a.constants, ctx_b.constants
    ga, gb = ctx_a.building_set, ctx_b.building_set
    assert not is_jumping(make_candidate(F(1, 3), ka, ga), ctx_a)
    assert is_jumping(make_candidate(F(2, 3), ka, ga), ctx_a)
    assert not is_jumping(make_candidate(F(1, 2), ka, ga), ctx_a)
    verdicts = [is_jumping(make_candidate(c, kb, gb), ctx_b) for c in (F(1, 4), F(1, 2), F(3, 4))]
    assert verdicts == [False, False, True]
    with pytest.raises(ValueError):
        is_jumping(make_candidate(1, ka, ga), ctx_a)


def test_criterion_is_homogeneous(ctx_b):
    g, k = ctx_b.building_set, ctx_b.constants
    for cand in candidates(k, g):
        if cand.c < 1:
            poly = criterion_poly(cand, g, k, ctx_b.series)
            assert not poly or poly.is_homogeneous(g.n - 1)


def test_inner_multiplicities(ctx_a, ctx_b):
    assert [inner_multiplicity(c, ctx_a) for c in (F(1, 3), F(2, 3), 1)] == [0, 1, 2]
    assert [inner_multiplicity(c, ctx_b) for c in (F(1, 4), F(1, 2), F(3, 4), 1)] == [0, 0, 1, 3]
    assert inner_multiplicity(F(1, 5), ctx_a) == 0


def test_inner_multiplicity_without_apex():
    # three parallel-in-z planes meet in a line of C^3: nothing of dimension one after coning
    ctx = Context.build(make(3, [[1, 0, 0], [0, 1, 0], [1, 1, 0]]))
    assert ctx.lattice.apex is None
    assert inner_multiplicity(F(2, 3), ctx) == 0


def test_analyze_reports(three_lines, four_planes_first, four_planes_second):
    r = analyze(three_lines)
    assert r.jumping_numbers == [F(2, 3)]
    assert r.spectrum_part == [(F(2, 3), 1), (1, 2)]
    assert [c.c for c in r.candidates] == [F(1, 3), F(2, 3), 1]
    rb = analyze(four_planes_first)
    assert rb.jumping_numbers == [F(3, 4)]
    assert rb.inner_multiplicities == [(F(1, 4), 0), (F(1, 2), 0), (F(3, 4), 1), (1, 3)]
    assert analyze(four_planes_second) == rb


def test_minimal_building_set_falls_back_for_inner():
    crossing = make(2, [[1, 0], [0, 1]], [2, 2])
    r_min = analyze(crossing, "minimal")
    r_full = analyze(crossing, "full")
    assert r_min.inner_building_set == "full"
    assert r_min.inner_multiplicities == r_full.inner_multiplicities
    assert r_min.jumping_numbers == r_full.jumping_numbers == [F(1, 2)]


def test_analyze_with_oracle(three_lines):
    r = analyze(three_lines, with_oracle=True, diagnostics=True)
    assert r.oracle_agreement is True
    assert all(c.oracle is not None for c in r.candidates)
    assert r.candidates[0].criterion == "-5/2*c0*c[0,1,2]"


def _distinct(raw):
    out = []
    for f in raw:
        if not any(_proportional(f, g) for g in out):
            out.append(f)
    return out


def _proportional(f, g):
    return all(f[i] * g[j] == f[j] * g[i] for i in range(3) for j in range(3))


planes = st.lists(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)).filter(any),
    min_size=2, max_size=4,
)


@settings(max_examples=8, deadline=None)
@given(planes, st.lists(st.integers(1, 3), min_size=4, max_size=4))
def test_random_plane_arrangements_match_oracle(raw, mults):
    forms = _distinct(raw)
    r = analyze(make(3, [list(f) for f in forms], mults[: len(forms)]), with_oracle=True)
    assert r.oracle_agreement
