"""
Jumping numbers and inner jumping multiplicities of a projectivized central
arrangement, decided by exact top-degree computations in Q[c_V]/I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .kernel import TruncatedPoly, q_series, series_pow, substitute_linear
from .lattice import (
    ArrangementInput,
    BuildingSet,
    Lattice,
    NestedSet,
    Subspace,
    building_set,
    cone,
    full_building_set,
    is_nested,
    nested_subsets_of,
)
from .ring import GradedIdealSlice, RingPresentation, build_presentation, evaluate_top, ideal_slice


@dataclass(frozen=True)
class JumpConstants:
    n: int
    d: int
    a0: int
    s: dict[int, int]
    r: dict[int, int]
    delta: dict[int, int]


def constants(l: Lattice, g: BuildingSet) -> JumpConstants:
    n = l.ambient_n
    d = l.d_total
    s = {i: g.s(i) for i in g.nonzero}
    r = {i: g.r(i) for i in range(len(g.members))}
    delta = {i: g.delta(i) for i in range(len(g.members))}
    a0 = max(d - n + 1, sum(max(0, s[i] - r[i]) for i in g.nonzero))
    return JumpConstants(n, d, a0, s, r, delta)


@dataclass(frozen=True)
class Candidate:
    c: Fraction
    s_c: tuple[int, ...]
    a_values: tuple[Fraction, ...]


def a_values(c: Fraction, k: JumpConstants, g: BuildingSet) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    s_c = []
    values = [Fraction(-k.a0)]
    for i in g.nonzero:
        cs = c * k.s[i]
        if cs.denominator == 1:
            s_c.append(i)
            values.append(k.r[i] - cs)
        else:
            values.append(Fraction(k.r[i] - 1 - math.floor(cs)))
    return tuple(s_c), tuple(values)


def make_candidate(c, k: JumpConstants, g: BuildingSet) -> Candidate:
    c = Fraction(c)
    s_c, values = a_values(c, k, g)
    return Candidate(c, s_c, values)


def candidates(k: JumpConstants, g: BuildingSet) -> list[Candidate]:
    """Every k/s(V) in (0, 1]; exactly the c with nonempty S_c (plus 1)."""
    values = {Fraction(j, k.s[i]) for i in g.nonzero for j in range(1, k.s[i] + 1)}
    return [make_candidate(c, k, g) for c in sorted(values)]


# ---------------------------------------------------------------------------
# Todd-type series


class SeriesContext:
    """Shared truncation order and Q-series for one building set."""

    def __init__(self, g: BuildingSet, order: int | None = None):
        self.g = g
        self.nvars = len(g.members)
        self.order = g.n - 1 if order is None else order
        self.q = q_series(self.order)
        self.t_cache: dict[tuple[int, ...], TruncatedPoly] = {}

    def var(self, i: int) -> TruncatedPoly:
        return TruncatedPoly.variable(self.nvars, self.order, i)

    def linear(self, coeffs: dict[int, Fraction]) -> TruncatedPoly:
        return TruncatedPoly.linear(self.nvars, self.order, coeffs)

    def q_of(self, ell: TruncatedPoly) -> TruncatedPoly:
        return substitute_linear(self.q, ell)


def _nested_with(S: NestedSet, w: int) -> bool:
    return w == 0 or w in S.members or is_nested(S.members + (w,), S.building_set)


def _sum_below(S: NestedSet, x: Subspace, strict: bool, ctx: SeriesContext) -> TruncatedPoly:
    """sum of c_W' over members W' inside x (strictly if asked) nested with S."""
    g = S.building_set
    coeffs = {}
    for w, space in enumerate(g.members):
        if not x.contains(space) or (strict and space == x):
            continue
        if _nested_with(S, w):
            coeffs[w] = Fraction(1)
    return ctx.linear(coeffs)


def factor_series(S: NestedSet, bottom: Subspace, top: Subspace, w: int, ctx: SeriesContext) -> TruncatedPoly:
    """P_W for the factor running from ``bottom`` up to ``top``."""
    g = S.building_set
    space = g.members[w]
    if not (space.contains(bottom) and top.contains(space) and space != top):
        raise ValueError("P_W needs bottom <= W < top")
    if space == bottom:
        inner = _sum_below(S, bottom, False, ctx)
        return series_pow(ctx.q_of(-inner), top.dim - bottom.dim)
    e = top.dim - space.dim
    strict = _sum_below(S, space, True, ctx)
    weak = _sum_below(S, space, False, ctx)
    return (
        series_pow(ctx.q_of(-strict), -e)
        * ctx.q_of(ctx.var(w))
        * series_pow(ctx.q_of(-weak), e)
    )


def p_series(S: NestedSet, v: Subspace, w: int | Subspace, g: BuildingSet | None = None,
             ctx: SeriesContext | None = None) -> TruncatedPoly:
    """P_W^{S,V} for V in S or C^n, with V_S taken from the nested set."""
    g = g or S.building_set
    ctx = ctx or SeriesContext(g)
    if isinstance(w, Subspace):
        w = g.index[w]
    return factor_series(S, S.vsub(v), v, w, ctx)


def t_series(S: NestedSet, ctx: SeriesContext | None = None) -> TruncatedPoly:
    """Product of P_W over all factors of S and all members between bottom and top."""
    g = S.building_set
    ctx = ctx or SeriesContext(g)
    # T^S does not depend on c, so every candidate shares it
    cacheable = ctx.g is g
    if cacheable and S.members in ctx.t_cache:
        return ctx.t_cache[S.members]
    total = TruncatedPoly.constant(ctx.nvars, ctx.order)
    for bottom, top in S.factors:
        for w, space in enumerate(g.members):
            if space.contains(bottom) and top.contains(space) and space != top:
                total = total * factor_series(S, bottom, top, w, ctx)
    if cacheable:
        ctx.t_cache[S.members] = total
    return total


def _exp_sum(ell: TruncatedPoly, tail: TruncatedPoly, total_degree: int, ctx: SeriesContext) -> TruncatedPoly:
    """sum_j ell^j / j! * tail_{total_degree - j}."""
    out = TruncatedPoly.zero(ctx.nvars, ctx.order)
    power = TruncatedPoly.constant(ctx.nvars, ctx.order)
    for j in range(total_degree + 1):
        if j:
            power = power * ell
        part = tail.homogeneous_part(total_degree - j)
        if part and power:
            out = out + (power * part).scale(Fraction(1, math.factorial(j)))
    return out


def _product_of_vars(members: tuple[int, ...], ctx: SeriesContext) -> TruncatedPoly:
    e = [0] * ctx.nvars
    for i in members:
        e[i] += 1
    return TruncatedPoly.monomial(tuple(e), ctx.order)


def criterion_poly(cand: Candidate, g: BuildingSet, k: JumpConstants | None = None,
                   ctx: SeriesContext | None = None) -> TruncatedPoly:
    """The degree n-1 polynomial whose non-membership in I marks a jump."""
    ctx = ctx or SeriesContext(g)
    n = g.n
    ell = ctx.linear(dict(enumerate(cand.a_values)))
    out = TruncatedPoly.zero(ctx.nvars, ctx.order)
    for S in nested_subsets_of(cand.s_c, g):
        size = len(S)
        if size > n - 1:
            continue
        body = _exp_sum(ell, t_series(S, ctx), n - 1 - size, ctx)
        term = body * _product_of_vars(S.members, ctx)
        out = out + (term if size % 2 else -term)
    return out


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class Context:
    """Everything derived from one arrangement and one building set."""

    arrangement: ArrangementInput
    lattice: Lattice
    building_set: BuildingSet
    presentation: RingPresentation
    slice: GradedIdealSlice
    constants: JumpConstants
    series: SeriesContext

    @classmethod
    def build(cls, a: ArrangementInput, kind: str = "full", lattice: Lattice | None = None) -> "Context":
        l = lattice or cone(a)
        g = building_set(l, kind)
        p = build_presentation(g)
        s = ideal_slice(p)
        return cls(a, l, g, p, s, constants(l, g), SeriesContext(g))


def is_jumping(cand: Candidate, ctx: Context) -> bool:
    if not 0 < cand.c < 1:
        raise ValueError("is_jumping expects c in (0,1)")
    poly = criterion_poly(cand, ctx.building_set, ctx.constants, ctx.series)
    return not ctx.slice.contains(poly)


def apex_index(g: BuildingSet) -> int | None:
    found = [i for i in g.nonzero if g.delta(i) == 1]
    return found[0] if found else None


def inner_expression(c: Fraction, ctx: Context) -> TruncatedPoly | None:
    """The degree n-1 class whose value is the inner jumping multiplicity."""
    g = ctx.building_set
    vx = apex_index(g)
    k = ctx.constants
    if vx is None or (c * k.d).denominator != 1:
        return None
    _, values = a_values(c, k, g)
    ell = ctx.series.linear({i: values[i] for i in g.nonzero})
    S = NestedSet((vx,), g)
    body = _exp_sum(ell, t_series(S, ctx.series), g.n - 2, ctx.series)
    return body * _product_of_vars((vx,), ctx.series)


def inner_multiplicity(c, ctx: Context) -> int:
    c = Fraction(c)
    expr = inner_expression(c, ctx)
    if expr is None:
        return 0
    value = evaluate_top(expr, ctx.slice)
    if value.denominator != 1 or value < 0:
        raise AssertionError(f"inner multiplicity at {c} is {value}, not a nonnegative integer")
    return int(value)


@dataclass
class CandidateResult:
    c: Fraction
    s_c: tuple[tuple[int, ...], ...]
    verdict: bool
    criterion: str | None = None
    oracle: bool | None = None


@dataclass
class JumpReport:
    n: int
    d: int
    a0: int
    building_set: str
    inner_building_set: str
    jumping_numbers: list[Fraction]
    inner_multiplicities: list[tuple[Fraction, int]]
    candidates: list[CandidateResult] = field(default_factory=list)

    @property
    def spectrum_part(self) -> list[tuple[Fraction, int]]:
        return [(c, m) for c, m in self.inner_multiplicities if m]

    @property
    def oracle_agreement(self) -> bool | None:
        flags = [r.oracle == r.verdict for r in self.candidates if r.oracle is not None]
        if not flags:
            return None
        return all(flags)


def inner_context(ctx: Context) -> Context:
    """The context used for inner multiplicities.

    A smaller building set may leave out the one-dimensional flat even though
    the lattice has it; then the full building set is used instead.
    """
    if apex_index(ctx.building_set) is None and ctx.lattice.apex is not None:
        return Context.build(ctx.arrangement, "full", ctx.lattice)
    return ctx


def analyze(a: ArrangementInput, building: str = "full", with_oracle: bool = False,
            diagnostics: bool = False) -> JumpReport:
    ctx = Context.build(a, building)
    g = ctx.building_set
    k = ctx.constants
    results = []
    jumps = []
    for cand in candidates(k, g):
        if cand.c < 1:
            poly = criterion_poly(cand, g, k, ctx.series)
            verdict = not ctx.slice.contains(poly)
            text = poly.to_string(g.names) if diagnostics else None
        else:
            verdict, text = True, None
        if verdict and cand.c < 1:
            jumps.append(cand.c)
        results.append(CandidateResult(cand.c, tuple(g.label(i) for i in cand.s_c), verdict, text))

    ictx = inner_context(ctx)
    d = k.d
    inner = [(Fraction(j, d), inner_multiplicity(Fraction(j, d), ictx)) for j in range(1, d + 1)]

    if with_oracle:
        from .oracle import AffineData

        data = AffineData.build(a)
        for r in results:
            r.oracle = data.is_jumping(r.c)

    return JumpReport(
        n=g.n,
        d=d,
        a0=k.a0,
        building_set=g.kind,
        inner_building_set=ictx.building_set.kind,
        jumping_numbers=jumps,
        inner_multiplicities=inner,
        candidates=results,
    )
