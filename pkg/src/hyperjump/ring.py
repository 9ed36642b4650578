"""
Presentation Q[c_V]/I of the cohomology ring of the wonderful model, and
exact top-degree queries against it.

Membership in I is only ever decided in degree n-1, by spanning the products
generator * monomial of that degree and row reducing.  No Groebner bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .kernel import EchelonBasis, Exponent, TruncatedPoly, integer_row, monomials
from .lattice import BuildingSet, is_nested


@dataclass(frozen=True)
class Generator:
    """One generator of I.

    kind 1: product of c_V over a minimal non-nested ``support``.
    kind 2: product over a nested ``support`` times (sum_{W' in W} c_W')^d.
    """

    kind: int
    support: tuple[int, ...]
    degree: int
    poly: TruncatedPoly = field(compare=False, repr=False)
    w: int | None = None
    exponent: int = 0


@dataclass(frozen=True)
class RingPresentation:
    building_set: BuildingSet = field(repr=False)
    generators: tuple[Generator, ...]

    @property
    def nvars(self) -> int:
        return len(self.building_set.members)

    @property
    def top_degree(self) -> int:
        return self.building_set.n - 1


def _nested_families(g: BuildingSet, max_size: int) -> list[tuple[int, ...]]:
    items = list(g.nonzero)
    out: list[tuple[int, ...]] = [()]

    def grow(current, start):
        if len(current) == max_size:
            return
        for pos in range(start, len(items)):
            cand = current + (items[pos],)
            if is_nested(cand, g):
                out.append(cand)
                grow(cand, pos + 1)

    grow((), 0)
    return out


def minimal_non_nested(g: BuildingSet) -> list[tuple[int, ...]]:
    """Non-nested families all of whose proper subfamilies are nested.

    Such a family is an antichain; it is found by growing nested antichains.
    """
    items = list(g.nonzero)
    found: list[tuple[int, ...]] = []

    def grow(current, start):
        for pos in range(start, len(items)):
            x = items[pos]
            if any(g.comparable(x, y) for y in current):
                continue
            cand = current + (x,)
            if is_nested(cand, g):
                grow(cand, pos + 1)
            elif all(is_nested(sub, g) for sub in combinations(cand, len(cand) - 1)):
                found.append(cand)

    grow((), 0)
    return found


def all_non_nested(g: BuildingSet, max_size: int) -> list[tuple[int, ...]]:
    items = list(g.nonzero)
    return [
        sub
        for k in range(2, max_size + 1)
        for sub in combinations(items, k)
        if not is_nested(sub, g)
    ]


def _monomial(nvars: int, support, order: int) -> TruncatedPoly:
    e = [0] * nvars
    for i in support:
        e[i] += 1
    return TruncatedPoly.monomial(tuple(e), order)


def build_presentation(g: BuildingSet, type1: str = "minimal") -> RingPresentation:
    """Generators of I for the building set ``g`` (zero subspace included).

    ``type1="all"`` uses every non-nested family of size at most n-1 instead
    of the minimal ones; the top-degree span is the same.
    """
    n = g.n
    nv = len(g.members)
    gens: list[Generator] = []
    families = minimal_non_nested(g) if type1 == "minimal" else all_non_nested(g, n - 1)
    for h in families:
        gens.append(Generator(1, h, len(h), _monomial(nv, h, len(h))))
    for h in _nested_families(g, n - 1):
        top_dim = g.meet_dim(h)
        for w in range(len(g.members)):
            if any(not (g.leq[w][v] and w != v) for v in h):
                continue
            d = top_dim - g.delta(w)
            degree = len(h) + d
            below = {i: 1 for i in range(nv) if g.leq[i][w]}
            base = TruncatedPoly.linear(nv, degree, below)
            poly = _monomial(nv, h, degree) * base.power(d)
            gens.append(Generator(2, h, degree, poly, w, d))
    return RingPresentation(g, tuple(gens))


class GradedIdealSlice:
    """The degree-k part of I, realized as a row space.

    Linear generators are used to eliminate variables first; the remaining
    ("reduced") variables index the monomial basis that is actually row
    reduced.  ``monomial_basis`` is still the full basis in all variables.
    """

    def __init__(self, presentation: RingPresentation, degree: int | None = None):
        self.presentation = presentation
        g = presentation.building_set
        self.nvars = nv = presentation.nvars
        self.degree = k = presentation.top_degree if degree is None else degree
        self.monomial_basis = monomials(nv, k)

        linear = [gen.poly for gen in presentation.generators if gen.degree == 1]
        self.substitution = _linear_elimination(linear, nv, g)
        self.reduced_vars = [i for i in range(nv) if i not in self.substitution]
        self.reduced_basis = self._reduced_monomials(k)
        self.column = {e: j for j, e in enumerate(self.reduced_basis)}

        rows = []
        for gen in presentation.generators:
            if gen.degree == 1 or gen.degree > k:
                continue
            image = self.eliminate(gen.poly)
            if not image:
                continue
            for m in self._reduced_monomials(k - gen.degree):
                rows.append(self._row(image.shift(m, order=k)))
        rows = [r for r in rows if r]
        rows.sort(key=len)
        basis = EchelonBasis(len(self.reduced_basis))
        target = len(self.reduced_basis) - 1
        pending = iter(rows)
        for row in pending:
            basis.add(row)
            if basis.rank >= target:
                break
        self.basis = basis
        self._functional = None
        if basis.rank == target and target >= 0:
            phi = basis.annihilator()
            for row in pending:
                if sum(phi[j] * v for j, v in row.items()) != 0:
                    basis.add(row)
                    break
            else:
                self._functional = phi
        if basis.rank > target:
            # nothing more can change: the quotient is already zero
            pass
        self.quotient_dim = len(self.reduced_basis) - basis.rank
        self.rank = len(self.monomial_basis) - self.quotient_dim

    def _reduced_monomials(self, degree: int) -> list[Exponent]:
        out = []
        for e in monomials(len(self.reduced_vars), degree):
            full = [0] * self.nvars
            for i, x in zip(self.reduced_vars, e):
                full[i] = x
            out.append(tuple(full))
        return out

    def eliminate(self, q: TruncatedPoly) -> TruncatedPoly:
        """Rewrite ``q`` in the reduced variables using the linear relations."""
        q = q.truncate(max(q.order, self.degree))
        return q.substitute(self.substitution) if self.substitution else q

    def _row(self, q: TruncatedPoly) -> dict[int, int]:
        return integer_row({self.column[e]: c for e, c in q.terms.items()})

    def _vector(self, q: TruncatedPoly) -> dict[int, Fraction]:
        if not q.is_homogeneous(self.degree):
            raise ValueError(f"expected a homogeneous polynomial of degree {self.degree}")
        image = self.eliminate(q)
        return {self.column[e]: c for e, c in image.terms.items()}

    def contains(self, q: TruncatedPoly) -> bool:
        vec = self._vector(q)
        if not vec:
            return True
        return self.basis.contains(integer_row(vec))

    def functional(self, q: TruncatedPoly) -> Fraction:
        if self._functional is None:
            raise ValueError("top-degree quotient is not one-dimensional")
        vec = self._vector(q)
        return sum((self._functional[j] * c for j, c in vec.items()), Fraction(0))


def _linear_elimination(linear: list[TruncatedPoly], nv: int, g: BuildingSet) -> dict[int, TruncatedPoly]:
    """Solve the degree-one relations for the largest-dimensional variables."""
    if not linear:
        return {}
    order = sorted(range(nv), key=lambda i: (-g.delta(i), -i))
    basis = EchelonBasis(nv)
    for p in linear:
        vec = {}
        for e, c in p.terms.items():
            vec[order.index(e.index(1))] = c
        basis.add(integer_row(vec))
    # back-substitute to a fully reduced form
    pivots = sorted(basis.rows)
    reduced: dict[int, dict[int, Fraction]] = {}
    for p in reversed(pivots):
        row = {k: Fraction(v, basis.rows[p][p]) for k, v in basis.rows[p].items()}
        for q in list(row):
            if q != p and q in reduced:
                f = row.pop(q)
                for k, v in reduced[q].items():
                    row[k] = row.get(k, Fraction(0)) + f * v
        reduced[p] = {k: v for k, v in row.items() if v != 0}
    subst = {}
    for p, row in reduced.items():
        var = order[p]
        image = {order[k]: -v for k, v in row.items() if k != p}
        subst[var] = TruncatedPoly.linear(nv, 1, image)
    return subst


def ideal_slice(p: RingPresentation, degree: int | None = None, check: bool = True) -> GradedIdealSlice:
    s = GradedIdealSlice(p, degree)
    if check and s.degree == p.top_degree and s.quotient_dim != 1:
        raise AssertionError(
            f"top-degree quotient has dimension {s.quotient_dim}, expected 1 "
            "(construction bug or invalid building set)"
        )
    return s


def graded_quotient_dims(p: RingPresentation) -> list[int]:
    return [GradedIdealSlice(p, k).quotient_dim for k in range(p.top_degree + 1)]


def is_in_ideal(q: TruncatedPoly, s: GradedIdealSlice) -> bool:
    return s.contains(q)


def point_class(s: GradedIdealSlice) -> TruncatedPoly:
    """(-c_0)^(n-1)."""
    e = [0] * s.nvars
    e[0] = s.degree
    return TruncatedPoly.monomial(tuple(e), s.degree, (-1) ** s.degree)


def evaluate_top(q: TruncatedPoly, s: GradedIdealSlice) -> Fraction:
    """The number lambda with q = lambda * (-c_0)^(n-1) modulo I."""
    norm = s.functional(point_class(s))
    if norm == 0:
        raise AssertionError("(-c_0)^(n-1) lies in I")
    return s.functional(q) / norm
