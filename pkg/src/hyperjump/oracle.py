"""
Independent check of jumping numbers on the affine arrangement.

Multiplier ideals of a divisor supported on a central arrangement are
intersections of powers I_W^e of the ideals of its flats.  Membership of a
polynomial in I_W^e is read off in coordinates adapted to W: after the change
of frame y = M x whose first r rows are the equations of W, the polynomial
lies in I_W^e iff it has no monomial of degree < e in y_1..y_r.

All ideals are homogeneous, so tests run one degree at a time.  For the pair
(V, m) only degree m matters: every I_W with W containing V is generated by
linear forms in V's own coordinates, so a witness outside I_V^{m+1} can be
taken in those coordinates alone, where it must have degree at most m, and
multiplying by a coordinate lifts it to degree exactly m.  Since m is at most
s'(V) - r'(V), this stays inside the a priori degree bound.

Nothing here looks at the projective cone, the building set or the ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .kernel import Matrix, TruncatedPoly, inverse, monomials, nullspace, pivot_columns, rref
from .lattice import ArrangementInput


@dataclass(frozen=True)
class AffineFlatData:
    equations: Matrix
    r_prime: int
    s_prime: int
    support: frozenset[int]

    @cached_property
    def adapted_frame(self) -> Matrix:
        """Invertible M whose first r' rows are the flat's equations."""
        return adapted_frame(self.equations)


def adapted_frame(equations: Matrix, completion: list[int] | None = None) -> Matrix:
    """Complete rref ``equations`` with unit rows on non-pivot columns.

    ``completion`` may name other unit vectors to use instead; any choice
    that keeps the matrix invertible gives the same ideal powers.
    """
    n = equations.ncols
    if completion is None:
        pivots = set(pivot_columns(equations))
        completion = [j for j in range(n) if j not in pivots]
    extra = [[1 if k == j else 0 for k in range(n)] for j in completion]
    frame = Matrix.from_rows(list(equations.rows) + extra, n)
    inverse(frame)  # raises if the completion is not a frame
    return frame


@dataclass(frozen=True)
class PolySpace:
    """Polynomials in ``nvars`` variables of degree at most ``degree_bound``."""

    nvars: int
    degree_bound: int

    @cached_property
    def by_degree(self) -> list[list[tuple[int, ...]]]:
        return [monomials(self.nvars, k) for k in range(self.degree_bound + 1)]

    @cached_property
    def basis(self) -> list[tuple[int, ...]]:
        return [e for block in self.by_degree for e in block]

    @cached_property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for block in self.by_degree:
            out.append(acc)
            acc += len(block)
        return out


def _change_of_frame(frame: Matrix, degree: int, nvars: int) -> list[list[Fraction]]:
    """Matrix taking x-coefficients of a degree-k form to y-coefficients, y = M x."""
    minv = inverse(frame)
    xs = [
        TruncatedPoly.linear(nvars, degree, {j: minv.rows[i][j] for j in range(nvars)})
        for i in range(nvars)
    ]
    basis = monomials(nvars, degree)
    col = {e: j for j, e in enumerate(basis)}
    table = [[Fraction(0)] * len(basis) for _ in basis]
    for a, alpha in enumerate(basis):
        p = TruncatedPoly.constant(nvars, degree)
        for i, k in enumerate(alpha):
            if k:
                p = p * xs[i].power(k)
        for beta, c in p.terms.items():
            table[col[beta]][a] = c
    return table


def power_constraints(frame: Matrix, r: int, e: int, degree: int) -> list[list[Fraction]]:
    """Linear conditions on degree-``degree`` coefficients cutting out I_W^e."""
    if e <= 0:
        return []
    nvars = frame.ncols
    table = _change_of_frame(frame, degree, nvars)
    basis = monomials(nvars, degree)
    return [row for beta, row in zip(basis, table) if sum(beta[:r]) < e]


def _solutions(constraints: list[list[Fraction]], width: int) -> Matrix:
    if not constraints:
        return Matrix.identity(width)
    return nullspace(Matrix.from_rows(constraints, width))


def flat_power_membership_space(w: AffineFlatData, e: int, p: PolySpace,
                                frame: Matrix | None = None) -> Matrix:
    """rref basis, in ``p.basis`` coordinates, of the polynomials of I_W^e."""
    frame = frame or w.adapted_frame
    width = len(p.basis)
    rows = []
    for k, block in enumerate(p.by_degree):
        sols = _solutions(power_constraints(frame, w.r_prime, e, k), len(block))
        for vec in sols.rows:
            row = [Fraction(0)] * width
            row[p.offsets[k]:p.offsets[k] + len(block)] = vec
            rows.append(row)
    if not rows:
        return Matrix((), width)
    return rref(Matrix.from_rows(rows, width))


@dataclass
class AffineData:
    """The affine arrangement with its full lattice of flats."""

    nvars: int
    flats: list[AffineFlatData]
    mults: tuple[int, ...] = field(repr=False)

    @classmethod
    def build(cls, a: ArrangementInput) -> "AffineData":
        m = a.affine_dim
        hyps = [rref(Matrix.from_rows([h.form], m)) for h in a.hyperplanes]
        found: dict[tuple, Matrix] = {hp.rows: hp for hp in hyps}
        frontier = list(hyps)
        while frontier:
            nxt = []
            for f in frontier:
                for h in hyps:
                    meet = rref(f.stack(h))
                    if meet.rows not in found:
                        found[meet.rows] = meet
                        nxt.append(meet)
            frontier = nxt
        mults = tuple(h.mult for h in a.hyperplanes)
        flats = []
        for eqs in found.values():
            support = frozenset(
                i for i, h in enumerate(hyps) if rref(eqs.stack(h)).nrows == eqs.nrows
            )
            flats.append(AffineFlatData(eqs, eqs.nrows, sum(mults[i] for i in support), support))
        flats.sort(key=lambda f: (-f.r_prime, sorted(f.support)))
        return cls(m, flats, mults)

    @cached_property
    def degree_bound(self) -> int:
        return sum(max(0, f.s_prime - f.r_prime) for f in self.flats)

    @cached_property
    def space(self) -> PolySpace:
        return PolySpace(self.nvars, self.degree_bound)

    def containing(self, v: AffineFlatData) -> list[AffineFlatData]:
        return [w for w in self.flats if w.support <= v.support]

    def realizations(self, c: Fraction) -> list[tuple[AffineFlatData, int]]:
        """Pairs (V, m) with c = (r'(V) + m) / s'(V), m >= 0."""
        out = []
        for v in self.flats:
            m = c * v.s_prime - v.r_prime
            if m.denominator == 1 and m >= 0:
                out.append((v, int(m)))
        return out

    def witness(self, c, exhaustive: bool = False) -> TruncatedPoly | None:
        """A polynomial in J((c-eps)D) but not J(cD), or None when c does not jump.

        ``exhaustive`` scans every degree up to the bound instead of only m.
        """
        c = Fraction(c)
        if c <= 0:
            raise ValueError("c must be positive")
        for v, m in self.realizations(c):
            degrees = range(self.degree_bound + 1) if exhaustive else [m]
            for k in degrees:
                block = monomials(self.nvars, k)
                cons = []
                for w in self.containing(v):
                    e = max(0, math.ceil(c * w.s_prime) - w.r_prime)
                    cons.extend(power_constraints(w.adapted_frame, w.r_prime, e, k))
                sols = _solutions(cons, len(block))
                test = power_constraints(v.adapted_frame, v.r_prime, m + 1, k)
                for vec in sols.rows:
                    if any(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in test):
                        return TruncatedPoly(self.nvars, k, dict(zip(block, vec)))
        return None

    def is_jumping(self, c) -> bool:
        return self.witness(c) is not None


def oracle_is_jumping(c, data: AffineData | ArrangementInput) -> bool:
    if isinstance(data, ArrangementInput):
        data = AffineData.build(data)
    return data.is_jumping(c)


def oracle_jumping_numbers(data: AffineData, upto: Fraction = Fraction(1)) -> list[Fraction]:
    """Jumping numbers in (0, upto]; every jump is some (r' + m) / s'."""
    cands = {
        Fraction(j, f.s_prime)
        for f in data.flats
        for j in range(f.r_prime, int(upto * f.s_prime) + 1)
        if j > 0
    }
    return [c for c in sorted(cands) if c <= upto and data.is_jumping(c)]


def cross_validate(a: ArrangementInput, verdicts: dict[Fraction, bool],
                   data: AffineData | None = None) -> dict[Fraction, bool]:
    """Per-candidate agreement between the engine's verdicts and the oracle."""
    data = data or AffineData.build(a)
    return {c: data.is_jumping(c) == v for c, v in verdicts.items()}
