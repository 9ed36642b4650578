"""
Exact arithmetic substrate.

Scalars are :class:`fractions.Fraction`; nothing in this package touches
floating point.  This module provides

* dense rational matrices with a deterministic reduced row-echelon form,
* an incremental sparse echelon basis over Q (integer rows, fraction free),
  used for the large ideal slices,
* univariate power series and sparse multivariate polynomials truncated
  at a fixed total degree, together with powers and substitutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def parse_rational(value) -> Fraction:
    """Parse an ``int`` or a ``"p/q"`` / ``"p"`` string exactly.

    Floats (and bools) are refused: the input format is exact by contract.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"inexact coefficient {value!r}; use an integer or a 'p/q' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"inexact coefficient {value!r}; use an integer or a 'p/q' string")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {value!r}") from exc
    raise ValueError(f"unsupported coefficient {value!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# dense matrices


@dataclass(frozen=True)
class Matrix:
    """Immutable rational matrix."""

    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        if any(len(row) != ncols for row in rows):
            raise ValueError("ragged matrix")
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], n
        )

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def stack(self, other: "Matrix") -> "Matrix":
        if other.ncols != self.ncols:
            raise ValueError("column mismatch")
        return Matrix(self.rows + other.rows, self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        for row in self.rows:
            out.append(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols))
        return Matrix(tuple(out), other.ncols)

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.rows)


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form with zero rows dropped.

    Pivot rule: leftmost column holding a nonzero entry among the unused rows,
    and within it the first such row.
    """
    rows = [list(r) for r in m.rows]
    nrows = len(rows)
    lead = 0
    for col in range(m.ncols):
        if lead >= nrows:
            break
        pivot = next((i for i in range(lead, nrows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        prow = rows[lead]
        inv = 1 / prow[col]
        if inv != 1:
            prow[:] = [x * inv for x in prow]
        for i in range(nrows):
            if i != lead and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        lead += 1
    return Matrix(tuple(tuple(r) for r in rows[:lead]), m.ncols)


def pivot_columns(reduced: Matrix) -> list[int]:
    return [next(j for j, x in enumerate(row) if x != 0) for row in reduced.rows]


def rank(m: Matrix) -> int:
    return rref(m).nrows


def nullspace(m: Matrix) -> Matrix:
    """Basis of {v : m v = 0}, one basis vector per free column."""
    red = rref(m)
    pivots = pivot_columns(red)
    free = [j for j in range(m.ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for row, p in zip(red.rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return Matrix.from_rows(basis, m.ncols)


def in_row_space(m: Matrix, vector: Sequence) -> bool:
    if m.nrows == 0:
        return all(x == 0 for x in vector)
    return rank(m.stack(Matrix.from_rows([vector], m.ncols))) == rank(m)


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise ValueError("not square")
    aug = Matrix.from_rows(
        [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m.rows)],
        2 * n,
    )
    red = rref(aug)
    if red.nrows < n or any(red.rows[i][i] != 1 for i in range(n)):
        raise ValueError("singular matrix")
    return Matrix.from_rows([row[n:] for row in red.rows], n)


# ---------------------------------------------------------------------------
# sparse incremental elimination


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: v // g for k, v in row.items()}
    return row


def integer_row(entries: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a sparse rational row to a primitive integer row."""
    entries = {k: Fraction(v) for k, v in entries.items() if v != 0}
    if not entries:
        return {}
    den = 1
    for v in entries.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    return _primitive({k: int(v * den) for k, v in entries.items()})


class EchelonBasis:
    """Row-echelon basis of a growing row space, rows kept as primitive ints.

    Each stored row has its leading entry at its pivot column, so reducing a
    vector against the basis in increasing pivot order is exact and final.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        row = dict(row)
        done = -1
        while row:
            cands = [k for k in row if k > done and k in self.rows]
            if not cands:
                break
            p = min(cands)
            prow = self.rows[p]
            a, b = prow[p], row[p]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in row.items()}
            for k, v in prow.items():
                x = new.get(k, 0) - b * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else new
            done = p
        return row

    def add(self, row: dict[int, int]) -> bool:
        """Insert ``row``; return True when it enlarged the span."""
        red = self.reduce(row)
        if not red:
            return False
        self.rows[min(red)] = red
        return True

    def contains(self, row: dict[int, int]) -> bool:
        return not self.reduce(row)

    def annihilator(self) -> list[Fraction]:
        """The functional vanishing on a codimension-one span, free entry 1."""
        free = [j for j in range(self.ncols) if j not in self.rows]
        if len(free) != 1:
            raise ValueError(f"span has codimension {len(free)}, expected 1")
        phi = [Fraction(0)] * self.ncols
        phi[free[0]] = Fraction(1)
        for p in sorted(self.rows, reverse=True):
            prow = self.rows[p]
            acc = sum((Fraction(v) * phi[k] for k, v in prow.items() if k != p), Fraction(0))
            phi[p] = -acc / prow[p]
        return phi


# ---------------------------------------------------------------------------
# truncated series


@dataclass(frozen=True)
class UnivariateSeries:
    coefficients: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]


def q_series(order: int) -> UnivariateSeries:
    """Coefficients of x / (1 - exp(-x)) through degree ``order``.

    Long division of x by 1 - exp(-x) = x * sum_k (-1)^k x^k / (k+1)!.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    g = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(order + 1)]
    q = [Fraction(1)]
    for m in range(1, order + 1):
        q.append(-sum((g[k] * q[m - k] for k in range(1, m + 1)), Fraction(0)))
    return UnivariateSeries(tuple(q))


def exp_series(order: int) -> UnivariateSeries:
    return UnivariateSeries(tuple(Fraction(1, math.factorial(k)) for k in range(order + 1)))


class TruncatedPoly:
    """Sparse polynomial over Q in ``nvars`` variables, truncated at ``order``.

    ``terms`` maps exponent tuples to nonzero Fractions; every stored term has
    total degree at most ``order``.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "order", "terms")

    def __init__(self, nvars: int, order: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        self.order = order
        clean = {}
        if terms:
            for e, c in terms.items():
                if c != 0 and sum(e) <= order:
                    if len(e) != nvars:
                        raise ValueError("exponent length does not match nvars")
                    clean[tuple(e)] = Fraction(c)
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, order: int, value=1) -> "TruncatedPoly":
        return cls(nvars, order, {(0,) * nvars: Fraction(value)})

    @classmethod
    def zero(cls, nvars: int, order: int) -> "TruncatedPoly":
        return cls(nvars, order)

    @classmethod
    def variable(cls, nvars: int, order: int, index: int, coeff=1) -> "TruncatedPoly":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, order, {tuple(e): Fraction(coeff)})

    @classmethod
    def linear(cls, nvars: int, order: int, coeffs: Mapping[int, Fraction]) -> "TruncatedPoly":
        terms = {}
        for i, c in coeffs.items():
            e = [0] * nvars
            e[i] = 1
            terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + Fraction(c)
        return cls(nvars, order, terms)

    @classmethod
    def monomial(cls, exponent: Exponent, order: int, coeff=1) -> "TruncatedPoly":
        return cls(len(exponent), order, {tuple(exponent): Fraction(coeff)})

    # --- inspection

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == TruncatedPoly.constant(self.nvars, self.order, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"TruncatedPoly({self.to_string()}, order={self.order})"

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(e) == degree for e in self.terms)

    def homogeneous_part(self, degree: int) -> "TruncatedPoly":
        return TruncatedPoly(
            self.nvars, self.order, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    def truncate(self, order: int) -> "TruncatedPoly":
        return TruncatedPoly(self.nvars, order, self.terms)

    # --- arithmetic

    def _coerce(self, other) -> "TruncatedPoly":
        if isinstance(other, TruncatedPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return TruncatedPoly.constant(self.nvars, self.order, other)

    def __add__(self, other) -> "TruncatedPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return TruncatedPoly(self.nvars, min(self.order, other.order), terms)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly(self.nvars, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "TruncatedPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedPoly":
        return self._coerce(other) - self

    def scale(self, factor) -> "TruncatedPoly":
        factor = Fraction(factor)
        return TruncatedPoly(self.nvars, self.order, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other) -> "TruncatedPoly":
        if not isinstance(other, TruncatedPoly):
            return self.scale(other)
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        order = min(self.order, other.order)
        out: dict[Exponent, Fraction] = {}
        right = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, d2, c2 in right:
                if d1 + d2 > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TruncatedPoly(self.nvars, order, out)

    def __rmul__(self, other) -> "TruncatedPoly":
        return self.scale(other)

    def shift(self, exponent: Exponent, coeff=1, order: int | None = None) -> "TruncatedPoly":
        """Multiply by a monomial without truncating below ``order``."""
        order = self.order + sum(exponent) if order is None else order
        coeff = Fraction(coeff)
        return TruncatedPoly(
            self.nvars,
            order,
            {tuple(a + b for a, b in zip(e, exponent)): c * coeff for e, c in self.terms.items()},
        )

    def power(self, k: int) -> "TruncatedPoly":
        if k < 0:
            raise ValueError("use series_pow for negative exponents")
        result = TruncatedPoly.constant(self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def substitute(self, images: Mapping[int, "TruncatedPoly"]) -> "TruncatedPoly":
        """Replace variable ``i`` by ``images[i]``; other variables are kept."""
        cache: dict[tuple[int, int], TruncatedPoly] = {}
        result = TruncatedPoly.zero(self.nvars, self.order)
        for e, c in self.terms.items():
            keep = tuple(0 if i in images else x for i, x in enumerate(e))
            term = TruncatedPoly(self.nvars, self.order, {keep: c})
            for i, x in enumerate(e):
                if x and i in images:
                    key = (i, x)
                    if key not in cache:
                        cache[key] = images[i].truncate(self.order).power(x)
                    term = term * cache[key]
            result = result + term
        return result

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(
                names[i] if x == 1 else f"{names[i]}^{x}" for i, x in enumerate(e) if x
            )
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def series_pow(s: TruncatedPoly, k: int) -> TruncatedPoly:
    """``s**k`` truncated, for ``s`` with constant term 1 and any integer k."""
    if s.constant_term() != 1:
        raise ValueError("series_pow needs constant term 1")
    one = TruncatedPoly.constant(s.nvars, s.order)
    if k == 0:
        return one
    if k < 0:
        u = s - one
        neg = -u
        inv = one
        term = one
        for _ in range(s.order):
            term = term * neg
            if not term:
                break
            inv = inv + term
        return inv.power(-k)
    return s.power(k)


def compose(series: UnivariateSeries, ell: TruncatedPoly) -> TruncatedPoly:
    """sum_k series[k] * ell**k, truncated at ``ell.order``."""
    result = TruncatedPoly.zero(ell.nvars, ell.order)
    term = TruncatedPoly.constant(ell.nvars, ell.order)
    for k in range(min(series.order, ell.order) + 1):
        if k:
            term = term * ell
            if not term:
                break
        if series[k]:
            result = result + term.scale(series[k])
    return result


def substitute_linear(series: UnivariateSeries, ell: TruncatedPoly) -> TruncatedPoly:
    """Compose a univariate series with a linear form (no constant term)."""
    if not ell.is_homogeneous(1):
        raise ValueError("substitute_linear needs a homogeneous linear form")
    return compose(series, ell)


def monomials(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of the given total degree, lexicographically descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out
