"""
Input arrangements, their coned intersection lattice, building sets and
nested sets.

A central arrangement in C^(n-1) is embedded in C^n by giving every form a
zero coefficient on the extra coordinate.  Subspaces are stored through the
reduced row-echelon form of their equations, so two subspaces are equal
exactly when their ``equations`` tuples are equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .kernel import Matrix, parse_rational, rank, rref


class ArrangementError(ValueError):
    """Raised for malformed or invalid arrangement input."""


@dataclass(frozen=True)
class Hyperplane:
    form: tuple[Fraction, ...]
    mult: int


@dataclass(frozen=True)
class ArrangementInput:
    affine_dim: int
    hyperplanes: tuple[Hyperplane, ...]

    @property
    def n(self) -> int:
        return self.affine_dim + 1

    def permuted(self, order: Sequence[int]) -> "ArrangementInput":
        return ArrangementInput(self.affine_dim, tuple(self.hyperplanes[i] for i in order))

    def scaled(self, k: int) -> "ArrangementInput":
        return ArrangementInput(
            self.affine_dim, tuple(Hyperplane(h.form, h.mult * k) for h in self.hyperplanes)
        )

    def to_document(self) -> dict:
        return {
            "affine_dim": self.affine_dim,
            "hyperplanes": [
                {"coeffs": [_coeff_json(x) for x in h.form], "mult": h.mult}
                for h in self.hyperplanes
            ],
        }


def _coeff_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    return rank(Matrix.from_rows([u, v])) < 2


def validate(affine_dim: int, hyperplanes: Iterable[Hyperplane]) -> ArrangementInput:
    hyperplanes = tuple(hyperplanes)
    if not isinstance(affine_dim, int) or isinstance(affine_dim, bool):
        raise ArrangementError("affine_dim must be an integer")
    if affine_dim < 2:
        raise ArrangementError(f"affine_dim must be at least 2, got {affine_dim}")
    if not hyperplanes:
        raise ArrangementError("at least one hyperplane is required")
    for i, h in enumerate(hyperplanes):
        if len(h.form) != affine_dim:
            raise ArrangementError(
                f"hyperplane {i}: expected {affine_dim} coefficients, got {len(h.form)}"
            )
        if all(x == 0 for x in h.form):
            raise ArrangementError(f"hyperplane {i}: zero form")
        if not isinstance(h.mult, int) or isinstance(h.mult, bool) or h.mult < 1:
            raise ArrangementError(f"hyperplane {i}: multiplicity < 1 ({h.mult!r})")
    for i, j in combinations(range(len(hyperplanes)), 2):
        if _proportional(hyperplanes[i].form, hyperplanes[j].form):
            raise ArrangementError(f"proportional forms: hyperplanes ({i},{j})")
    return ArrangementInput(affine_dim, hyperplanes)


def parse_arrangement(document: str | Mapping) -> ArrangementInput:
    """Parse ``{"affine_dim": int, "hyperplanes": [{"coeffs": [...], "mult": int}]}``."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ArrangementError(f"malformed JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise ArrangementError("document must be a JSON object")
    missing = {"affine_dim", "hyperplanes"} - set(document)
    if missing:
        raise ArrangementError(f"missing keys: {sorted(missing)}")
    raw = document["hyperplanes"]
    if not isinstance(raw, list):
        raise ArrangementError("'hyperplanes' must be a list")
    hyperplanes = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, Mapping) or "coeffs" not in entry:
            raise ArrangementError(f"hyperplane {i}: expected an object with 'coeffs'")
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, list):
            raise ArrangementError(f"hyperplane {i}: 'coeffs' must be a list")
        try:
            form = tuple(parse_rational(x) for x in coeffs)
        except ValueError as exc:
            raise ArrangementError(f"hyperplane {i}: {exc}") from exc
        hyperplanes.append(Hyperplane(form, entry.get("mult", 1)))
    return validate(document["affine_dim"], hyperplanes)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of C^ambient, given by rref equations."""

    equations: tuple[tuple[Fraction, ...], ...]
    ambient: int

    @classmethod
    def from_equations(cls, rows: Iterable[Sequence], ambient: int) -> "Subspace":
        red = rref(Matrix.from_rows(list(rows), ambient))
        return cls(red.rows, ambient)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls.from_equations(Matrix.identity(ambient).rows, ambient)

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls((), ambient)

    @property
    def codim(self) -> int:
        return len(self.equations)

    @property
    def dim(self) -> int:
        return self.ambient - self.codim

    @property
    def is_zero(self) -> bool:
        return self.codim == self.ambient

    def contains(self, other: "Subspace") -> bool:
        """``other`` is a subset of ``self``."""
        return _contains(self.equations, other.equations, self.ambient)

    def meet(self, other: "Subspace") -> "Subspace":
        return _meet(self.equations, other.equations, self.ambient)


@lru_cache(maxsize=None)
def _contains(big, small, ambient) -> bool:
    if len(big) > len(small):
        return False
    if not big:
        return True
    return rank(Matrix(small + big, ambient)) == len(small)


@lru_cache(maxsize=None)
def _meet(a, b, ambient) -> Subspace:
    if not a:
        return Subspace(b, ambient)
    if not b:
        return Subspace(a, ambient)
    return Subspace(rref(Matrix(a + b, ambient)).rows, ambient)


def meet_all(spaces: Iterable[Subspace], ambient: int) -> Subspace:
    out = Subspace.whole(ambient)
    for s in spaces:
        out = out.meet(s)
    return out


# ---------------------------------------------------------------------------
# lattice


@dataclass(frozen=True, eq=False)
class Lattice:
    """Intersection lattice of the coned arrangement, without C^n itself.

    ``elements`` are sorted by dimension, then by the sorted tuple of
    hyperplane indices containing them; that order is combinatorial, so
    combinatorially equivalent inputs get identical labels.
    """

    ambient_n: int
    elements: tuple[Subspace, ...]
    hyperplane_ids: tuple[Subspace, ...]
    mults: tuple[int, ...]
    support: Mapping[Subspace, frozenset[int]] = field(repr=False)

    @cached_property
    def s_values(self) -> dict[Subspace, int]:
        return {v: sum(self.mults[i] for i in self.support[v]) for v in self.elements}

    @property
    def d_total(self) -> int:
        return sum(self.mults)

    def s(self, v: Subspace) -> int:
        return self.s_values[v]

    def r(self, v: Subspace) -> int:
        return v.codim

    def delta(self, v: Subspace) -> int:
        return v.dim

    def label(self, v: Subspace) -> tuple[int, ...]:
        if v.is_zero:
            return ()
        return tuple(sorted(self.support[v]))

    def normals(self, v: Subspace) -> list[tuple[Fraction, ...]]:
        return [self.hyperplane_ids[i].equations[0] for i in sorted(self.support[v])]

    @cached_property
    def index(self) -> dict[Subspace, int]:
        return {v: i for i, v in enumerate(self.elements)}

    @cached_property
    def apex(self) -> Subspace | None:
        """The unique element of dimension one, if the arrangement is essential."""
        lines = [v for v in self.elements if v.dim == 1]
        return lines[0] if lines else None


def cone(a: ArrangementInput) -> Lattice:
    n = a.n
    hyps = []
    for h in a.hyperplanes:
        hyps.append(Subspace.from_equations([tuple(h.form) + (Fraction(0),)], n))
    seen: dict[Subspace, frozenset[int]] = {}
    frontier = list(hyps)
    for h in hyps:
        seen[h] = frozenset()
    while frontier:
        nxt = []
        for f in frontier:
            for h in hyps:
                m = f.meet(h)
                if m not in seen:
                    seen[m] = frozenset()
                    nxt.append(m)
        frontier = nxt
    support = {
        v: frozenset(i for i, h in enumerate(hyps) if h.contains(v)) for v in seen
    }
    elements = tuple(sorted(seen, key=lambda v: (v.dim, tuple(sorted(support[v])))))
    return Lattice(n, elements, tuple(hyps), tuple(h.mult for h in a.hyperplanes), support)


# ---------------------------------------------------------------------------
# building sets


@dataclass(frozen=True, eq=False)
class BuildingSet:
    """Building set together with the zero subspace, which is ``members[0]``."""

    lattice: Lattice
    members: tuple[Subspace, ...]
    kind: str

    @property
    def n(self) -> int:
        return self.lattice.ambient_n

    @cached_property
    def index(self) -> dict[Subspace, int]:
        return {v: i for i, v in enumerate(self.members)}

    @cached_property
    def leq(self) -> tuple[tuple[bool, ...], ...]:
        """``leq[i][j]`` iff members[i] is contained in members[j]."""
        m = self.members
        return tuple(tuple(b.contains(a) for b in m) for a in m)

    @property
    def nonzero(self) -> range:
        return range(1, len(self.members))

    def delta(self, i: int) -> int:
        return self.members[i].dim

    def r(self, i: int) -> int:
        return self.members[i].codim

    def s(self, i: int) -> int:
        return self.lattice.s(self.members[i])

    def label(self, i: int) -> tuple[int, ...]:
        return self.lattice.label(self.members[i])

    def name(self, i: int) -> str:
        if i == 0:
            return "c0"
        return "c[" + ",".join(map(str, self.label(i))) + "]"

    @cached_property
    def names(self) -> list[str]:
        return [self.name(i) for i in range(len(self.members))]

    def comparable(self, i: int, j: int) -> bool:
        return self.leq[i][j] or self.leq[j][i]

    @cached_property
    def _cache(self) -> dict:
        return {}

    def meet_index(self, indices: Iterable[int]) -> int | None:
        """Index of the intersection of the given members, None if not a member."""
        return self._meet_index(frozenset(indices))

    def _meet_index(self, indices: frozenset[int]) -> int | None:
        key = ("meet", indices)
        if key not in self._cache:
            space = meet_all((self.members[i] for i in indices), self.n)
            self._cache[key] = self.index.get(space)
        return self._cache[key]

    def meet_dim(self, indices: Iterable[int]) -> int:
        """Dimension of the intersection; the empty intersection is C^n."""
        return meet_all((self.members[i] for i in indices), self.n).dim

    def _nested(self, indices: frozenset[int]) -> bool:
        key = ("nested", indices)
        if key in self._cache:
            return self._cache[key]
        items = sorted(i for i in indices if i != 0)
        result = True
        for k in range(2, len(items) + 1):
            for sub in combinations(items, k):
                if any(self.comparable(a, b) for a, b in combinations(sub, 2)):
                    continue
                m = self._meet_index(frozenset(sub))
                if m is not None and m != 0:
                    result = False
                    break
            if not result:
                break
        self._cache[key] = result
        return result


def full_building_set(l: Lattice) -> BuildingSet:
    return BuildingSet(l, (Subspace.zero(l.ambient_n),) + l.elements, "full")


def is_reducible(l: Lattice, v: Subspace) -> bool:
    """True when the normals through ``v`` split into two nonempty parts of
    complementary rank (exhaustive search over bipartitions)."""
    normals = l.normals(v)
    k = len(normals)
    if k < 2:
        return False
    total = v.codim
    first, rest = normals[0], normals[1:]
    for mask in range(0, 2 ** (k - 1) - 1):
        left = [first] + [rest[i] for i in range(k - 1) if mask >> i & 1]
        right = [rest[i] for i in range(k - 1) if not mask >> i & 1]
        if rank(Matrix.from_rows(left)) + rank(Matrix.from_rows(right)) == total:
            return True
    return False


def minimal_building_set(l: Lattice) -> BuildingSet:
    keep = tuple(v for v in l.elements if not is_reducible(l, v))
    return BuildingSet(l, (Subspace.zero(l.ambient_n),) + keep, "minimal")


def building_set(l: Lattice, kind: str) -> BuildingSet:
    if kind == "full":
        return full_building_set(l)
    if kind == "minimal":
        return minimal_building_set(l)
    raise ValueError(f"unknown building set kind {kind!r}")


# ---------------------------------------------------------------------------
# nested sets


def is_nested(s: Iterable[int | Subspace], g: BuildingSet) -> bool:
    """Nestedness of a set of nonzero building-set members.

    Accepts member indices or Subspace objects.  Every pairwise incomparable
    subfamily of size at least two must intersect outside the building set.
    """
    idx = frozenset(g.index[x] if isinstance(x, Subspace) else x for x in s)
    return g._nested(idx)


@dataclass(frozen=True)
class NestedSet:
    """A nonempty nested set and the pairs (bottom, top) of its product factors.

    For each V in the set, together with the zero subspace, the factor runs
    from V up to the intersection of the members of the set strictly above V
    (C^n if there are none).  For chains these are the consecutive pairs.
    """

    members: tuple[int, ...]
    building_set: BuildingSet = field(repr=False, compare=False)

    @cached_property
    def factors(self) -> tuple[tuple[Subspace, Subspace], ...]:
        g = self.building_set
        out = []
        for v in (0,) + self.members:
            above = [w for w in self.members if w != v and g.leq[v][w]]
            top = meet_all((g.members[w] for w in above), g.n)
            out.append((g.members[v], top))
        return tuple(out)

    def vsub(self, v: Subspace) -> Subspace:
        """Largest member strictly inside ``v`` (zero if none), for v in S or C^n."""
        bottoms = [b for b, t in self.factors if t == v]
        if len(bottoms) != 1:
            raise ValueError("no unique sub-element for this subspace")
        return bottoms[0]

    def __len__(self) -> int:
        return len(self.members)


def nested_subsets_of(pool: Iterable[int | Subspace], g: BuildingSet) -> list[NestedSet]:
    items = sorted({g.index[x] if isinstance(x, Subspace) else x for x in pool} - {0})
    out: list[NestedSet] = []

    def grow(current: tuple[int, ...], start: int) -> None:
        for pos in range(start, len(items)):
            cand = current + (items[pos],)
            if is_nested(cand, g):
                out.append(NestedSet(cand, g))
                grow(cand, pos + 1)

    grow((), 0)
    out.sort(key=lambda s: (len(s.members), s.members))
    return out
