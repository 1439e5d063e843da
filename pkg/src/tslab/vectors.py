"""Exact sparse vectors over the rationals and admissible families of index sets.

Indices are 1-based positive integers, so the admissibility condition
``k <= min E_1`` is read literally.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from tslab.config import DEFAULT_ORACLE_BOUND
from tslab.errors import InvalidInput, OracleBoundExceeded

Rational = Fraction
RationalLike = Union[int, str, Fraction]
IndexSet = tuple  # sorted tuple of positive ints


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"p/q"``, an integer string, an int or a Fraction.

    Floats are rejected on purpose: they would silently smuggle binary
    rounding into exact computations.
    """
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "." in text or "e" in text.lower():
                raise ValueError
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"not a rational: {value!r}") from None
    raise InvalidInput(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def index_set(elements: Iterable[int]) -> IndexSet:
    items = sorted(set(int(e) for e in elements))
    if items and items[0] < 1:
        raise InvalidInput(f"indices must be positive, got {items[0]}")
    return tuple(items)


@dataclass(frozen=True)
class SparseVector:
    """Finitely supported vector; ``items`` holds ``(index, value)`` pairs sorted by index, no zeros."""

    items: tuple = ()

    def __post_init__(self) -> None:
        prev = 0
        for idx, val in self.items:
            if not isinstance(idx, int) or idx <= prev:
                raise InvalidInput("indices must be strictly increasing positive ints")
            if not isinstance(val, Fraction) or val == 0:
                raise InvalidInput("values must be nonzero Fractions")
            prev = idx

    @classmethod
    def from_mapping(cls, coords: Mapping[int, RationalLike]) -> "SparseVector":
        pairs = []
        for key, raw in coords.items():
            idx = int(key)
            if idx < 1:
                raise InvalidInput(f"indices must be positive, got {key!r}")
            val = parse_rational(raw)
            if val != 0:
                pairs.append((idx, val))
        pairs.sort()
        for (a, _), (b, _) in zip(pairs, pairs[1:]):
            if a == b:
                raise InvalidInput(f"duplicate index {a}")
        return cls(tuple(pairs))

    @classmethod
    def basis(cls, i: int, scale: RationalLike = 1) -> "SparseVector":
        return cls.from_mapping({i: scale})

    @classmethod
    def from_dense(cls, values: Iterable[RationalLike], start: int = 1) -> "SparseVector":
        return cls.from_mapping({start + k: v for k, v in enumerate(values)})

    @classmethod
    def ones(cls, indices: Iterable[int]) -> "SparseVector":
        return cls.from_mapping({i: 1 for i in indices})

    # -- access --------------------------------------------------------------

    def support(self) -> IndexSet:
        return tuple(idx for idx, _ in self.items)

    def values(self) -> tuple:
        return tuple(val for _, val in self.items)

    def as_dict(self) -> dict:
        return dict(self.items)

    def __getitem__(self, idx: int) -> Fraction:
        for i, v in self.items:
            if i == idx:
                return v
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def is_zero(self) -> bool:
        return not self.items

    def max_index(self) -> int:
        return self.items[-1][0] if self.items else 0

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "SparseVector") -> "SparseVector":
        acc = dict(self.items)
        for i, v in other.items:
            acc[i] = acc.get(i, Fraction(0)) + v
        return SparseVector.from_mapping(acc)

    def __neg__(self) -> "SparseVector":
        return SparseVector(tuple((i, -v) for i, v in self.items))

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-other)

    def scale(self, c: RationalLike) -> "SparseVector":
        c = parse_rational(c)
        if c == 0:
            return SparseVector()
        return SparseVector(tuple((i, c * v) for i, v in self.items))

    def __abs__(self) -> "SparseVector":
        return SparseVector(tuple((i, abs(v)) for i, v in self.items))

    def dot(self, other: "SparseVector") -> Fraction:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        lookup = dict(big.items)
        return sum((v * lookup[i] for i, v in small.items if i in lookup), Fraction(0))

    def with_signs(self, signs: Iterable[int]) -> "SparseVector":
        signs = list(signs)
        if len(signs) != len(self.items) or any(s not in (1, -1) for s in signs):
            raise InvalidInput("need one sign in {1, -1} per support element")
        return SparseVector(tuple((i, v * s) for (i, v), s in zip(self.items, signs)))

    # -- serialization -------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"coords": {str(i): format_rational(v) for i, v in self.items}}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "SparseVector":
        if not isinstance(obj, Mapping) or "coords" not in obj:
            raise InvalidInput('vector JSON must look like {"coords": {...}}')
        coords = obj["coords"]
        if not isinstance(coords, Mapping):
            raise InvalidInput('"coords" must be an object')
        try:
            parsed = {int(k): v for k, v in coords.items()}
        except ValueError:
            raise InvalidInput("coordinate keys must be decimal index strings") from None
        return cls.from_mapping(parsed)

    @classmethod
    def from_json(cls, text: str) -> "SparseVector":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad vector JSON: {exc}") from None
        return cls.from_json_obj(obj)

    def __str__(self) -> str:
        if not self.items:
            return "0"
        return " + ".join(f"{format_rational(v)}*e_{i}" for i, v in self.items)


def restrict(x: SparseVector, E: Iterable[int]) -> SparseVector:
    """The vector ``Ex``: coordinates of ``x`` whose index lies in ``E``."""
    keep = set(E)
    return SparseVector(tuple((i, v) for i, v in x.items if i in keep))


@dataclass(frozen=True)
class AdmissibleFamily:
    """Successive index sets ``E_1 < ... < E_k`` with ``k <= min E_1``."""

    parts: tuple

    def __post_init__(self) -> None:
        if not self.parts:
            raise InvalidInput("an admissible family needs at least one part")
        for part in self.parts:
            if not part or list(part) != sorted(set(part)):
                raise InvalidInput(f"parts must be nonempty sorted index sets, got {part!r}")
        for a, b in zip(self.parts, self.parts[1:]):
            if a[-1] >= b[0]:
                raise InvalidInput(f"parts are not successive: {a!r} then {b!r}")
        if len(self.parts) > self.parts[0][0]:
            raise InvalidInput(f"{len(self.parts)} parts but min E_1 = {self.parts[0][0]}")

    @property
    def k(self) -> int:
        return len(self.parts)

    def trace(self, support: Iterable[int]) -> tuple:
        """Intersections of the parts with ``support`` (the equivalence used for dedup)."""
        supp = set(support)
        return tuple(tuple(e for e in part if e in supp) for part in self.parts)


def enumerate_admissible_intervals(support: Iterable[int], min_parts: int = 2) -> Iterator[AdmissibleFamily]:
    """Admissible families of integer intervals, one per distinct trace on ``support``.

    Each part is the convex hull of a run of consecutive support elements;
    runs may leave gaps between them.
    """
    supp = index_set(support)
    if not supp:
        raise InvalidInput("support must be nonempty")
    s = len(supp)

    def runs(start: int, remaining: int) -> Iterator[list]:
        # all ways to pick `remaining` ordered disjoint runs inside supp[start:]
        if remaining == 0:
            yield []
            return
        for a in range(start, s):
            for b in range(a, s - remaining + 1):
                for rest in runs(b + 1, remaining - 1):
                    yield [(a, b)] + rest

    for k in range(max(1, min_parts), s + 1):
        for first in range(s):
            if supp[first] < k or s - first < k:
                continue
            for b in range(first, s - k + 1):
                for rest in runs(b + 1, k - 1):
                    parts = tuple(tuple(range(supp[lo], supp[hi] + 1)) for lo, hi in [(first, b)] + rest)
                    yield AdmissibleFamily(parts)


def enumerate_admissible_subsets(
    support: Iterable[int], min_parts: int = 1, bound: int = DEFAULT_ORACLE_BOUND
) -> Iterator[AdmissibleFamily]:
    """Every admissible family of nonempty subsets of ``support`` (exponential; oracle use only)."""
    supp = index_set(support)
    if len(supp) > bound:
        raise OracleBoundExceeded(f"support of size {len(supp)} exceeds oracle bound {bound}")
    s = len(supp)

    def subsets_between(lo: int, hi: int) -> Iterator[tuple]:
        inner = supp[lo + 1:hi]
        if lo == hi:
            yield (supp[lo],)
            return
        for r in range(len(inner) + 1):
            for mid in itertools.combinations(inner, r):
                yield (supp[lo],) + mid + (supp[hi],)

    def chains(start: int, remaining: int) -> Iterator[list]:
        if remaining == 0:
            yield []
            return
        for lo in range(start, s):
            for hi in range(lo, s - remaining + 1):
                for part in subsets_between(lo, hi):
                    for rest in chains(hi + 1, remaining - 1):
                        yield [part] + rest

    for k in range(max(1, min_parts), s + 1):
        for parts in chains(0, k):
            if parts[0][0] >= k:
                yield AdmissibleFamily(tuple(parts))
