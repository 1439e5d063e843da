"""Norming sets: finite sets of functionals realizing a norm on ``span{e_1..e_dim}``.

A norming set ``F`` induces ``|x| = max_{f in F} |<f, x>|``.  All the norms
built in here are 1-unconditional, so a set may be flagged ``unconditional``:
it then stands for the closure of its functionals under every coordinate
sign change, and only one nonnegative representative per sign class is
stored.  Sets read from user JSON default to the plain (negation-symmetric)
reading.

Tsirelson functionals are generated dually to the primal recursion: level
n+1 adds ``1/2 (g_1 + ... + g_k)`` for successive restrictions ``g_i`` of
level-n functionals with ``2 <= k <= min supp g_1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from tslab import lp
from tslab.config import dim_bound
from tslab.errors import (
    DimensionBoundExceeded,
    InvalidInput,
    SupportOutOfRange,
    UnsupportedSpec,
)
from tslab.norms import ITERATE, L1, LIMIT, LP, POLYHEDRAL, SUP, NormSpec
from tslab.vectors import SparseVector, format_rational

Functional = SparseVector

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class NormingSet:
    dim: int
    functionals: tuple
    unconditional: bool = False

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidInput("dim must be positive")
        covered = set()
        for f in self.functionals:
            if f.max_index() > self.dim:
                raise InvalidInput(f"functional {f} leaves dimension {self.dim}")
            if self.unconditional and any(v < 0 for v in f.values()):
                raise InvalidInput("unconditional norming sets store nonnegative representatives")
            covered.update(f.support())
        if self.unconditional:
            missing = set(range(1, self.dim + 1)) - covered
            if missing:
                raise InvalidInput(f"coordinates {sorted(missing)} are not normed")
        elif _rank([f for f in self.functionals], self.dim) < self.dim:
            raise InvalidInput("functionals do not span the dual; the induced seminorm is not a norm")

    def __len__(self) -> int:
        return len(self.functionals)

    def expanded(self) -> tuple:
        """Every functional explicitly, closed under negation (and sign changes if unconditional)."""
        out = []
        seen = set()
        for f in self.functionals:
            if self.unconditional:
                variants = (f.with_signs(signs) for signs in itertools.product((1, -1), repeat=len(f)))
            else:
                variants = (f, -f)
            for g in variants:
                if g.items not in seen:
                    seen.add(g.items)
                    out.append(g)
        return tuple(out)

    def to_json_obj(self) -> dict:
        return {
            "dim": self.dim,
            "functionals": [{str(i): format_rational(v) for i, v in f.items} for f in self.functionals],
            "symmetry": "unconditional" if self.unconditional else "negation",
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "NormingSet":
        try:
            dim = int(obj["dim"])
            raw = obj["functionals"]
        except (KeyError, TypeError, ValueError):
            raise InvalidInput('norming set JSON needs "dim" and "functionals"') from None
        symmetry = obj.get("symmetry", "negation")
        if symmetry not in ("negation", "unconditional"):
            raise InvalidInput(f"unknown symmetry {symmetry!r}")
        funcs = tuple(SparseVector.from_mapping({int(k): v for k, v in f.items()}) for f in raw)
        return cls(dim, funcs, unconditional=symmetry == "unconditional")


def load_norming_set(path: str) -> NormingSet:
    with open(path) as fh:
        return NormingSet.from_json_obj(json.load(fh))


def _rank(vectors: Sequence[SparseVector], dim: int) -> int:
    rows = [[v[i] for i in range(1, dim + 1)] for v in vectors]
    rank = 0
    for col in range(dim):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# -- construction ------------------------------------------------------------------
# Internally a functional is a dense tuple of length dim with nonnegative entries.


def prune_dominated(funcs: Iterable[tuple]) -> list:
    """Drop every profile bounded coordinatewise by another (duplicates collapse to one).

    Sound for unconditional sets only: there ``max_f <f, |x|>`` is monotone
    in each ``f``.
    """
    uniq = sorted(set(funcs), key=lambda f: (-sum(f), f))
    kept: list = []
    for f in uniq:
        if not any(all(a <= b for a, b in zip(f, g)) for g in kept):
            kept.append(f)
    return kept


def _restrictions(funcs: Sequence[tuple], dim: int, prune: bool = True) -> dict:
    """All restrictions of ``funcs`` to intervals, grouped by exact support hull, undominated per hull."""
    groups: dict = {}
    for f in funcs:
        nz = [i for i, v in enumerate(f) if v]
        for a_pos, a in enumerate(nz):
            for b in nz[a_pos:]:
                g = tuple(v if a <= i <= b else Fraction(0) for i, v in enumerate(f))
                groups.setdefault((a, b), set()).add(g)
    if not prune:
        return {hull: sorted(members) for hull, members in groups.items()}
    return {hull: prune_dominated(members) for hull, members in groups.items()}


def _tsirelson_step(funcs: Sequence[tuple], dim: int, prune: bool = True) -> list:
    groups = _restrictions(funcs, dim, prune)
    starts: dict = {}
    for (a, b), members in groups.items():
        starts.setdefault(a, []).extend((b, g) for g in members)
    combos = []

    def extend(acc: tuple, last: int, remaining: int, count: int) -> None:
        if count >= 2:
            combos.append(tuple(v * HALF for v in acc))
        if remaining == 0:
            return
        for a in range(last + 1, dim):
            for b, g in starts.get(a, ()):
                extend(tuple(x + y for x, y in zip(acc, g)), b, remaining - 1, count + 1)

    for a in sorted(starts):
        kmax = a + 1  # 1-based index of the first support element
        if kmax < 2:
            continue
        for b, g in starts[a]:
            extend(g, b, kmax - 1, 1)
    if not prune:
        return sorted(set(funcs) | set(combos))
    return prune_dominated(list(funcs) + combos)


def _unit(i: int, dim: int) -> tuple:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))


def _to_set(dense: Sequence[tuple], dim: int) -> NormingSet:
    funcs = tuple(SparseVector.from_dense(f) for f in sorted(dense, reverse=True))
    return NormingSet(dim, funcs, unconditional=True)


def _check_dim(dim: int) -> None:
    bound = dim_bound()
    if dim < 1:
        raise InvalidInput("dim must be positive")
    if dim > bound:
        raise DimensionBoundExceeded(f"dim {dim} exceeds polyhedral bound {bound} (set TSLAB_DIM_BOUND)")


def norming_set(spec: NormSpec, dim: int) -> NormingSet:
    """Norming set realizing ``spec`` exactly on vectors supported in ``{1..dim}``."""
    _check_dim(dim)
    return _norming_set_cached(spec, dim)


@lru_cache(maxsize=256)
def _norming_set_cached(spec: NormSpec, dim: int) -> NormingSet:
    if spec.kind == SUP:
        return _to_set([_unit(i, dim) for i in range(dim)], dim)
    if spec.kind == L1:
        return _to_set([tuple(Fraction(1) for _ in range(dim))], dim)
    if spec.kind == ITERATE:
        return _to_set(_tsirelson_levels(dim, spec.n), dim)
    if spec.kind == LIMIT:
        return _to_set(_tsirelson_levels(dim, None), dim)
    if spec.kind == POLYHEDRAL:
        return truncate(spec.norming, dim)
    if spec.kind == LP:
        raise UnsupportedSpec(f"{spec} is not polyhedral")
    raise UnsupportedSpec(str(spec))


@lru_cache(maxsize=64)
def _tsirelson_level(dim: int, n: int) -> tuple:
    if n == 0:
        return tuple(_unit(i, dim) for i in range(dim))
    prev = _tsirelson_level(dim, n - 1)
    nxt = _tsirelson_step(prev, dim)
    return tuple(sorted(nxt))


def tsirelson_functionals(dim: int, n: int, prune: bool = True) -> NormingSet:
    """Level-``n`` Tsirelson norming set; ``prune=False`` keeps every generated functional."""
    _check_dim(dim)
    if prune:
        return _to_set(_tsirelson_level(dim, n), dim)
    funcs = [_unit(i, dim) for i in range(dim)]
    for _ in range(n):
        funcs = _tsirelson_step(funcs, dim, prune=False)
    return _to_set(funcs, dim)


def _tsirelson_levels(dim: int, n: Optional[int]) -> tuple:
    if n is not None:
        # levels beyond dim - 1 coincide with the limit on this truncation
        return _tsirelson_level(dim, min(n, dim))
    level = 0
    cur = _tsirelson_level(dim, 0)
    while True:
        nxt = _tsirelson_level(dim, level + 1)
        if nxt == cur:
            return cur
        cur, level = nxt, level + 1


def truncate(s: NormingSet, dim: int) -> NormingSet:
    """Restriction of a norming set to the first ``dim`` coordinates."""
    if dim == s.dim:
        return s
    if dim > s.dim:
        raise SupportOutOfRange(f"norming set has dim {s.dim}, asked for {dim}")
    funcs = []
    for f in s.functionals:
        g = SparseVector(tuple((i, v) for i, v in f.items if i <= dim))
        if not g.is_zero():
            funcs.append(g)
    if s.unconditional:
        dense = prune_dominated(tuple(g[i] for i in range(1, dim + 1)) for g in funcs)
        return _to_set(dense, dim)
    uniq = {}
    for g in funcs:
        key = min(g.items, (-g).items)
        uniq.setdefault(key, g)
    return NormingSet(dim, tuple(uniq.values()), unconditional=False)


# -- evaluation and optimization -----------------------------------------------------


def eval_polyhedral(s: NormingSet, x: SparseVector) -> Fraction:
    if x.max_index() > s.dim:
        raise SupportOutOfRange(f"vector reaches index {x.max_index()} beyond dim {s.dim}")
    if x.is_zero():
        return Fraction(0)
    if s.unconditional:
        ax = abs(x)
        return max(f.dot(ax) for f in s.functionals)
    return max(abs(f.dot(x)) for f in s.functionals)


def maximize_linear(objective: SparseVector, feasible: NormingSet) -> tuple:
    """Exact ``max <objective, x>`` over ``{x : |<f, x>| <= 1 for f in feasible}``.

    Returns ``(value, witness)`` where the witness is an optimal vertex.
    """
    dim = feasible.dim
    if objective.max_index() > dim:
        raise SupportOutOfRange(f"objective reaches index {objective.max_index()} beyond dim {dim}")
    if objective.is_zero():
        return Fraction(0), SparseVector()
    if feasible.unconditional:
        # by symmetry an optimum sits in the orthant matching the objective's signs
        idx = list(objective.support())
        c = [abs(v) for v in objective.values()]
        A = [[f[i] for i in idx] for f in feasible.functionals]
        value, y = lp.maximize(c, A, [1] * len(A))
        signs = {i: (1 if v > 0 else -1) for i, v in objective.items}
        witness = SparseVector.from_mapping({i: signs[i] * yi for i, yi in zip(idx, y)})
        return value, witness
    # free variables split as x = u - v
    idx = list(range(1, dim + 1))
    c = [objective[i] for i in idx] + [-objective[i] for i in idx]
    A, b = [], []
    for f in feasible.functionals:
        row = [f[i] for i in idx]
        A.append(row + [-a for a in row])
        A.append([-a for a in row] + row)
        b += [1, 1]
    value, z = lp.maximize(c, A, b)
    witness = SparseVector.from_mapping({i: z[k] - z[k + dim] for k, i in enumerate(idx)})
    return value, witness
