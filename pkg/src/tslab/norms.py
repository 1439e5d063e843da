"""Base norms, Tsirelson iterates and the Tsirelson norm on finitely supported vectors.

The iterates follow the Figiel-Johnson recursion

    |x|_0     = max_i |x_i|
    |x|_{n+1} = max(|x|_n, 1/2 * max sum_i |E_i x|_n)

over admissible families ``k <= E_1 < ... < E_k``.  The fast path is a
dynamic program over runs of consecutive support positions; a literal
brute force over arbitrary subsets is kept as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Sequence, Union

from tslab.config import DEFAULT_ORACLE_BOUND
from tslab.errors import InvalidInput, OracleBoundExceeded, UnsupportedSpec
from tslab.vectors import SparseVector, enumerate_admissible_subsets, parse_rational

HALF = Fraction(1, 2)

SUP = "sup"
L1 = "l1"
LP = "lp"
ITERATE = "tsirelson"
LIMIT = "tsirelson-limit"
POLYHEDRAL = "polyhedral"

Number = Union[Fraction, float]


@dataclass(frozen=True)
class NormSpec:
    """Symbolic description of a norm on c_00."""

    kind: str
    p: Optional[Fraction] = None
    n: Optional[int] = None
    norming: Optional[object] = None  # a polyhedral.NormingSet

    def __post_init__(self) -> None:
        if self.kind == LP:
            if self.p is None or self.p <= 1:
                raise InvalidInput("Lp exponent must be a rational > 1")
        elif self.kind == ITERATE:
            if self.n is None or self.n < 0:
                raise InvalidInput("iterate index must be a nonnegative integer")
        elif self.kind == POLYHEDRAL:
            if self.norming is None:
                raise InvalidInput("polyhedral spec needs a norming set")
        elif self.kind not in (SUP, L1, LIMIT):
            raise InvalidInput(f"unknown norm kind {self.kind!r}")

    @classmethod
    def sup(cls) -> "NormSpec":
        return cls(SUP)

    @classmethod
    def l1(cls) -> "NormSpec":
        return cls(L1)

    @classmethod
    def lp(cls, p) -> "NormSpec":
        return cls(LP, p=parse_rational(p))

    @classmethod
    def iterate(cls, n: int) -> "NormSpec":
        return cls(ITERATE, n=int(n))

    @classmethod
    def limit(cls) -> "NormSpec":
        return cls(LIMIT)

    @classmethod
    def polyhedral(cls, norming) -> "NormSpec":
        return cls(POLYHEDRAL, norming=norming)

    @property
    def is_exact(self) -> bool:
        return self.kind != LP

    @property
    def is_polyhedral(self) -> bool:
        return self.kind != LP

    def __str__(self) -> str:
        if self.kind == LP:
            return f"lp:{self.p}"
        if self.kind == ITERATE:
            return f"tsirelson:{self.n}"
        if self.kind == LIMIT:
            return "tsirelson:T"
        if self.kind == POLYHEDRAL:
            return f"polyhedral[dim={self.norming.dim},size={len(self.norming.functionals)}]"
        return self.kind


def parse_spec(text: str) -> NormSpec:
    """Parse ``sup``, ``l1``, ``lp:3/2``, ``tsirelson:4`` or ``tsirelson:T``.

    ``poly:<path>`` loads a norming-set JSON file.
    """
    t = text.strip()
    low = t.lower()
    if low in ("sup", "c00", "linf"):
        return NormSpec.sup()
    if low == "l1":
        return NormSpec.l1()
    head, sep, tail = t.partition(":")
    if sep:
        head = head.lower()
        if head == "lp":
            return NormSpec.lp(tail)
        if head == "tsirelson":
            if tail.strip().upper() == "T":
                return NormSpec.limit()
            try:
                return NormSpec.iterate(int(tail))
            except ValueError:
                pass
        if head == "poly":
            from tslab.polyhedral import load_norming_set

            return NormSpec.polyhedral(load_norming_set(tail))
    raise InvalidInput(f"cannot parse norm spec {text!r}")


# -- base norms -----------------------------------------------------------------


def base_norm(x: SparseVector, spec: NormSpec) -> Number:
    """Sup and l1 norms are exact; Lp is a float with ~1e-15 relative error."""
    vals = [abs(v) for v in x.values()]
    if spec.kind == SUP:
        return max(vals, default=Fraction(0))
    if spec.kind == L1:
        return sum(vals, Fraction(0))
    if spec.kind == LP:
        if not vals:
            return 0.0
        p = float(spec.p)
        top = max(vals)
        # scale by the largest entry so huge/tiny rationals do not overflow
        total = math.fsum(float(v / top) ** p for v in vals)
        return float(top) * total ** (1.0 / p)
    raise UnsupportedSpec(f"base_norm does not handle {spec}")


# -- interval dynamic program ----------------------------------------------------


def _sup_table(vals: Sequence[Number]) -> list:
    s = len(vals)
    table = [[None] * s for _ in range(s)]
    for lo in range(s):
        cur = vals[lo]
        for hi in range(lo, s):
            if vals[hi] > cur:
                cur = vals[hi]
            table[lo][hi] = cur
    return table


def _split_table(block: list, pos: Sequence[int]) -> list:
    """Best admissible sum for every run ``[lo, hi]`` of support positions.

    ``block[a][b]`` is the norm of the restriction to positions ``a..b``.
    Entry ``[lo][hi]`` is the max over a start ``s >= lo`` and ``k >= 2``
    blocks covering ``s..hi`` with ``k <= pos[s]`` of the summed block norms,
    or None when no such family exists.  Covering the tail is enough:
    enlarging a part never lowers its norm.
    """
    s = len(pos)
    split = [[None] * s for _ in range(s)]
    for hi in range(s):
        # parts[k][a]: best sum for exactly k blocks covering a..hi
        parts = [None, [block[a][hi] for a in range(hi + 1)]]
        best_at = [None] * (hi + 1)
        kmax = hi + 1
        for k in range(2, kmax + 1):
            prev = parts[k - 1]
            cur = [None] * (hi + 1)
            for a in range(hi + 1):
                if hi - a + 1 < k:
                    continue
                best = None
                for t in range(a, hi - k + 2):
                    tail = prev[t + 1]
                    if tail is None:
                        continue
                    cand = block[a][t] + tail
                    if best is None or cand > best:
                        best = cand
                cur[a] = best
                if best is not None and k <= pos[a]:
                    if best_at[a] is None or best > best_at[a]:
                        best_at[a] = best
            parts.append(cur)
        running = None
        for lo in range(hi, -1, -1):
            if best_at[lo] is not None and (running is None or best_at[lo] > running):
                running = best_at[lo]
            split[lo][hi] = running
    return split


def _combine(base: list, split: list) -> list:
    s = len(base)
    out = [[None] * s for _ in range(s)]
    for lo in range(s):
        for hi in range(lo, s):
            val = base[lo][hi]
            sp = split[lo][hi]
            if sp is not None:
                cand = sp / 2
                if cand > val:
                    val = cand
            out[lo][hi] = val
    return out


def _iterate_tables(vals: Sequence[Number], pos: Sequence[int], n: int) -> list:
    table = _sup_table(vals)
    for _ in range(n):
        nxt = _combine(table, _split_table(table, pos))
        if nxt == table:
            # fixed point: every later level is identical
            break
        table = nxt
    return table


def _limit_table(vals: Sequence[Number], pos: Sequence[int]) -> list:
    """Tsirelson norm of every run, by increasing run length.

    Any family with k >= 2 nonempty parts uses strictly shorter runs, so the
    implicit equation unwinds into a well-founded recursion.
    """
    s = len(pos)
    sup = _sup_table(vals)
    T = [[None] * s for _ in range(s)]
    # parts[(a, hi)][k] = best sum of exactly k blocks covering a..hi
    parts: dict = {}
    split_suffix = [[None] * s for _ in range(s)]
    for length in range(1, s + 1):
        for lo in range(0, s - length + 1):
            hi = lo + length - 1
            row = [None, None]
            best_here = None
            for k in range(2, length + 1):
                best = None
                for t in range(lo, hi - k + 2):
                    tail = parts[(t + 1, hi)][k - 1]
                    if tail is None:
                        continue
                    cand = T[lo][t] + tail
                    if best is None or cand > best:
                        best = cand
                row.append(best)
                if best is not None and k <= pos[lo] and (best_here is None or best > best_here):
                    best_here = best
            inner = split_suffix[lo + 1][hi] if lo + 1 <= hi else None
            sp = best_here
            if inner is not None and (sp is None or inner > sp):
                sp = inner
            split_suffix[lo][hi] = sp
            val = sup[lo][hi]
            if sp is not None and sp / 2 > val:
                val = sp / 2
            T[lo][hi] = val
            row[1] = val
            parts[(lo, hi)] = row
    return T


def _abs_profile(x: SparseVector) -> tuple:
    return [abs(v) for v in x.values()], list(x.support())


def tsirelson_iterate(x: SparseVector, n: int) -> Fraction:
    """Exact ``|x|_n`` by dynamic programming over runs of the support."""
    if n < 0:
        raise InvalidInput("iterate index must be >= 0")
    if x.is_zero():
        return Fraction(0)
    vals, pos = _abs_profile(x)
    return _iterate_tables(vals, pos, n)[0][-1]


def tsirelson_limit(x: SparseVector) -> Fraction:
    """Exact Tsirelson norm ``|x|_T``."""
    if x.is_zero():
        return Fraction(0)
    vals, pos = _abs_profile(x)
    return _limit_table(vals, pos)[0][-1]


def brute_force_iterate(x: SparseVector, n: int, bound: int = DEFAULT_ORACLE_BOUND) -> Fraction:
    """The recursion taken literally: all subset families, k >= 1, no caching of norm values.

    Coordinates are scaled to integers by ``lcm(denominators) * 2**n`` so the
    halvings stay exact without Fraction overhead.
    """
    if n < 0:
        raise InvalidInput("iterate index must be >= 0")
    if len(x) > bound:
        raise OracleBoundExceeded(f"support of size {len(x)} exceeds oracle bound {bound}")
    if x.is_zero():
        return Fraction(0)
    scale = math.lcm(*(v.denominator for v in x.values())) << n
    coords = tuple((i, int(abs(v) * scale)) for i, v in x.items)
    return Fraction(_brute(coords, n, bound), scale)


@lru_cache(maxsize=4096)
def _subset_families(support: tuple, bound: int) -> tuple:
    return tuple(fam.parts for fam in enumerate_admissible_subsets(support, min_parts=1, bound=bound))


def _brute(coords: tuple, n: int, bound: int) -> int:
    if n == 0 or not coords:
        return max((v for _, v in coords), default=0)
    best = _brute(coords, n - 1, bound)
    lookup = dict(coords)
    for parts in _subset_families(tuple(i for i, _ in coords), bound):
        total = 0
        for part in parts:
            total += _brute(tuple((i, lookup[i]) for i in part), n - 1, bound)
        # level-n values are multiples of 2 ** (levels still to climb), so this is exact
        if total // 2 > best:
            best = total // 2
    return best


def norm(x: SparseVector, spec: NormSpec) -> Number:
    """Evaluate any supported norm; exact except for Lp."""
    kind = spec.kind
    if kind in (SUP, L1, LP):
        return base_norm(x, spec)
    if kind == ITERATE:
        return tsirelson_iterate(x, spec.n)
    if kind == LIMIT:
        return tsirelson_limit(x)
    if kind == POLYHEDRAL:
        from tslab.polyhedral import eval_polyhedral

        return eval_polyhedral(spec.norming, x)
    raise UnsupportedSpec(str(spec))


# -- pointwise convergence -------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    values: tuple
    stable_from: int  # first index from which the sequence is constant
    eventually_constant: bool
    limit: Optional[Number]

    def to_json_obj(self) -> dict:
        from tslab.vectors import format_rational

        def fmt(v):
            return format_rational(v) if isinstance(v, Fraction) else v

        return {
            "values": [fmt(v) for v in self.values],
            "stable_from": self.stable_from,
            "eventually_constant": self.eventually_constant,
            "limit": fmt(self.limit) if self.limit is not None else None,
        }


def pointwise_limit(x: SparseVector, specs: Sequence[NormSpec], min_tail: int = 2) -> ConvergenceReport:
    """Evaluate ``x`` along a sequence of norms and detect where it stops moving.

    The sequence counts as eventually constant when its final value is
    repeated over at least ``min_tail`` trailing entries.
    """
    if not specs:
        raise InvalidInput("need at least one norm spec")
    values = tuple(norm(x, s) for s in specs)
    start = len(values) - 1
    while start > 0 and values[start - 1] == values[-1]:
        start -= 1
    constant = len(values) - start >= min_tail
    return ConvergenceReport(values, start, constant, values[-1] if constant else None)
