"""Finite shadows of the double limit condition for a formula on pairs of norms.

A pair of norm sequences gives the matrix ``phi(M_i, N_j)``.  Stability asks
that the two iterated (ultra)limits agree; the equivalent finite criterion is
``sup_{i<j} = inf_{j<i}``.  Ultralimits are not computable, so
:func:`double_limit_probe` approximates them by ordinary limits detected with
a Cauchy test on a finite window.  For convergent sequences the two agree.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from tslab.distortion import distortion, phi_from_distortion
from tslab.errors import (
    InsufficientData,
    InvalidInput,
    NoConvergenceDetected,
    TslabError,
)
from tslab.norms import NormSpec, parse_spec, tsirelson_iterate
from tslab.vectors import SparseVector, format_rational

STABLE = "stable-at-truncation"
ORDER_PROPERTY = "order-property-witnessed"
DEFAULT_TOLERANCE = 1e-9

Number = Union[Fraction, float, int]


@dataclass(frozen=True)
class NormSequence:
    label: str
    generator: Callable[[int], NormSpec]
    length: int

    def __post_init__(self) -> None:
        if self.length < 2:
            raise InvalidInput("a norm sequence needs length >= 2")

    def __getitem__(self, i: int) -> NormSpec:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return self.generator(i)

    def specs(self) -> list:
        return [self.generator(i) for i in range(self.length)]

    @classmethod
    def tsirelson(cls, start: int, stop: int) -> "NormSequence":
        return cls(f"tsirelson:{start}..{stop}", lambda i: NormSpec.iterate(start + i), stop - start + 1)

    @classmethod
    def constant(cls, spec: NormSpec, length: int) -> "NormSequence":
        return cls(f"{spec}*{length}", lambda i: spec, length)

    @classmethod
    def of(cls, specs: Sequence[NormSpec], label: Optional[str] = None) -> "NormSequence":
        specs = tuple(specs)
        return cls(label or ",".join(str(s) for s in specs), lambda i: specs[i], len(specs))


def parse_sequence(text: str) -> NormSequence:
    """``tsirelson:0..4``, ``sup*5`` or a comma list such as ``sup,l1,tsirelson:2``."""
    t = text.strip()
    if t.lower().startswith("tsirelson:") and ".." in t:
        lo, _, hi = t.split(":", 1)[1].partition("..")
        try:
            start, stop = int(lo), int(hi)
        except ValueError:
            raise InvalidInput(f"bad iterate range {text!r}") from None
        if start < 0 or stop < start:
            raise InvalidInput(f"bad iterate range {text!r}")
        return NormSequence.tsirelson(start, stop)
    if "*" in t:
        spec, _, count = t.rpartition("*")
        try:
            return NormSequence.constant(parse_spec(spec), int(count))
        except ValueError:
            raise InvalidInput(f"bad repetition count in {text!r}") from None
    return NormSequence.of([parse_spec(p) for p in t.split(",")], label=t)


@dataclass(frozen=True)
class MatrixCell:
    phi: Optional[float]
    distortion: Optional[Union[Fraction, float]]
    error: Optional[str] = None


@dataclass(frozen=True)
class PhiMatrix:
    rows: str
    cols: str
    dim: int
    cells: tuple  # tuple of rows of MatrixCell

    @property
    def shape(self) -> tuple:
        return len(self.cells), len(self.cells[0])

    def values(self) -> list:
        return [[c.phi for c in row] for row in self.cells]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n_rows, n_cols = self.shape
        w.writerow([f"{self.rows} \\ {self.cols}"] + [f"j={j}" for j in range(n_cols)])
        for i, row in enumerate(self.cells):
            w.writerow([f"i={i}"] + [repr(c.phi) if c.error is None else c.error for c in row])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        def cell(c: MatrixCell) -> dict:
            d = c.distortion
            return {
                "phi": c.phi,
                "D": format_rational(d) if isinstance(d, Fraction) else d,
                "error": c.error,
            }

        return {
            "rows": self.rows,
            "cols": self.cols,
            "dim": self.dim,
            "cells": [[cell(c) for c in row] for row in self.cells],
        }


def phi_matrix(rows: NormSequence, cols: NormSequence, dim: int) -> PhiMatrix:
    """``cells[i][j] = phi(rows[i], cols[j])`` on the ``dim`` truncation.

    Cells whose phi is undefined (D < 1) carry the error name instead of
    aborting the whole matrix.
    """
    memo: dict = {}
    grid = []
    for i in range(rows.length):
        line = []
        for j in range(cols.length):
            key = (rows[i], cols[j])
            if key not in memo:
                try:
                    d = distortion(key[0], key[1], dim).value
                except TslabError as exc:
                    memo[key] = MatrixCell(None, None, exc.name)
                else:
                    try:
                        memo[key] = MatrixCell(phi_from_distortion(d).value, d)
                    except TslabError as exc:
                        memo[key] = MatrixCell(None, d, exc.name)
            line.append(memo[key])
        grid.append(tuple(line))
    return PhiMatrix(rows.label, cols.label, dim, tuple(grid))


@dataclass(frozen=True)
class StabilityReport:
    sup_upper: float
    inf_lower: float
    gap: float
    verdict: str
    tolerance: float
    dim: Optional[int]
    lengths: tuple
    exact: bool = False

    def to_json_obj(self) -> dict:
        return {
            "sup_upper": self.sup_upper,
            "inf_lower": self.inf_lower,
            "gap": self.gap,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "dim": self.dim,
            "lengths": list(self.lengths),
        }


def _triangles(grid: Sequence[Sequence]) -> tuple:
    upper = [grid[i][j] for i in range(len(grid)) for j in range(len(grid[i])) if i < j]
    lower = [grid[i][j] for i in range(len(grid)) for j in range(len(grid[i])) if j < i]
    return upper, lower


def gap_report(m: Union[PhiMatrix, Sequence[Sequence[Number]]], tolerance: float = DEFAULT_TOLERANCE) -> StabilityReport:
    """``sup`` over ``i < j`` against ``inf`` over ``j < i``; a gap above tolerance witnesses the order property.

    When every cell carries an exact D, the comparison is done on the
    rationals (phi is strictly decreasing in D) and phi applied afterwards,
    so equal D values give a gap of exactly 0.
    """
    if tolerance < 0:
        raise InvalidInput("tolerance must be nonnegative")
    if isinstance(m, PhiMatrix):
        grid = m.cells
        dim = m.dim
    else:
        grid = [list(r) for r in m]
        dim = None
    if len(grid) < 2 or any(len(r) < 2 for r in grid):
        raise InsufficientData("need at least a 2 x 2 matrix")
    upper, lower = _triangles(grid)
    if not upper or not lower:
        raise InsufficientData("matrix has no cells on one side of the diagonal")
    lengths = (len(grid), len(grid[0]))

    exact = False
    if isinstance(m, PhiMatrix):
        bad = [c for c in upper + lower if c.error is not None]
        if bad:
            raise InsufficientData(f"{len(bad)} cells carry errors ({bad[0].error})")
        if all(isinstance(c.distortion, Fraction) for c in upper + lower):
            exact = True
            d_up = min(c.distortion for c in upper)
            d_low = max(c.distortion for c in lower)
            sup_upper = phi_from_distortion(d_up).value
            inf_lower = phi_from_distortion(d_low).value
            gap = 0.0 if d_up == d_low else abs(sup_upper - inf_lower)
        else:
            sup_upper = max(c.phi for c in upper)
            inf_lower = min(c.phi for c in lower)
            gap = abs(sup_upper - inf_lower)
    else:
        hi, lo = max(upper), min(lower)
        exact = all(isinstance(v, (int, Fraction)) for v in upper + lower)
        gap = float(abs(hi - lo))
        sup_upper, inf_lower = float(hi), float(lo)
    verdict = ORDER_PROPERTY if gap > tolerance else STABLE
    return StabilityReport(sup_upper, inf_lower, gap, verdict, tolerance, dim, lengths, exact)


# -- iterated limits ---------------------------------------------------------------


@dataclass(frozen=True)
class IteratedLimitReport:
    row_limits: tuple  # lim_j a[i][j] for each probed row i
    col_limits: tuple  # lim_i a[i][j] for each probed column j
    rows_then_cols: float  # lim_i lim_j
    cols_then_rows: float  # lim_j lim_i
    disagreement: float
    differ: bool
    window: int
    tolerance: float
    approximation: str = "cofinite-filter limits via Cauchy tails; not true ultralimits"

    def to_json_obj(self) -> dict:
        return {
            "row_limits": list(self.row_limits),
            "col_limits": list(self.col_limits),
            "lim_i_lim_j": self.rows_then_cols,
            "lim_j_lim_i": self.cols_then_rows,
            "disagreement": self.disagreement,
            "differ": self.differ,
            "window": self.window,
            "tolerance": self.tolerance,
            "approximation": self.approximation,
        }


def _tail_limit(seq: Sequence[float], tail: int, tolerance: float, what: str) -> float:
    window = seq[len(seq) - tail:]
    if max(window) - min(window) > tolerance:
        raise NoConvergenceDetected(f"{what}: tail {list(window)} spreads more than {tolerance}")
    return window[-1]


def double_limit_probe(
    source: Union[PhiMatrix, Sequence[Sequence[Number]], Callable[[int, int], Number]],
    tolerance: float = DEFAULT_TOLERANCE,
    window: int = 8,
) -> IteratedLimitReport:
    """Approximate ``lim_i lim_j a[i][j]`` and ``lim_j lim_i a[i][j]`` on a ``window x window`` block.

    Rows ``i < window // 2`` are probed along ``j`` and their limit read off
    the trailing ``window - window // 2`` entries, which all lie beyond the
    probed rows; columns likewise.  The outer limits use the trailing half of
    the probed row/column limits.  ``source`` may be a callable ``(i, j) ->
    value`` that is extended on demand up to ``window``.
    """
    if isinstance(source, PhiMatrix):
        if any(c.error for row in source.cells for c in row):
            raise InsufficientData("matrix has error cells")
        grid = source.values()
        get = lambda i, j: grid[i][j]  # noqa: E731
        size = min(source.shape)
    elif callable(source):
        get = source
        size = window
    else:
        grid = [list(r) for r in source]
        get = lambda i, j: grid[i][j]  # noqa: E731
        size = min(len(grid), min(len(r) for r in grid))
    if window > size:
        raise InvalidInput(f"window {window} exceeds available size {size}")
    if window < 2:
        raise InvalidInput("window must be >= 2")
    probed = window // 2
    tail = window - probed
    row_limits = tuple(
        float(_tail_limit([float(get(i, j)) for j in range(window)], tail, tolerance, f"row {i}"))
        for i in range(probed)
    )
    col_limits = tuple(
        float(_tail_limit([float(get(i, j)) for i in range(window)], tail, tolerance, f"column {j}"))
        for j in range(probed)
    )
    outer = max(1, (probed + 1) // 2)
    r_lim = _tail_limit(row_limits, outer, tolerance, "row limits")
    c_lim = _tail_limit(col_limits, outer, tolerance, "column limits")
    disagreement = abs(r_lim - c_lim)
    return IteratedLimitReport(row_limits, col_limits, r_lim, c_lim, disagreement, disagreement > tolerance, window, tolerance)


def tsirelson_phi_source(dim: int) -> Callable[[int, int], float]:
    """Generator-backed ``phi(|.|_i, |.|_j)`` on the ``dim`` truncation, for probes beyond a fixed length."""
    memo: dict = {}

    def get(i: int, j: int) -> float:
        # on this truncation the iterates stop changing after level dim - 1
        key = (min(i, dim), min(j, dim))
        if key not in memo:
            d = distortion(NormSpec.iterate(key[0]), NormSpec.iterate(key[1]), dim).value
            memo[key] = phi_from_distortion(d).value
        return memo[key]

    return get


# -- witnesses for large distortion -------------------------------------------------


@dataclass(frozen=True)
class WitnessResult:
    vector: SparseVector
    ratio: Fraction
    method: str  # "structured" or "lp"

    def to_json_obj(self) -> dict:
        return {"found": True, "ratio": format_rational(self.ratio), "method": self.method,
                "vector": self.vector.to_json_obj()}


def _structured_candidates(max_dim: int):
    # flat blocks 1_[a, b], shortest first
    for length in range(1, max_dim + 1):
        for a in range(1, max_dim - length + 2):
            yield SparseVector.ones(range(a, a + length))
    # a spike followed by a flat block at half height: e_a + 1/2 * 1_(a, b]
    for length in range(2, max_dim + 1):
        for a in range(1, max_dim - length + 2):
            coords = {a: Fraction(1)}
            coords.update({t: Fraction(1, 2) for t in range(a + 1, a + length)})
            yield SparseVector.from_mapping(coords)
    # successive flat blocks each normalized to l1 mass 1 (repeated averaging)
    for start in range(1, max_dim + 1):
        for size in range(2, max_dim + 1):
            for count in range(2, max_dim + 1):
                if start + size * count - 1 > max_dim:
                    break
                coords = {}
                for c in range(count):
                    for t in range(size):
                        coords[start + c * size + t] = Fraction(1, size)
                yield SparseVector.from_mapping(coords)


def witness_search(i: int, j: int, target, max_dim: int) -> Optional[WitnessResult]:
    """Look for ``x`` with ``|x|_i / |x|_j >= target``; None means not found, not impossible.

    Structured candidates are scanned first, then exact distortion LPs for
    each dim up to ``max_dim`` within the polyhedral bound.
    """
    from tslab.config import dim_bound
    from tslab.vectors import parse_rational

    target = parse_rational(target)
    if not i > j >= 0:
        raise InvalidInput("witness_search needs i > j >= 0")
    if target < 1:
        raise InvalidInput("target must be >= 1")
    if max_dim < 1:
        raise InvalidInput("max_dim must be positive")

    def ratio(x: SparseVector) -> Fraction:
        return tsirelson_iterate(x, i) / tsirelson_iterate(x, j)

    for x in _structured_candidates(max_dim):
        r = ratio(x)
        if r >= target:
            return WitnessResult(x, r, "structured")
    for d in range(1, min(max_dim, dim_bound()) + 1):
        res = distortion(NormSpec.iterate(i), NormSpec.iterate(j), d)
        if res.value >= target:
            r = ratio(res.witness)
            if r >= target:
                return WitnessResult(res.witness, r, "lp")
    return None
