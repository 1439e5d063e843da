"""Distortion ``D(a, b) = sup |x|_a / |x|_b`` on dimension truncations, and ``phi = 1 - log D / (1 + log D)``.

The ratio is 0-homogeneous, so on ``span{e_1..e_dim}`` the sup equals
``max_f max{<f, x> : |x|_b <= 1}`` over the numerator's norming functionals
``f``, one exact LP per functional.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from tslab.errors import DomainError, InvalidInput
from tslab.norms import LP, NormSpec, norm
from tslab.polyhedral import maximize_linear, norming_set
from tslab.vectors import SparseVector, format_rational

LITERAL = "literal"
SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class DistortionResult:
    value: Union[Fraction, float]
    dim: int
    witness: SparseVector
    numerator_spec: NormSpec
    denominator_spec: NormSpec
    exact: bool = True
    mode: str = LITERAL

    def to_json_obj(self) -> dict:
        return {
            "D": format_rational(self.value) if self.exact else self.value,
            "dim": self.dim,
            "num": str(self.numerator_spec),
            "den": str(self.denominator_spec),
            "exact": self.exact,
            "mode": self.mode,
            "witness": self.witness.to_json_obj(),
        }


@dataclass(frozen=True)
class PhiValue:
    value: float
    d_input: Union[Fraction, float]
    log_base: str = "e"

    def to_json_obj(self) -> dict:
        d = format_rational(self.d_input) if isinstance(self.d_input, Fraction) else self.d_input
        return {"value": self.value, "D": d}


def _ratio(x: SparseVector, num: NormSpec, den: NormSpec):
    a, b = norm(x, num), norm(x, den)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    return float(a) / float(b)


def _exact_distortion(num: NormSpec, den: NormSpec, dim: int) -> tuple:
    top = norming_set(num, dim)
    ball = norming_set(den, dim)
    best, witness = None, None
    for f in top.functionals if ball.unconditional else top.expanded():
        val, w = maximize_linear(f, ball)
        if best is None or val > best:
            best, witness = val, w
    return best, witness


def distortion(num: NormSpec, den: NormSpec, dim: int, mode: str = LITERAL) -> DistortionResult:
    """Exact ``D(num, den)`` over vectors supported in ``{1..dim}``, with an attaining witness.

    ``mode="symmetric"`` returns ``max(D(num, den), D(den, num))``.  Lp specs
    fall back to :func:`search_distortion`, a lower bound with no exactness claim.
    """
    if dim < 1:
        raise InvalidInput("dim must be positive")
    if mode == SYMMETRIC:
        fwd = distortion(num, den, dim)
        bwd = distortion(den, num, dim)
        pick = fwd if fwd.value >= bwd.value else bwd
        return DistortionResult(pick.value, dim, pick.witness, num, den, fwd.exact and bwd.exact, SYMMETRIC)
    if mode != LITERAL:
        raise InvalidInput(f"unknown distortion mode {mode!r}")
    if num.kind == LP or den.kind == LP:
        return search_distortion(num, den, dim)
    value, witness = _exact_distortion(num, den, dim)
    if witness.is_zero():
        witness = SparseVector.basis(1)
    # the LP vertex must reproduce the value under direct evaluation
    if _ratio(witness, num, den) != value:
        raise AssertionError(f"witness {witness} does not attain D = {value}")
    return DistortionResult(value, dim, witness, num, den)


def _candidates(dim: int) -> list:
    out = [SparseVector.basis(i) for i in range(1, dim + 1)]
    for a in range(1, dim + 1):
        for b in range(a + 1, dim + 1):
            out.append(SparseVector.ones(range(a, b + 1)))
    return out


def search_distortion(
    num: NormSpec, den: NormSpec, dim: int, seed: int = 0, samples: int = 200, rounds: int = 200
) -> DistortionResult:
    """Heuristic lower bound for ``D``: structured candidates, random rationals, hill climbing.

    Always ``<=`` the true distortion.  Exact when both specs are exact, but
    never claimed optimal (``exact=False``).
    """
    rng = random.Random(seed)
    pool = _candidates(dim)
    for _ in range(samples):
        coords = {i: Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for i in range(1, dim + 1)}
        v = SparseVector.from_mapping(coords)
        if not v.is_zero():
            pool.append(v)
    best_x = max(pool, key=lambda v: _ratio(v, num, den))
    best = _ratio(best_x, num, den)
    steps = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
    for _ in range(rounds):
        i = rng.randint(1, dim)
        delta = rng.choice(steps) * rng.choice((1, -1)) * max(abs(v) for v in best_x.values())
        cand = best_x + SparseVector.basis(i, delta) if delta else best_x
        if cand.is_zero():
            continue
        r = _ratio(cand, num, den)
        if r > best:
            best, best_x = r, cand
    return DistortionResult(best, dim, best_x, num, den, exact=False)


def phi_from_distortion(d: Union[Fraction, float]) -> PhiValue:
    """``1 - log D / (1 + log D)`` with natural log; defined here for ``D >= 1``."""
    if d < 1:
        raise DomainError(f"phi needs D >= 1, got D = {d}")
    if isinstance(d, Fraction):
        log_d = math.log(d.numerator) - math.log(d.denominator)
    else:
        log_d = math.log(d)
    value = 1.0 - log_d / (1.0 + log_d)
    return PhiValue(value, d)


def phi(num: NormSpec, den: NormSpec, dim: int, mode: str = LITERAL) -> PhiValue:
    return phi_from_distortion(distortion(num, den, dim, mode).value)


@dataclass(frozen=True)
class GrowthTable:
    numerator_spec: NormSpec
    denominator_spec: NormSpec
    rows: tuple  # (dim, DistortionResult)
    supremum: Union[Fraction, float, None] = None
    still_growing: bool = False  # D rose at the last step; the sup over c_00 may exceed the table

    def values(self) -> list:
        return [r.value for _, r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dim", "D_num", "D_den", "D_value"])
        for dim, r in self.rows:
            val = format_rational(r.value) if r.exact else repr(r.value)
            w.writerow([dim, str(self.numerator_spec), str(self.denominator_spec), val])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        fmt = lambda v: format_rational(v) if isinstance(v, Fraction) else v  # noqa: E731
        return {
            "num": str(self.numerator_spec),
            "den": str(self.denominator_spec),
            "rows": [{"dim": d, "D": fmt(r.value), "witness": r.witness.to_json_obj()} for d, r in self.rows],
            "supremum": fmt(self.supremum),
            "still_growing": self.still_growing,
        }


def distortion_growth(num: NormSpec, den: NormSpec, dims: Sequence[int], mode: str = LITERAL) -> GrowthTable:
    dims = list(dims)
    if not dims:
        raise InvalidInput("need at least one dim")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise InvalidInput("dims must be strictly ascending")
    rows = [(d, distortion(num, den, d, mode)) for d in dims]
    vals = [r.value for _, r in rows]
    if all(r.exact for _, r in rows) and any(b < a for a, b in zip(vals, vals[1:])):
        raise AssertionError(f"distortion decreased along dims: {vals}")
    growing = len(vals) >= 2 and vals[-1] > vals[-2]
    return GrowthTable(num, den, tuple(rows), max(vals), growing)
