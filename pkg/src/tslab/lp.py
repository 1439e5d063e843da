"""Exact rational simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The origin is feasible because ``b >= 0``, so no phase one is needed.  The
dictionary is kept as an m x n tableau of Fractions; entering variables are
chosen by largest reduced cost, falling back to Bland's rule after a run of
degenerate pivots so that cycling cannot occur.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from tslab.errors import InvalidInput, Unbounded

_DEGENERATE_LIMIT = 50


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> tuple:
    """Return ``(value, x)`` with ``x`` an optimal vertex, as Fractions."""
    m, n = len(A), len(c)
    if len(b) != m or any(len(row) != n for row in A):
        raise InvalidInput("inconsistent LP dimensions")
    if any(Fraction(v) < 0 for v in b):
        raise InvalidInput("right-hand side must be nonnegative")

    T = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    cost = [Fraction(v) for v in c]
    value = Fraction(0)
    # variable ids: 0..n-1 original, n..n+m-1 slacks
    nonbasic = list(range(n))
    basic = list(range(n, n + m))
    degenerate = 0

    while True:
        if degenerate >= _DEGENERATE_LIMIT:
            candidates = [j for j in range(n) if cost[j] > 0]
            col = min(candidates, key=lambda j: nonbasic[j]) if candidates else -1
        else:
            col, best = -1, Fraction(0)
            for j in range(n):
                if cost[j] > best:
                    col, best = j, cost[j]
        if col < 0:
            break

        row, ratio = -1, None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                r = rhs[i] / a
                if ratio is None or r < ratio or (r == ratio and basic[i] < basic[row]):
                    row, ratio = i, r
        if row < 0:
            raise Unbounded("objective is unbounded on the feasible region")
        degenerate = degenerate + 1 if ratio == 0 else 0

        piv = T[row][col]
        prow = T[row]
        inv = 1 / piv
        for j in range(n):
            prow[j] = inv if j == col else prow[j] * inv
        rhs[row] *= inv
        for i in range(m):
            if i == row:
                continue
            f = T[i][col]
            if f == 0:
                continue
            Ti = T[i]
            for j in range(n):
                Ti[j] = -f * inv if j == col else Ti[j] - f * prow[j]
            rhs[i] -= f * rhs[row]
        f = cost[col]
        for j in range(n):
            cost[j] = -f * inv if j == col else cost[j] - f * prow[j]
        value += f * rhs[row]
        basic[row], nonbasic[col] = nonbasic[col], basic[row]

    x = [Fraction(0)] * n
    for i, var in enumerate(basic):
        if var < n:
            x[var] = rhs[i]
    return value, x
