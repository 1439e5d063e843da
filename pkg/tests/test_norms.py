import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tslab.errors import InvalidInput, OracleBoundExceeded
from tslab.norms import (
    NormSpec,
    base_norm,
    brute_force_iterate,
    norm,
    parse_spec,
    pointwise_limit,
    tsirelson_iterate,
    tsirelson_limit,
)
from tslab.vectors import SparseVector

from conftest import vectors

half = Fraction(1, 2)
ones = SparseVector.ones


def e(i, c=1):
    return SparseVector.basis(i, c)


def test_base_norm_examples():
    assert base_norm(ones([3, 4, 5]), NormSpec.sup()) == 1
    assert base_norm(e(1, 2) - e(2, half), NormSpec.l1()) == Fraction(5, 2)
    assert abs(base_norm(e(1) + e(2), NormSpec.lp(2)) - math.sqrt(2)) < 1e-12


def test_lp_scaling_guard():
    # squaring 1e200 overflows a float unless entries are rescaled first
    big = SparseVector.from_mapping({1: 10 ** 200, 2: 10 ** 200})
    assert math.isclose(base_norm(big, NormSpec.lp(2)), math.sqrt(2) * 1e200, rel_tol=1e-12)


@pytest.mark.parametrize("n", range(7))
def test_basis_vector_has_norm_one(n):
    assert tsirelson_iterate(e(1), n) == 1
    assert tsirelson_iterate(e(7, -1), n) == 1


def test_iterate_examples():
    x = ones([3, 4, 5])
    assert tsirelson_iterate(x, 1) == Fraction(3, 2)
    assert brute_force_iterate(x, 1) == Fraction(3, 2)
    assert brute_force_iterate(e(2) + e(3), 1) == 1
    y = e(1, 3) - e(4, half)
    assert tsirelson_iterate(y, 0) == brute_force_iterate(y, 0) == base_norm(y, NormSpec.sup())


def test_limit_examples():
    assert tsirelson_limit(e(1) + e(2)) == 1
    assert tsirelson_limit(ones([3, 4, 5])) == Fraction(3, 2)
    assert tsirelson_limit(SparseVector()) == 0


def test_hand_computed_values():
    # four singletons starting at 4: k = 4 <= min E_1 gives 1/2 * 4
    assert tsirelson_iterate(ones(range(4, 8)), 1) == 2
    # on 1..6 at most 3 parts fit after index 3, and splitting deeper only loses
    assert tsirelson_limit(ones(range(1, 7))) == Fraction(3, 2)
    # x = e_3 + 1/2 (e_4 + ... + e_8): |x|_1 = 1 (sup), |x|_2 = 5/4 via {3} then ({4,5},{6,7,8}) one level down
    x = e(3) + SparseVector.from_mapping({i: half for i in range(4, 9)})
    assert tsirelson_iterate(x, 1) == 1
    assert tsirelson_iterate(x, 2) == Fraction(5, 4)


def test_negative_level_rejected():
    with pytest.raises(InvalidInput):
        tsirelson_iterate(e(1), -1)


def test_oracle_bound():
    with pytest.raises(OracleBoundExceeded):
        brute_force_iterate(ones(range(1, 10)), 1)
    assert brute_force_iterate(ones(range(1, 10)), 1, bound=9) == tsirelson_iterate(ones(range(1, 10)), 1)


def test_pointwise_limit_examples():
    x = ones([3, 4, 5])
    rep = pointwise_limit(x, [NormSpec.iterate(n) for n in range(7)])
    assert rep.eventually_constant and rep.limit == Fraction(3, 2)
    assert rep.stable_from <= len(x) == 3
    rep = pointwise_limit(x, [NormSpec.sup()] * 3)
    assert rep.eventually_constant and rep.stable_from == 0
    with pytest.raises(InvalidInput):
        pointwise_limit(x, [])


@settings(max_examples=80, deadline=None)
@given(vectors(max_index=8, max_size=6))
def test_pointwise_limit_reaches_tsirelson_norm(x):
    N = len(x)
    rep = pointwise_limit(x, [NormSpec.iterate(n) for n in range(N + 2)])
    assert rep.eventually_constant
    assert rep.limit == tsirelson_limit(x)


def test_parse_spec_syntax():
    assert parse_spec("sup") == NormSpec.sup()
    assert parse_spec("l1") == NormSpec.l1()
    assert parse_spec("lp:3/2") == NormSpec.lp(Fraction(3, 2))
    assert parse_spec("tsirelson:4") == NormSpec.iterate(4)
    assert parse_spec("tsirelson:T") == NormSpec.limit()
    for text in ("sup", "l1", "lp:3/2", "tsirelson:4", "tsirelson:T"):
        assert str(parse_spec(text)) == text
    for bad in ("lp:1", "tsirelson:-1", "tsirelson:x", "banach"):
        with pytest.raises(InvalidInput):
            parse_spec(bad)


# -- invariants ------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(vectors(max_index=9, max_size=7), st.integers(0, 5))
def test_monotone_sandwich(x, n):
    a, b = tsirelson_iterate(x, n), tsirelson_iterate(x, n + 1)
    assert a <= b <= base_norm(x, NormSpec.l1())


@settings(max_examples=150, deadline=None)
@given(vectors(max_index=9, max_size=7))
def test_stabilization(x):
    assert tsirelson_iterate(x, len(x)) == tsirelson_limit(x)
    if len(x) >= 1:
        # the recursion depth bound is actually |supp| - 1
        assert tsirelson_iterate(x, len(x) - 1) == tsirelson_limit(x)


@settings(max_examples=120, deadline=None)
@given(vectors(max_index=10, max_size=5), st.integers(0, 4))
def test_dp_matches_oracle_on_gapped_supports(x, n):
    assert tsirelson_iterate(x, n) == brute_force_iterate(x, n)


@settings(max_examples=100, deadline=None)
@given(vectors(max_index=9, max_size=6), st.data())
def test_unconditional_and_support_monotone(x, data):
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=len(x), max_size=len(x)))
    drop = data.draw(st.sets(st.integers(1, 9)))
    flipped = x.with_signs(signs)
    zeroed = SparseVector(tuple((i, v) for i, v in x.items if i not in drop))
    for n in (0, 1, 2, 3):
        assert tsirelson_iterate(flipped, n) == tsirelson_iterate(x, n)
        assert tsirelson_iterate(zeroed, n) <= tsirelson_iterate(x, n)
    assert tsirelson_limit(flipped) == tsirelson_limit(x)
    assert tsirelson_limit(zeroed) <= tsirelson_limit(x)


def test_dispatch_covers_every_variant():
    x = e(2, 3) - e(5)
    assert norm(x, NormSpec.sup()) == 3
    assert norm(x, NormSpec.l1()) == 4
    assert norm(x, NormSpec.iterate(2)) == tsirelson_iterate(x, 2)
    assert norm(x, NormSpec.limit()) == tsirelson_limit(x)
    assert isinstance(norm(x, NormSpec.lp(3)), float)


def test_per_call_independence():
    """Results do not depend on what was evaluated before (no shared caches)."""
    rng = random.Random(7)
    xs = [SparseVector.from_mapping({i: rng.randint(-3, 3) for i in range(1, 7)}) for _ in range(20)]
    first = [tsirelson_limit(x) for x in xs]
    assert [tsirelson_limit(x) for x in reversed(xs)] == list(reversed(first))
