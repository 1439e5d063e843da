import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tslab.distortion import (
    SYMMETRIC,
    distortion,
    distortion_growth,
    phi,
    phi_from_distortion,
    search_distortion,
)
from tslab.errors import DomainError, InvalidInput
from tslab.norms import NormSpec, norm
from tslab.polyhedral import norming_set
from tslab.vectors import SparseVector

from oracles import vertices

T = NormSpec.iterate
SUP, L1 = NormSpec.sup(), NormSpec.l1()


def vertex_distortion(num, den, dim):
    """max of |v|_num over vertices of the den unit ball in the nonnegative orthant."""
    ball = norming_set(den, dim)
    cons = [([f[i] for i in range(1, dim + 1)], 1) for f in ball.functionals]
    cons += [([-1 if k == j else 0 for k in range(dim)], 0) for j in range(dim)]
    best = Fraction(0)
    for v in vertices(cons, dim):
        x = SparseVector.from_dense(v)
        if not x.is_zero():
            best = max(best, norm(x, num) / norm(x, den))
    return best


@pytest.mark.parametrize("spec", [SUP, L1, T(0), T(2), NormSpec.limit()], ids=str)
@pytest.mark.parametrize("dim", [1, 4, 6])
def test_identical_norms_have_distortion_one(spec, dim):
    res = distortion(spec, spec, dim)
    assert res.value == 1
    assert norm(res.witness, spec) / norm(res.witness, spec) == 1
    assert phi(spec, spec, dim).value == 1.0


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_l1_over_sup(d):
    res = distortion(L1, SUP, d)
    assert res.value == d
    assert res.witness == SparseVector.ones(range(1, d + 1))
    # brute force over all {-1, 0, 1} patterns
    brute = max(
        norm(x, L1) / norm(x, SUP)
        for pattern in itertools.product((-1, 0, 1), repeat=d)
        if any(pattern)
        for x in [SparseVector.from_dense(pattern)]
    )
    assert brute == d


@pytest.mark.parametrize("d", [1, 3, 5, 6])
def test_lower_iterate_never_exceeds_higher(d):
    for i in range(4):
        for j in range(i + 1, 5):
            res = distortion(T(i), T(j), d)
            assert res.value == 1
            assert phi(T(i), T(j), d).value == 1.0


@pytest.mark.parametrize("num,den,dim", [
    (T(1), T(0), 3), (T(1), T(0), 5), (T(2), T(1), 5), (T(2), T(0), 5),
    (L1, T(1), 4), (T(1), L1, 4), (NormSpec.limit(), T(0), 5), (T(3), T(1), 5),
])
def test_lp_distortion_matches_vertex_enumeration(num, den, dim):
    assert distortion(num, den, dim).value == vertex_distortion(num, den, dim)


def test_growth_tables():
    assert distortion_growth(L1, SUP, [1, 2, 3]).values() == [1, 2, 3]
    assert distortion_growth(T(2), T(2), [2, 4, 6]).values() == [1, 1, 1]
    table = distortion_growth(T(1), T(0), range(3, 9))
    vals = dict(zip(range(3, 9), table.values()))
    assert all(vals[d] >= Fraction(3, 2) for d in range(5, 9))
    assert vals == {3: 1, 4: 1, 5: Fraction(3, 2), 6: Fraction(3, 2), 7: 2, 8: 2}
    assert distortion(T(1), T(0), 5).witness == SparseVector.ones([3, 4, 5])
    with pytest.raises(InvalidInput):
        distortion_growth(L1, SUP, [3, 2])


def test_growth_csv():
    text = distortion_growth(L1, SUP, [1, 2]).to_csv()
    assert text.splitlines() == ["dim,D_num,D_den,D_value", "1,l1,sup,1", "2,l1,sup,2"]


def test_growth_flags():
    t = distortion_growth(L1, SUP, [1, 2, 3])
    assert t.supremum == 3 and t.still_growing
    t = distortion_growth(T(1), T(0), [5, 6])
    assert t.supremum == Fraction(3, 2) and not t.still_growing


@pytest.mark.parametrize("num,den", [(T(1), T(0)), (T(2), T(1)), (L1, T(2)), (T(3), SUP)], ids=str)
def test_witness_recheck_and_dim_monotone(num, den):
    prev = None
    for d in range(1, 8):
        res = distortion(num, den, d)
        assert not res.witness.is_zero()
        assert norm(res.witness, num) / norm(res.witness, den) == res.value
        assert res.value >= norm(SparseVector.basis(1), num) / norm(SparseVector.basis(1), den)
        if prev is not None:
            assert prev <= res.value
        prev = res.value


@pytest.mark.parametrize("num,den", [(T(1), T(0)), (T(2), T(1)), (L1, T(1)), (T(2), SUP)], ids=str)
def test_heuristic_is_a_lower_bound(num, den):
    for d in (3, 5, 6):
        exact = distortion(num, den, d)
        guess = search_distortion(num, den, d, seed=d, samples=40, rounds=60)
        assert not guess.exact
        assert guess.value <= exact.value
        assert norm(guess.witness, num) / norm(guess.witness, den) == guess.value


def test_lp_specs_fall_back_to_search():
    res = distortion(NormSpec.lp(2), SUP, 3)
    assert not res.exact
    assert math.isclose(res.value, math.sqrt(3), rel_tol=1e-12)
    res = distortion(L1, NormSpec.lp(2), 4)
    assert res.value <= 2 + 1e-12 and math.isclose(res.value, 2.0, rel_tol=1e-12)


def test_symmetric_mode():
    assert distortion(SUP, L1, 3).value == 1
    assert distortion(SUP, L1, 3, mode=SYMMETRIC).value == 3
    assert distortion(L1, SUP, 3, mode=SYMMETRIC).value == 3
    with pytest.raises(InvalidInput):
        distortion(L1, SUP, 3, mode="other")


def test_phi_examples():
    assert phi_from_distortion(Fraction(1)).value == 1.0
    assert abs(phi_from_distortion(math.e).value - 0.5) < 1e-12
    with pytest.raises(DomainError):
        phi_from_distortion(Fraction(1, 2))
    # phi(3/2) = 1 / (1 + log 3/2)
    assert abs(phi_from_distortion(Fraction(3, 2)).value - 0.7115082361212486) < 1e-12


def test_phi_huge_distortion_is_finite():
    assert 0 < phi_from_distortion(Fraction(10 ** 400)).value < 0.002


@given(st.fractions(min_value=1, max_value=10 ** 6), st.fractions(min_value=1, max_value=10 ** 6))
def test_phi_range_and_monotonicity(a, b):
    pa, pb = phi_from_distortion(a).value, phi_from_distortion(b).value
    assert 0.0 <= pa <= 1.0
    assert (pa == 1.0) == (a == 1)
    if a < b and math.log(b) - math.log(a) > 1e-12:
        assert pa > pb
