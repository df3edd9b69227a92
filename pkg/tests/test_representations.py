import pytest
from hypothesis import given, settings, strategies as st

from cfract.arith import is_probable_prime, is_square, is_squarefree
from cfract.cf_expansion import expand_sqrt
from cfract.delta_omega import form_sequence, pell_unit
from cfract.errors import EvenPeriod, OddPeriod
from cfract.representations import (SplitSource, check_gamma_product, midpoint_factor,
                                    sum_of_two_squares, unit_split)

from oracles import two_squares_brute

primes_1mod4 = st.integers(5, 10 ** 7).filter(lambda p: p % 4 == 1 and is_probable_prime(p))


def test_thirteen():
    ts = sum_of_two_squares(13)
    assert (ts.x, ts.y) == (3, 2)


def test_two():
    ts = sum_of_two_squares(2)
    assert (ts.x, ts.y) == (1, 1)


def test_even_period_rejected():
    with pytest.raises(EvenPeriod):
        sum_of_two_squares(21945)


@given(primes_1mod4)
@settings(max_examples=80, deadline=None)
def test_two_squares_for_primes(p):
    ts = sum_of_two_squares(p)
    assert {frozenset((ts.x, ts.y))} == two_squares_brute(p)


def test_golden_midpoint():
    res = midpoint_factor(21945)
    assert res.factor == 21 and res.source is SplitSource.MIDPOINT
    assert res.detail == {"position": 4, "delta": -21}


def test_midpoint_trivial_for_prime():
    assert midpoint_factor(7).source is SplitSource.TRIVIAL


def test_midpoint_odd_period_rejected():
    with pytest.raises(OddPeriod):
        midpoint_factor(13)


def test_unit_split_golden():
    unit = pell_unit(expand_sqrt(21945))
    import math
    assert math.gcd(unit.A - 1, 21945) == 21 and math.gcd(unit.A + 1, 21945) == 1045
    res = unit_split(21945, unit)
    assert res.factor == 21 and res.source is SplitSource.UNIT_MINUS


def test_unit_split_needs_norm_plus_one():
    with pytest.raises(OddPeriod):
        unit_split(13, pell_unit(expand_sqrt(13)))


def test_midpoint_can_be_trivial_for_composites():
    # composites whose midpoint carries only 2 (cannot split by this route)
    for n in (51, 119, 123, 187):
        exp = expand_sqrt(n)
        assert exp.period % 2 == 0
        assert midpoint_factor(n, exp).source is SplitSource.TRIVIAL
        assert unit_split(n, pell_unit(exp)).source is SplitSource.TRIVIAL


@given(st.integers(2, 20000).filter(lambda n: is_squarefree(n) and not is_square(n)))
@settings(max_examples=150, deadline=None)
def test_midpoint_divides_4n(n):
    exp = expand_sqrt(n)
    if exp.period % 2:
        return
    t0 = (exp.period - 2) // 2
    assert (4 * n) % exp.r(t0) == 0


@given(st.integers(2, 20000).filter(lambda n: not is_square(n)))
@settings(max_examples=100, deadline=None)
def test_gamma_product(n):
    exp = expand_sqrt(n)
    if exp.period % 2 or exp.period > 200:
        return
    assert check_gamma_product(form_sequence(exp), pell_unit(exp))
