import math
from concurrent.futures import ThreadPoolExecutor

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cfract.analytic import (E1_SWITCH, ERFC_SWITCH, HRMethod, e1, erfc, hr_fast_series, hr_sine_sum,
                             jacobi, kronecker, regulator_ratio, _character_vec)
from cfract.arith import is_probable_prime, is_squarefree
from cfract.errors import DomainError

from oracles import class_number_regulator

import numpy as np

REL = mpmath.mpf(2) ** -64  # 2^-(precision/2) at 128 bits


def mp_ref(fn, x, dps=80):
    with mpmath.workdps(dps):
        return fn(mpmath.mpf(x))


# -- characters ----------------------------------------------------------------

def test_jacobi_examples():
    assert jacobi(1, 15) == 1
    assert jacobi(2, 15) == 1
    assert jacobi(6, 15) == 0 and jacobi(5, 15) == 0


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(3, 10 ** 4).filter(is_probable_prime))
def test_jacobi_is_euler_criterion_for_primes(a, p):
    e = pow(a % p, (p - 1) // 2, p)
    assert jacobi(a, p) == (-1 if e == p - 1 else e)


@given(st.integers(-1000, 1000), st.integers(1, 999).filter(lambda m: m % 2),
       st.integers(1, 999).filter(lambda m: m % 2))
def test_jacobi_multiplicative_in_modulus(a, m, k):
    assert jacobi(a, m * k) == jacobi(a, m) * jacobi(a, k)


def test_kronecker_at_two():
    # (D/2) depends on D mod 8 for odd D
    assert [kronecker(d, 2) for d in (1, 3, 5, 7, 4)] == [1, -1, -1, 1, 0]


@pytest.mark.parametrize("D", [40, 21, 8, 5, 4 * 21945, 999333])
def test_vector_character_matches_scalar(D):
    k = np.arange(1, min(D, 20000), dtype=np.int64)
    vec = _character_vec(D, k)
    assert [int(v) for v in vec] == [kronecker(D, int(x)) for x in k]


# -- special functions ---------------------------------------------------------------

def test_erfc_basics():
    assert erfc(0) == 1
    for x in (0.3, 1.7, 5.5):
        assert abs(erfc(x) + erfc(-x) - 2) < mpmath.mpf(2) ** -120


@given(st.floats(0.001, 25))
@settings(max_examples=60, deadline=None)
def test_erfc_against_mpmath(x):
    ref = mp_ref(mpmath.erfc, x)
    assert abs(erfc(x) - ref) <= REL * ref


@given(st.floats(0.0001, 200))
@settings(max_examples=60, deadline=None)
def test_e1_against_mpmath(x):
    ref = mp_ref(mpmath.e1, x)
    assert abs(e1(x) - ref) <= REL * ref


def test_e1_quadrature():
    with mpmath.workdps(40):
        ref = mpmath.quad(lambda t: mpmath.exp(-t) / t, [1, mpmath.inf])
    assert abs(e1(1) - ref) < mpmath.mpf(10) ** -30
    assert str(e1(1))[:11] == "0.219383934"


def test_e1_domain():
    with pytest.raises(DomainError):
        e1(0)
    with pytest.raises(DomainError):
        e1(-1)


def test_branch_continuity():
    for fn, x in ((erfc, ERFC_SWITCH), (e1, E1_SWITCH)):
        eps = mpmath.mpf(2) ** -100
        below, above = fn(mpmath.mpf(x) - eps), fn(mpmath.mpf(x) + eps)
        assert abs(below - above) / above < mpmath.mpf(2) ** -90


# -- h*R ---------------------------------------------------------------------------------

def test_hr_closed_forms():
    assert abs(float(hr_sine_sum(10).value) - 2 * math.log(3 + math.sqrt(10))) < 1e-14
    assert abs(float(hr_sine_sum(2).value) - math.log(1 + math.sqrt(2))) < 1e-15


@pytest.mark.parametrize("n", [n for n in range(2, 150) if is_squarefree(n)])
def test_hr_against_form_class_oracle(n):
    h, R = class_number_regulator(n)
    v = hr_sine_sum(n, 128).value
    assert abs(v - h * R) < mpmath.mpf(10) ** -30


def test_sine_sum_paths_agree():
    for n in (10, 21945, 99991):
        a, b = hr_sine_sum(n, 128), hr_sine_sum(n, 53)
        assert abs(a.value - b.value) <= b.est_error
        assert b.est_error < 1e-9 * b.value


def test_sine_sum_partitioned_is_deterministic():
    serial = hr_sine_sum(999331, 53)
    with ThreadPoolExecutor(4) as ex:
        parallel = hr_sine_sum(999331, 53, executor=ex)
    assert serial.value == parallel.value


def test_fast_series_cross_check_10():
    a = hr_sine_sum(10)
    b = hr_fast_series(10, terms=200)
    assert abs(a.value - b.value) / a.value < 1e-6
    assert b.method is HRMethod.FAST_SERIES


def test_fast_series_rejects_zero_terms():
    with pytest.raises(ValueError):
        hr_fast_series(10, terms=0)


def test_fast_series_error_bound_is_honest():
    # truncated on purpose: the error estimate must cover the true gap
    ref = hr_sine_sum(21945, 128).value
    for terms in (50, 100, 200, 400):
        b = hr_fast_series(21945, terms=terms, precision=64)
        assert abs(b.value - ref) <= b.est_error


def test_ratio_test_21945():
    v = hr_sine_sum(21945).value
    assert regulator_ratio(v, 22.516552835241004) == (8, 1)


def test_ratio_test_detects_cube():
    # Z[sqrt 13] unit 18 + 5 sqrt 13 = eps0^3, h = 1
    v = hr_sine_sum(13).value
    assert regulator_ratio(v, math.log(18 + 5 * math.sqrt(13))) == (1, 3)


def test_non_squarefree_rejected():
    with pytest.raises(ValueError):
        hr_sine_sum(12)
