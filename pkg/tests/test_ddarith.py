from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wright2k import ddarith as dd

finite = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False, allow_infinity=False)
# two_prod is exact only while the product and its error term stay normal
moderate = st.one_of(st.just(0.0),
                     st.floats(min_value=1e-100, max_value=1e100),
                     st.floats(min_value=-1e100, max_value=-1e-100))


def exact(x: dd.DD) -> Fraction:
    return Fraction(float(x.hi)) + Fraction(float(x.lo))


@given(finite, finite)
def test_two_sum_is_error_free(a, b):
    s, e = dd.two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@given(moderate, moderate)
def test_two_prod_is_error_free(a, b):
    p, e = dd.two_prod(a, b)
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_from_fraction_holds_a_third_to_dd_accuracy():
    third = dd.DD.from_fraction(Fraction(1, 3))
    assert abs(exact(third) - Fraction(1, 3)) < Fraction(1, 10 ** 32)


@settings(max_examples=60)
@given(st.integers(-10 ** 9, 10 ** 9).map(lambda k: k / 1000.0),
       st.integers(-10 ** 9, 10 ** 9).map(lambda k: k / 1000.0))
def test_arithmetic_against_rationals(a, b):
    x = dd.DD(a) / 3.0
    y = dd.DD(b) / 7.0
    xa, ya = exact(x), exact(y)
    tol = Fraction(1, 10 ** 30) * (1 + abs(xa) + abs(ya)) ** 2
    assert abs(exact(x + y) - (xa + ya)) <= tol
    assert abs(exact(x - y) - (xa - ya)) <= tol
    assert abs(exact(x * y) - xa * ya) <= tol
    if ya != 0:
        q = exact(x / y)
        assert abs(q - xa / ya) <= tol * (1 + abs(xa / ya))


def _mp(x: dd.DD):
    return mp.mpf(float(x.hi)) + mp.mpf(float(x.lo))


@pytest.mark.parametrize("v", [-30.0, -1.5, -1e-9, 0.0, 0.3, 1.0, 2.5, 44.0, 600.0])
def test_exp_log_roundtrip_and_accuracy(v):
    with mp.workdps(45):
        x = dd.DD(v) / 3.0
        e = dd.exp(x)
        ref = mp.exp(_mp(x))
        assert abs(_mp(e) - ref) <= 1e-30 * ref
        back = dd.log(e)
        assert abs(_mp(back) - _mp(x)) <= 1e-30 * max(1.0, abs(v))


@pytest.mark.parametrize("v", [-100.0, -3.0, -0.5, 0.1, 1.0, 7.0, 1000.0])
def test_sin_cos(v):
    with mp.workdps(45):
        x = dd.DD(v) / 7.0
        s, c = dd.sin_cos(x)
        xm = _mp(x)
        assert abs(_mp(s) - mp.sin(xm)) < 1e-30
        assert abs(_mp(c) - mp.cos(xm)) < 1e-30


def test_sinpi_vanishes_exactly_at_integers():
    s, _ = dd.sinpi_cospi(dd.DD(np.array([-4.0, -1.0, 0.0, 3.0, 17.0])))
    assert np.all(s.hi == 0.0) and np.all(s.lo == 0.0)


@pytest.mark.parametrize("z", [complex(0.5, 0.0), complex(3.0, 2.0), complex(31.0, -4.0),
                               complex(1.25, 10.0), complex(107.0, 0.0)])
def test_clgamma_against_mpmath(z):
    with mp.workdps(45):
        v = dd.CDD(dd.DD(z.real), dd.DD(z.imag))
        got = dd.clgamma(v)
        ref = mp.loggamma(mp.mpc(z.real, z.imag))
        re = _mp(got.re)
        im = _mp(got.im)
        assert abs(re - ref.real) < 1e-28 * max(1, abs(ref.real))
        # equal up to a multiple of 2 pi i
        k = mp.nint((im - ref.imag) / (2 * mp.pi))
        assert abs(im - ref.imag - 2 * mp.pi * k) < 1e-28 * max(1, abs(ref.imag))


def test_dd_sum_recovers_cancelled_digits():
    vals = np.array([1e16, 1.0, -1e16, 1e-20, 3.0])
    total = dd.dd_sum(dd.DD(vals))
    assert float(total.hi) == 4.0
    assert float(total.lo) == 1e-20
