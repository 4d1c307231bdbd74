import cmath
import math

import numpy as np
import pytest

from wright2k.errors import DomainError, RangeError
from wright2k.oracles import (
    airy_ai,
    closed_form_mainardi,
    log_gamma,
    recip_gamma,
    series_terms,
    wright_series,
)

# Reference values below were computed once with mpmath at 50 digits.
RECIP_GAMMA_REF = [
    (-0.5, -0.28209479177387814347),
    (0.1, 0.10511370061117778683),
    (1.7, 1.1005474055236657228),
    (30.5, 2.0735285957024674969e-32),
    (-7.3, 2390.1266372689977879),
    (3 + 2j, -0.45024525741693705 - 0.9287638518642101j),
    (-2.5 + 0.5j, -2.166652272220971 + 1.3397856165916868j),
]


@pytest.mark.parametrize("z, ref", RECIP_GAMMA_REF)
def test_recip_gamma_reference_values(z, ref):
    assert abs(recip_gamma(z) - ref) <= 1e-13 * abs(ref)


def test_recip_gamma_trivial_values():
    assert recip_gamma(1.0) == 1.0
    assert recip_gamma(0.0) == 0.0
    assert recip_gamma(-3.0) == 0.0
    assert recip_gamma(-3.0 + 0j) == 0j
    assert recip_gamma(-2.0 + 1e-15) == 0.0
    assert recip_gamma(-0.5) == pytest.approx(-1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-14)


def test_recip_gamma_real_in_real_out():
    assert isinstance(recip_gamma(2.5), float)
    assert isinstance(recip_gamma(2.5 + 0j), complex)


@pytest.mark.parametrize("z", [0.1, 0.5, 1.7, 3 + 2j])
def test_recip_gamma_times_gamma_is_one(z):
    prod = recip_gamma(z) * cmath.exp(log_gamma(z))
    assert abs(prod - 1.0) < 1e-13


@pytest.mark.parametrize("z", np.linspace(-4.7, 4.3, 19))
def test_reflection_consistency(z):
    lhs = recip_gamma(z) * recip_gamma(1.0 - z)
    rhs = math.sin(math.pi * z) / math.pi
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_log_gamma_pole():
    with pytest.raises(DomainError):
        log_gamma(-2.0)


def test_recip_gamma_log_scale_avoids_overflow():
    # 1/Gamma(200) underflows alone; with a large prefactor it is fine
    v = recip_gamma(200.0, log_scale=math.lgamma(200.0))
    assert v == pytest.approx(1.0, rel=1e-12)


# -- series -------------------------------------------------------------------

SERIES_REF = [
    # (lam, mu, z, value)
    (-0.5, 0.5, -1.0, 0.43939128946772239705),
    (-0.5, 1.0, -1.0, 0.47950012218695346232),
    (-0.25, 0.75, -1.0, 0.38333541657068353578),
    (-0.75, 0.25, -2.0, 0.22514007014896749913),
    (-0.3, 2.5, -1.0, 0.21707397443856182207),
    (-1.0 / 3.0, 2.0 / 3.0, -1.0, 0.39623947970650259057),
    (-0.5, 1 + 1j, -1.0, 0.7211459705438658 - 0.21257134347487214j),
    (-0.7, -1.0, -5.0, 2.8329892594797484e-10),
]


@pytest.mark.parametrize("precision", ["dd", "double"])
@pytest.mark.parametrize("lam, mu, z, ref", SERIES_REF[:-1])
def test_series_reference_values(lam, mu, z, ref, precision):
    res = wright_series(lam, mu, z, precision=precision)
    assert res.converged
    assert abs(res.value - ref) <= 1e-13 * abs(ref)


def test_dd_series_survives_heavy_cancellation():
    # terms reach 2e13 while the sum is 3e-10
    lam, mu, z, ref = SERIES_REF[-1]
    res = wright_series(lam, mu, z, abs_tol=1e-20, precision="dd")
    assert res.converged
    assert res.max_term > 1e13
    # dd log-gamma is good to about 1e-28 relative, scaled by the largest term
    assert abs(res.value - ref) < 1e-28 * res.max_term
    assert abs(res.value - ref) < 1e-5 * abs(ref)


def test_series_at_zero():
    res = wright_series(-0.3, 1.0, 0.0)
    assert res.value == 1.0 and res.terms_used == 1 and res.converged


def test_series_real_inputs_give_zero_imaginary_part():
    for precision in ("dd", "double"):
        assert wright_series(-0.5, 0.5, -3.0, precision=precision).value.imag == 0.0


def test_series_even_terms_vanish_for_half_order():
    terms = series_terms(-0.5, 1.0, -1.0, 20)
    assert np.all(terms[2::2] == 0.0)
    assert np.all(terms[1::2] != 0.0)


def test_series_reports_nonconvergence():
    res = wright_series(-0.5, 1.0, -30.0, max_terms=10)
    assert not res.converged
    assert res.terms_used == 10
    assert res.tail_bound > 1e-15


def test_series_invariants():
    res = wright_series(-0.3, 0.7, -2.0, max_terms=500)
    assert res.terms_used <= 500
    assert res.tail_bound >= 0.0


def test_series_preconditions():
    with pytest.raises(DomainError):
        wright_series(-0.5, 1.0, -1.0, abs_tol=0.0)
    with pytest.raises(DomainError):
        wright_series(-0.5, 1.0, -1.0, max_terms=0)


@pytest.mark.parametrize("nu, kind", [(0.5, "gauss_half"), (1.0 / 3.0, "airy_third")])
@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 3.0])
def test_series_matches_closed_forms(nu, kind, x):
    res = wright_series(-nu, 1.0 - nu, -x, precision="dd")
    assert res.value.real == pytest.approx(closed_form_mainardi(kind, x), rel=1e-11)


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 3.0])
def test_series_reproduces_exponential_at_order_zero(x):
    res = wright_series(0.0, 1.0, -x, precision="dd")
    assert res.value.real == pytest.approx(math.exp(-x), rel=1e-11)


@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_small_order_deviation_has_the_expected_slope(x):
    # M_nu(x) - exp(-x) ~ -nu * euler_gamma * (1 - x) exp(-x) for small nu
    nu = 1e-6
    res = wright_series(-nu, 1.0 - nu, -x, precision="dd")
    slope = (res.value.real - math.exp(-x)) / nu
    expected = -np.euler_gamma * (1.0 - x) * math.exp(-x)
    assert slope == pytest.approx(expected, rel=1e-4, abs=1e-6)


# -- Airy ---------------------------------------------------------------------

AIRY_REF = [
    (0.0, 0.35502805388781723926),
    (3.0 ** (-1.0 / 3.0), 0.19049207311517814164),
    (2.5, 0.015725923380470489995),
    (-3.7, -0.28201306184193139823),
    (-8.0, -0.052705050356386202622),
    (8.0, 4.6922076160992316256e-8),
]


@pytest.mark.parametrize("x, ref", AIRY_REF)
def test_airy_reference_values(x, ref):
    assert airy_ai(x) == pytest.approx(ref, rel=1e-13, abs=1e-17)


def test_airy_positive_and_decreasing_on_right_axis():
    vals = [airy_ai(x) for x in np.linspace(0.0, 3.0, 31)]
    assert all(v > 0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_airy_cross_check_with_series():
    s = wright_series(-1.0 / 3.0, 2.0 / 3.0, -1.0, precision="dd").value.real
    assert airy_ai(3.0 ** (-1.0 / 3.0)) == pytest.approx(s / 3.0 ** (2.0 / 3.0), rel=1e-13)


def test_airy_range():
    with pytest.raises(RangeError):
        airy_ai(8.5)
    with pytest.raises(RangeError):
        airy_ai(float("nan"))


def test_closed_forms():
    assert closed_form_mainardi("exp0", 1.0) == pytest.approx(0.36787944117144233, rel=1e-15)
    assert closed_form_mainardi("gauss_half", 0.0) == pytest.approx(0.5641895835477563, rel=1e-15)
    assert closed_form_mainardi("airy_third", 0.0) == pytest.approx(
        3.0 ** (2.0 / 3.0) * 0.35502805388781723926, rel=1e-14)
    with pytest.raises(DomainError):
        closed_form_mainardi("exp0", -1.0)
    with pytest.raises(RangeError):
        closed_form_mainardi("airy_third", 20.0)
