"""Reference evaluations independent of the contour quadrature.

These are used to validate :mod:`wright2k.core` and nothing in the core
depends on them except the ``x = 0`` shortcut through :func:`recip_gamma`.

* :func:`recip_gamma` / :func:`log_gamma` -- Lanczos (g=7, 9 terms) with
  reflection below ``Re z = 1/2``.
* :func:`wright_series` -- the defining power series, either in double
  precision with error-free summation or fully in double-double.
* :func:`airy_ai` -- Maclaurin series for Ai in double-double.
* :func:`closed_form_mainardi` -- the three elementary Mainardi cases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from . import ddarith as dd
from .errors import DomainError, RangeError

__all__ = [
    "SeriesResult",
    "log_gamma",
    "recip_gamma",
    "series_terms",
    "wright_series",
    "airy_ai",
    "closed_form_mainardi",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
POLE_SNAP = 1e-14


def _nonpositive_integer(z: complex) -> bool:
    n = round(z.real)
    return n <= 0 and abs(z - n) < POLE_SNAP


def _lanczos_lgamma(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    lg = cmath.log if isinstance(z, complex) else math.log
    return _HALF_LOG_2PI + (z + 0.5) * lg(t) - t + lg(acc)


def _sinpi(z):
    """sin(pi z) with the real part reduced modulo 2 first."""
    if isinstance(z, complex):
        n = round(z.real)
        s = cmath.sin(math.pi * complex(z.real - n, z.imag))
    else:
        n = round(z)
        s = math.sin(math.pi * (z - n))
    return -s if n % 2 else s


def log_gamma(z):
    """log Gamma(z) on the principal branch of log for ``Re z >= 1/2``.

    Below 1/2 the reflection formula is used, so for complex arguments the
    imaginary part may differ from other libraries by a multiple of 2 pi.
    Raises :class:`DomainError` at the poles.
    """
    is_complex = isinstance(z, complex) or np.iscomplexobj(z)
    z = complex(z) if is_complex else float(z)
    if _nonpositive_integer(complex(z)):
        raise DomainError(f"log_gamma has a pole at {z!r}")
    if z.real >= 0.5:
        return _lanczos_lgamma(z)
    s = _sinpi(z)
    if is_complex:
        return cmath.log(math.pi / s) - _lanczos_lgamma(1.0 - z)
    return math.log(math.pi / abs(s)) - _lanczos_lgamma(1.0 - z)


def recip_gamma(z, log_scale=0.0):
    """Return ``exp(log_scale) / Gamma(z)``.

    ``1/Gamma`` is entire; at nonpositive integers (within ``1e-14``) the
    result is exactly zero.  ``log_scale`` lets callers fold a large or
    small prefactor into the exponent, which keeps ``z^n / (n! Gamma(w))``
    finite when ``Gamma(w)`` alone would overflow.

    Real input gives a float, complex input a complex.
    """
    is_complex = isinstance(z, complex) or isinstance(log_scale, complex)
    zc = complex(z)
    if _nonpositive_integer(zc):
        return 0j if is_complex else 0.0
    if log_scale == 0 and zc.imag == 0 and zc.real.is_integer() and 1.0 <= zc.real <= 20.0:
        # (n-1)! is exact in double for these n
        r = 1.0 / math.factorial(int(zc.real) - 1)
        return complex(r) if is_complex else r
    if not is_complex:
        z = float(z)
        if z >= 0.5:
            return math.exp(log_scale - _lanczos_lgamma(z))
        return _sinpi(z) / math.pi * math.exp(log_scale + _lanczos_lgamma(1.0 - z))
    if zc.real >= 0.5:
        return cmath.exp(log_scale - _lanczos_lgamma(zc))
    return _sinpi(zc) / math.pi * cmath.exp(log_scale + _lanczos_lgamma(1.0 - zc))


@dataclass(frozen=True)
class SeriesResult:
    """Truncated power-series value.

    ``converged`` is False when ``max_terms`` was exhausted before three
    consecutive terms fell below the tolerance, or when a term overflowed;
    callers must check it.  ``max_term`` is the largest term magnitude
    seen; the absolute rounding error of the sum scales with it (by about
    1e-16 in double mode and 1e-30 per unit of ``log|term|`` in dd mode).
    """

    value: complex
    terms_used: int
    tail_bound: float
    converged: bool
    max_term: float = 0.0


@lru_cache(maxsize=256)
def _dd_coefficients(lam: float, mu_re: float, mu_im: float, n_terms: int):
    # log|coefficient| part and multiplier of  1 / (n! Gamma(lam n + mu)),
    # so that term_n = exp(n log z + logc_n) * mult_n.
    n = np.arange(n_terms, dtype=float)
    w_re = dd.DD(*dd.two_prod(np.full(n_terms, lam), n)) + mu_re
    w = dd.CDD(w_re, dd.DD(np.full(n_terms, mu_im)))
    refl = w_re.hi < 0.5
    v = dd.cwhere(refl, 1.0 - w, w)
    lg = dd.clgamma(v)
    lfact = dd.clgamma(dd.CDD(dd.DD(n + 1.0)))
    logc = dd.cwhere(refl, lg, -lg) - lfact.re
    sin = dd.csinpi(w) / dd.PI
    one = dd.CDD(dd.DD(np.ones(n_terms)))
    # No pole snapping here: lam * n is exact in dd, so sinpi vanishes only at
    # true poles, and near-pole terms must survive to cancel the O(delta)
    # shift that binary rounding of lam puts into every other term.
    mult = dd.cwhere(refl, sin, one)
    return logc, mult


def _dd_terms(lam: float, mu: complex, z: complex, n_terms: int) -> dd.CDD:
    logc, mult = _dd_coefficients(float(lam), float(mu.real), float(mu.imag), int(n_terms))
    n = np.arange(n_terms, dtype=float)
    logz = dd.clog(dd.CDD.from_complex(z))
    with np.errstate(over="ignore", invalid="ignore"):
        expo = dd.CDD(logz.re * n, logz.im * n) + logc
        return dd.cexp(expo) * mult


def _double_terms(lam: float, mu: complex, z: complex, n_terms: int) -> np.ndarray:
    out = np.zeros(n_terms, dtype=complex)
    real = z.imag == 0 and mu.imag == 0
    # real inputs keep the sign of z^n exact instead of going through log(-|z|)
    logz = math.log(abs(z.real)) if real else cmath.log(z)
    for n in range(n_terms):
        scale = n * logz - math.lgamma(n + 1.0)
        if real:
            w = lam * n + mu.real
            sign = -1.0 if (z.real < 0 and n % 2) else 1.0
            try:
                out[n] = sign * recip_gamma(w, scale)
            except OverflowError:
                out[n] = math.inf
            continue
        w = lam * n + mu
        try:
            out[n] = recip_gamma(complex(w), scale)
        except OverflowError:
            out[n] = complex(math.inf, math.inf)
    return out


def series_terms(lam: float, mu: complex, z: complex, n_terms: int,
                 precision: Literal["double", "dd"] = "dd") -> np.ndarray:
    """The first ``n_terms`` terms ``z^n / (n! Gamma(lam n + mu))`` as complex floats."""
    mu = complex(mu)
    z = complex(z)
    if z == 0:
        out = np.zeros(n_terms, dtype=complex)
        out[0] = recip_gamma(mu)
        return out
    if precision == "dd":
        return _dd_terms(lam, mu, z, n_terms).to_complex()
    return _double_terms(lam, mu, z, n_terms)


def _stop_index(mags: np.ndarray, abs_tol: float) -> int | None:
    small = mags < abs_tol
    run = small[:-2] & small[1:-1] & small[2:]
    hits = np.flatnonzero(run)
    if hits.size == 0:
        return None
    return int(hits[0]) + 2


def wright_series(lam: float, mu: complex, z: complex, abs_tol: float = 1e-15,
                  max_terms: int = 1000,
                  precision: Literal["double", "dd"] = "double") -> SeriesResult:
    """Sum the Wright power series ``sum z^n / (n! Gamma(lam n + mu))``.

    Summation stops at the first index where three consecutive terms are
    below ``abs_tol`` in magnitude (single small terms occur at the poles
    of Gamma and prove nothing).  ``precision="double"`` builds each term
    from :func:`recip_gamma` and sums real and imaginary parts with
    :func:`math.fsum`; ``precision="dd"`` does all of it in double-double
    and is the mode to use as a reference.

    The dd mode is trustworthy as long as the largest term stays below
    about 1e15 times the wanted absolute accuracy; for ``lam`` close to -1
    and ``|z|`` beyond 2 or so the terms grow without practical bound and
    the result comes back with ``converged=False``.
    """
    if abs_tol <= 0:
        raise DomainError("abs_tol must be positive")
    if max_terms < 1:
        raise DomainError("max_terms must be at least 1")
    mu = complex(mu)
    z = complex(z)
    if z == 0:
        r0 = complex(recip_gamma(mu))
        return SeriesResult(r0, 1, 0.0, True, abs(r0))

    if precision == "dd":
        terms = _dd_terms(lam, mu, z, max_terms)
        mags = terms.abs_hi()
    elif precision == "double":
        terms = _double_terms(lam, mu, z, max_terms)
        mags = np.abs(terms)
    else:
        raise ValueError(f"unknown precision {precision!r}")

    finite = np.isfinite(mags)
    stop = _stop_index(np.where(finite, mags, np.inf), abs_tol)
    if stop is None:
        used = max_terms
    else:
        used = stop + 1
    converged = stop is not None and bool(finite[:used].all())
    tail = float(mags[used - 1])

    if precision == "dd":
        head = terms[:used]
        value = complex(float(dd.dd_sum(head.re)), float(dd.dd_sum(head.im)))
    else:
        head = terms[:used]
        try:
            value = complex(math.fsum(head.real), math.fsum(head.imag))
        except (OverflowError, ValueError):
            value = complex(math.nan, math.nan)
            converged = False
    if z.imag == 0 and mu.imag == 0:
        value = complex(value.real, 0.0)
    peak = float(np.max(mags[:used]))
    return SeriesResult(value, used, tail, converged, peak)


# Ai(0) and -Ai'(0) are computed once in double-double from Gamma(2/3), Gamma(1/3).
def _airy_constants():
    third = dd.DD(1.0) / 3.0
    ln3 = dd.log(dd.DD(3.0))
    args = dd.CDD(dd.DD(np.array([2.0, 1.0])) / 3.0)
    lg = dd.clgamma(args).re
    c1 = dd.exp(-(ln3 * third * 2.0) - lg[0])
    c2 = dd.exp(-(ln3 * third) - lg[1])
    return c1, c2


AIRY_C1, AIRY_C2 = _airy_constants()
AIRY_MAX_ARG = 8.0


def airy_ai(x: float) -> float:
    """Airy function Ai(x) from its Maclaurin series, for ``|x| <= 8``.

    Ai(x) = c1 f(x) - c2 g(x) with f = sum 3^k (1/3)_k x^(3k)/(3k)! and
    g = sum 3^k (2/3)_k x^(3k+1)/(3k+1)!.  Terms are generated by their
    ratio recurrences and everything is carried in double-double, which
    absorbs the cancellation between the two series on the positive axis.
    """
    x = float(x)
    if not math.isfinite(x) or abs(x) > AIRY_MAX_ARG:
        raise RangeError(f"airy_ai is validated on |x| <= {AIRY_MAX_ARG}, got {x}")
    x3 = dd.DD(x) * x * x
    f_term = dd.DD(1.0)
    g_term = dd.DD(x)
    f_sum = dd.DD(0.0)
    g_sum = dd.DD(0.0)
    k = 0
    while True:
        f_sum = f_sum + f_term
        g_sum = g_sum + g_term
        if abs(float(f_term.hi)) < 1e-18 and abs(float(g_term.hi)) < 1e-18 and k > 0:
            break
        # f: 3^k (1/3)_k / (3k)!  ->  multiply by x^3 / ((3k+2)(3k+3))
        f_term = f_term * x3 / float((3 * k + 2) * (3 * k + 3))
        # g: multiply by x^3 / ((3k+3)(3k+4))
        g_term = g_term * x3 / float((3 * k + 3) * (3 * k + 4))
        k += 1
    return float(AIRY_C1 * f_sum - AIRY_C2 * g_sum)


def closed_form_mainardi(kind: Literal["exp0", "gauss_half", "airy_third"], z: float) -> float:
    """M_nu(z) for nu = 0, 1/2 and 1/3 from elementary and Airy functions."""
    if z < 0:
        raise DomainError("closed_form_mainardi needs z >= 0")
    if kind == "exp0":
        return math.exp(-z)
    if kind == "gauss_half":
        return math.exp(-z * z / 4.0) / math.sqrt(math.pi)
    if kind == "airy_third":
        return 3.0 ** (2.0 / 3.0) * airy_ai(z / 3.0 ** (1.0 / 3.0))
    raise ValueError(f"unknown closed form {kind!r}")
