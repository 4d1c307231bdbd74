"""Vectorised double-double arithmetic.

A double-double number is an unevaluated sum ``hi + lo`` of two float64
values with ``|lo| <= ulp(hi)/2``, which carries roughly 32 significant
decimal digits.  The classes here hold numpy arrays in both slots so that
every operation acts elementwise on whole arrays at once; scalars are
0-d arrays.

Only what the series and Airy oracles need is implemented: the four
arithmetic operations, ``exp``, ``log``, ``sin``/``cos``, ``sinpi``,
complex versions of these, and a Stirling-series ``lgamma``.

The error-free transformations follow Dekker and Knuth; no fused
multiply-add is assumed.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``a + b = s + e`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """Like :func:`two_sum` but requires ``|a| >= |b|``."""
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    c = _SPLITTER * a
    ahi = c - (c - a)
    return ahi, a - ahi


def two_prod(a, b):
    """Return ``(p, e)`` with ``p = fl(a * b)`` and ``a * b = p + e`` exactly."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _finite_or(x, fill):
    return np.where(np.isfinite(x), x, fill)


class DD:
    """Array of real double-double numbers."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=float)
        if lo is None:
            self.lo = np.zeros_like(self.hi)
        else:
            self.lo = np.asarray(lo, dtype=float)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "DD":
        hi = float(q)
        lo = float(q - Fraction(hi))
        return cls(hi, lo)

    def __repr__(self):
        return f"DD(hi={self.hi!r}, lo={self.lo!r})"

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, idx):
        return DD(self.hi[idx], self.lo[idx])

    @property
    def shape(self):
        return self.hi.shape

    def to_float(self):
        return self.hi + self.lo

    def __float__(self):
        return float(self.hi + self.lo)

    def __neg__(self):
        return DD(-self.hi, -self.lo)

    def __add__(self, other):
        if not isinstance(other, DD):
            other = np.asarray(other, dtype=float)
            s, e = two_sum(self.hi, other)
            e = e + self.lo
            return DD(*quick_two_sum(s, e))
        s, e = two_sum(self.hi, other.hi)
        t, f = two_sum(self.lo, other.lo)
        e = e + t
        s, e = quick_two_sum(s, e)
        e = e + f
        return DD(*quick_two_sum(s, e))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DD):
            other = np.asarray(other, dtype=float)
            p, e = two_prod(self.hi, other)
            e = e + self.lo * other
            return DD(*quick_two_sum(p, e))
        p, e = two_prod(self.hi, other.hi)
        e = e + (self.hi * other.lo + self.lo * other.hi)
        return DD(*quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, DD):
            other = DD(other)
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        q1, q2 = quick_two_sum(q1, q2)
        return DD(q1, q2) + q3

    def __rtruediv__(self, other):
        return DD(other) / self

    def ldexp(self, n):
        return DD(np.ldexp(self.hi, n), np.ldexp(self.lo, n))

    def sqr(self):
        return self * self


def where(mask, a: DD, b: DD) -> DD:
    return DD(np.where(mask, a.hi, b.hi), np.where(mask, a.lo, b.lo))


def dd_sum(x: DD) -> DD:
    """Pairwise double-double sum of a 1-d array (compensated at every level)."""
    hi, lo = x.hi.ravel(), x.lo.ravel()
    acc = DD(hi, lo)
    while len(acc) > 1:
        if len(acc) % 2:
            acc = DD(np.append(acc.hi, 0.0), np.append(acc.lo, 0.0))
        acc = acc[0::2] + acc[1::2]
    if len(acc) == 0:
        return DD(0.0)
    return DD(acc.hi[0], acc.lo[0])


# Constants (hi/lo pairs as in the QD library).
PI = DD(3.141592653589793116e+00, 1.224646799147353207e-16)
PI_2 = DD(1.570796326794896558e+00, 6.123233995736766036e-17)
LN2 = DD(6.931471805599452862e-01, 2.319046813846299558e-17)

_N_EXP = 10
_INV_FACT = [DD.from_fraction(Fraction(1, _fact)) for _fact in
             (1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800)]
# Alternating Taylor coefficients (-1)^j / (2j+1)! and (-1)^j / (2j)!.
_SIN_COEF = []
_COS_COEF = []
_f = Fraction(1)
for _k in range(1, 34):
    _f /= _k
    if _k % 2:
        _SIN_COEF.append(DD.from_fraction(_f * (-1) ** (_k // 2)))
    else:
        _COS_COEF.append(DD.from_fraction(_f * (-1) ** (_k // 2)))
_COS_COEF.insert(0, DD(1.0))
del _f, _k


def exp(x: DD) -> DD:
    hi = x.hi
    overflow = hi > 709.78
    underflow = hi < -745.2
    bad = np.isnan(hi)
    safe = DD(np.where(overflow | underflow | bad, 0.0, hi),
              np.where(overflow | underflow | bad, 0.0, _finite_or(x.lo, 0.0)))
    k = np.rint(safe.hi / LN2.hi)
    r = (safe - LN2 * k).ldexp(-_N_EXP)
    # expm1(r) by Horner on the Taylor series; |r| < 3.4e-4 here.
    s = _INV_FACT[9]
    for j in range(8, 0, -1):
        s = s * r + _INV_FACT[j]
    s = s * r
    for _ in range(_N_EXP):
        s = s * (s + 2.0)
    res = (s + 1.0).ldexp(k.astype(int))
    out_hi = np.where(overflow, np.inf, np.where(underflow, 0.0, res.hi))
    out_lo = np.where(overflow | underflow, 0.0, res.lo)
    out_hi = np.where(bad, np.nan, out_hi)
    return DD(out_hi, np.where(bad, np.nan, out_lo))


def log(x: DD) -> DD:
    with np.errstate(divide="ignore", invalid="ignore"):
        y0 = np.log(x.hi)
    ok = np.isfinite(y0)
    y = DD(np.where(ok, y0, 0.0))
    y = y + x * exp(-y) - 1.0
    return DD(np.where(ok, y.hi, y0), np.where(ok, y.lo, 0.0))


def _sin_cos_reduced(r: DD):
    r2 = r * r
    s = _SIN_COEF[-1]
    for c in reversed(_SIN_COEF[:-1]):
        s = s * r2 + c
    s = s * r
    c_ = _COS_COEF[-1]
    for c in reversed(_COS_COEF[:-1]):
        c_ = c_ * r2 + c
    return s, c_


def sin_cos(x: DD):
    """Return ``(sin x, cos x)``."""
    k = np.rint(x.hi / PI_2.hi)
    r = x - PI_2 * k
    s, c = _sin_cos_reduced(r)
    q = np.mod(k, 4).astype(int)
    sin = where(q == 0, s, where(q == 1, c, where(q == 2, -s, -c)))
    cos = where(q == 0, c, where(q == 1, -s, where(q == 2, -c, s)))
    return sin, cos


def sinpi_cospi(x: DD):
    """Return ``(sin(pi x), cos(pi x))``; exact zeros at the integer/half-integer nodes."""
    n = np.rint(x.hi)
    f = DD(*quick_two_sum(x.hi - n, x.lo))
    s, c = sin_cos(PI * f)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    return s * sign, c * sign


def atan2(y: DD, x: DD) -> DD:
    t0 = np.arctan2(y.hi, x.hi)
    s, c = sin_cos(DD(t0))
    num = y * c - x * s
    den = x * c + y * s
    corr = num / den
    return DD(t0) + DD(np.where(den.hi == 0, 0.0, corr.hi), np.where(den.hi == 0, 0.0, corr.lo))


class CDD:
    """Array of complex double-double numbers."""

    __slots__ = ("re", "im")

    def __init__(self, re: DD, im: DD | None = None):
        self.re = re if isinstance(re, DD) else DD(re)
        if im is None:
            im = DD(np.zeros_like(self.re.hi))
        self.im = im if isinstance(im, DD) else DD(im)

    @classmethod
    def from_complex(cls, z) -> "CDD":
        z = np.asarray(z, dtype=complex)
        return cls(DD(z.real.copy()), DD(z.imag.copy()))

    def __len__(self):
        return len(self.re)

    def __getitem__(self, idx):
        return CDD(self.re[idx], self.im[idx])

    def to_complex(self):
        return self.re.to_float() + 1j * self.im.to_float()

    def abs_hi(self):
        return np.hypot(self.re.hi, self.im.hi)

    def __neg__(self):
        return CDD(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, CDD):
            return CDD(self.re + other.re, self.im + other.im)
        return CDD(self.re + other, self.im)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CDD):
            return CDD(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)
        return CDD(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CDD):
            den = other.re * other.re + other.im * other.im
            num = self * CDD(other.re, -other.im)
            return CDD(num.re / den, num.im / den)
        return CDD(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        return CDD(DD(np.broadcast_to(np.asarray(other, float), self.re.shape))) / self


def cwhere(mask, a: CDD, b: CDD) -> CDD:
    return CDD(where(mask, a.re, b.re), where(mask, a.im, b.im))


def cexp(z: CDD) -> CDD:
    m = exp(z.re)
    s, c = sin_cos(z.im)
    re = m * c
    im = m * s
    # 0 * inf from an underflowed modulus must stay 0.
    zero = m.hi == 0.0
    return CDD(where(zero, DD(0.0), re), where(zero, DD(0.0), im))


def clog(z: CDD) -> CDD:
    r2 = z.re * z.re + z.im * z.im
    return CDD(log(r2) * 0.5, atan2(z.im, z.re))


def csinpi(z: CDD) -> CDD:
    """``sin(pi z)`` for complex ``z``."""
    s, c = sinpi_cospi(z.re)
    e = exp(PI * z.im)
    einv = 1.0 / e
    ch = (e + einv) * 0.5
    sh = (e - einv) * 0.5
    return CDD(s * ch, c * sh)


def _bernoulli(n_max: int) -> list[Fraction]:
    # Akiyama-Tanigawa; returns B_0..B_n_max with B_1 = +1/2.
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


_STIRLING_TERMS = 15
_STIRLING_SHIFT = 30.0
_B = _bernoulli(2 * _STIRLING_TERMS)
_STIRLING_COEF = [DD.from_fraction(_B[2 * k] / (2 * k * (2 * k - 1)))
                  for k in range(1, _STIRLING_TERMS + 1)]
HALF_LOG_2PI = log(PI * 2.0) * 0.5


def clgamma(v: CDD) -> CDD:
    """log Gamma(v) for ``Re v >= 0.5`` up to a multiple of ``2 pi i``.

    The argument is shifted up by the recurrence until ``Re v >= 30`` and the
    Stirling series with 15 Bernoulli terms is summed there.
    """
    m = np.maximum(0.0, np.ceil(_STIRLING_SHIFT - v.re.hi))
    m = np.where(np.isfinite(m), m, 0.0)
    prod = CDD(DD(np.ones_like(v.re.hi)))
    for k in range(int(m.max(initial=0.0))):
        active = k < m
        factor = v + float(k)
        prod = cwhere(active, prod * factor, prod)
    w = v + m
    lw = clog(w)
    inv = 1.0 / w
    inv2 = inv * inv
    s = CDD(_STIRLING_COEF[-1] * np.ones_like(v.re.hi))
    for c in reversed(_STIRLING_COEF[:-1]):
        s = s * inv2 + c
    s = s * inv
    lg = (w - 0.5) * lw - w + HALF_LOG_2PI + s
    return lg - clog(prod)
