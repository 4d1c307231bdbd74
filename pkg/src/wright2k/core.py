"""Wright function of the second kind by parabolic-contour inversion.

The quantity computed is

    f_{lam,mu}(t; x) = t^(mu-1) W_{lam,mu}(-|x| t^lam),   -1 < lam < 0,

as the inverse Laplace transform of ``F(s) = s^-mu exp(-|x| s^-lam)``.
The Bromwich line is deformed into the parabola ``z(u) = gamma (iu + 1)^2``
and the integral over ``u`` is replaced by a truncated trapezoidal sum
with ``2N + 1`` nodes.  ``N``, the step ``h`` and ``gamma`` are picked so
that discretisation, truncation and rounding errors are balanced for the
requested accuracy (see :func:`select_contour`).

All complex powers use the principal branch, ``z^a = exp(a log z)``; the
parabola crosses the real axis only at ``z = gamma > 0`` so it never meets
the cut.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .brent import brent_min
from .errors import AccuracyWarning, DomainError, InfeasibleToleranceError
from .oracles import recip_gamma

__all__ = [
    "WrightOrder",
    "EvalPoint",
    "ToleranceProfile",
    "ContourParams",
    "EvalResult",
    "DEFAULT_TOLERANCE",
    "contour_point",
    "integrand",
    "select_contour",
    "balanced_params",
    "trapezoid_sum",
    "wright_eval",
    "wright",
    "wright_grid",
    "mainardi_eval",
]

LAMBDA_MIN = -1.0 + 1e-8
IM_MU_WARN = 5.0
# exp() overflows a little above 709; the largest node weight is e^(gamma t)
MAX_GAMMA_T = 700.0


@dataclass(frozen=True)
class WrightOrder:
    """The pair ``(lam, mu)``.

    ``lam`` must lie in ``[-1 + 1e-8, 0]``.  ``lam = 0`` is accepted so that
    ``M_0(z) = exp(-z)`` can be reproduced exactly; the method itself has no
    difficulty there.
    """

    lam: float
    mu: complex

    def __post_init__(self):
        lam = float(self.lam)
        mu = complex(self.mu)
        if not math.isfinite(lam) or not LAMBDA_MIN <= lam <= 0.0:
            raise DomainError(f"lambda must lie in [{LAMBDA_MIN}, 0], got {self.lam}")
        if not (math.isfinite(mu.real) and math.isfinite(mu.imag)):
            raise DomainError(f"mu must be finite, got {self.mu}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def real_mu(self) -> bool:
        return self.mu.imag == 0.0


@dataclass(frozen=True)
class EvalPoint:
    t: float
    x: float

    def __post_init__(self):
        t = float(self.t)
        x = float(self.x)
        if not math.isfinite(t) or t <= 0.0:
            raise DomainError(f"t must be finite and positive, got {self.t}")
        if not math.isfinite(x):
            raise DomainError(f"x must be finite, got {self.x}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class ToleranceProfile:
    """Working precision ``eps_machine`` and target accuracy ``eps_target``."""

    eps_machine: float = sys.float_info.epsilon
    eps_target: float = 1e-15

    def __post_init__(self):
        em, et = float(self.eps_machine), float(self.eps_target)
        if not 0.0 < em <= et < 1.0:
            raise DomainError(
                f"need 0 < eps_machine <= eps_target < 1, got {em}, {et}")
        object.__setattr__(self, "eps_machine", em)
        object.__setattr__(self, "eps_target", et)

    @property
    def ell(self) -> float:
        return -math.log(self.eps_machine)

    @property
    def ell_tol(self) -> float:
        return -math.log(self.eps_target)


DEFAULT_TOLERANCE = ToleranceProfile()


@dataclass(frozen=True)
class ContourParams:
    """Quadrature configuration for one ``(mu, t, tol)``.

    ``gamma`` carries units of 1/time; ``gamma * t`` depends only on ``mu``
    and the tolerances.
    """

    n_nodes: int
    step: float
    gamma: float
    c: float
    xi: float

    def nodes(self) -> np.ndarray:
        """Nonnegative quadrature abscissae ``k h``, ``k = 0..N``."""
        return self.step * np.arange(self.n_nodes + 1, dtype=float)


@dataclass(frozen=True)
class EvalResult:
    """Value of ``f_{lam,mu}(t;x)`` with the contour that produced it.

    ``value`` is a Python ``float`` when ``mu`` is real.  ``est_roundoff`` is
    the a-priori model ``eps * exp(gamma t)``; ``roundoff_bound`` is the
    a-posteriori ``eps h/(2 pi) sum |g_k|`` over the nodes actually used
    (zero on the ``x = 0`` shortcut).
    """

    value: complex
    contour: ContourParams
    est_roundoff: float
    roundoff_bound: float = 0.0


def contour_point(u, gamma: float):
    """Point ``z(u) = gamma (iu + 1)^2`` on the parabola and ``z'(u)``."""
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    w = 1.0 + 1j * np.asarray(u, dtype=float)
    z = gamma * w * w
    dz = 2j * gamma * w
    if np.ndim(u) == 0:
        return complex(z), complex(dz)
    return z, dz


def _g(u, lam, mu, t, absx, gamma):
    # one exp for the whole product keeps e^{zt} from overflowing on its own
    # when the other factors are tiny
    w = 1.0 + 1j * u
    z = gamma * w * w
    dz = 2j * gamma * w
    logz = np.log(z)
    expo = z * t - mu * logz
    if lam != 0.0:
        expo = expo - absx * np.exp(-lam * logz)
    else:
        expo = expo - absx
    return np.exp(expo) * dz


def integrand(u, order: WrightOrder, point: EvalPoint, gamma: float):
    """The contour integrand ``g(u) = e^{zt} z^-mu e^{-|x| z^-lam} z'``.

    ``u`` may be a scalar or an array.
    """
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if gamma * point.t > MAX_GAMMA_T:
        raise DomainError(f"gamma*t = {gamma * point.t} overflows the exponent range")
    g = _g(np.asarray(u, dtype=float), order.lam, order.mu, point.t, abs(point.x), gamma)
    if np.ndim(g) == 0:
        return complex(g)
    return g


# -- parameter selection -------------------------------------------------------


def balanced_params(n_nodes: int, t: float, tol: ToleranceProfile = DEFAULT_TOLERANCE,
                    c: float = 1.0, xi: float = 2.0) -> ContourParams:
    """Step and parabola scale balanced for a given node count.

    ``h = (2 + xi c) l / (pi N^2)`` and
    ``gamma = pi^2 N^2 / ((2 + xi c)^2 t l)`` with ``l = -log eps``.
    """
    if n_nodes < 1:
        raise DomainError("n_nodes must be at least 1")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    ell = tol.ell
    width = 2.0 + xi * c
    n2 = float(n_nodes) * float(n_nodes)
    h = width * ell / (math.pi * n2)
    gamma = math.pi ** 2 * n2 / (width * width * t * ell)
    return ContourParams(int(n_nodes), h, gamma, c, xi)


def _n_curve(mu_re: float, ell: float, ell_tol: float):
    """Objective N(c) and the map c -> xi for the Re(mu) >= 2 branches."""
    scale = math.sqrt(ell * ell_tol) / math.pi
    if mu_re == 2.0:
        gap = ell - ell_tol

        def a_of(c):
            inner = gap * (1.0 - c) ** 2
            if not 0.0 < inner < 1.0:
                return math.nan
            return 1.0 + math.log(-math.log(inner)) / ell_tol
    else:
        slope = (2.0 - mu_re) / ell_tol

        def a_of(c):
            if not 0.0 < c < 1.0:
                return math.nan
            return 1.0 + slope * math.log1p(-c)

    def n_of(c):
        a = a_of(c)
        if not math.isfinite(a) or a <= 0.0:
            return math.inf
        return scale * math.sqrt(1.0 + a / c)

    def xi_of(c):
        return 2.0 / a_of(c)

    return n_of, xi_of


@lru_cache(maxsize=512)
def _shape(mu_re: float, ell: float, ell_tol: float) -> tuple[int, float, float]:
    # (N, c, xi) depend on Re(mu) and the tolerances only
    if mu_re < 2.0:
        n = math.floor(math.sqrt(2.0 * ell * ell_tol) / math.pi)
        if n < 1:
            raise InfeasibleToleranceError("tolerance too loose: node count rounds to zero")
        return n, 1.0, 2.0
    if mu_re == 2.0:
        gap = ell - ell_tol
        if gap <= 0.0:
            raise InfeasibleToleranceError(
                "Re(mu) = 2 needs eps_target strictly above eps_machine")
        lo = max(1.0 - 1.0 / math.sqrt(gap), 0.0)
        lo = math.nextafter(lo, 1.0)
    else:
        lo = math.nextafter(0.0, 1.0)
    hi = math.nextafter(1.0, 0.0)
    n_of, xi_of = _n_curve(mu_re, ell, ell_tol)
    c, n_val = brent_min(n_of, lo, hi, xtol=1e-4)
    if not math.isfinite(n_val):
        raise InfeasibleToleranceError(f"no admissible strip width for Re(mu) = {mu_re}")
    return math.ceil(n_val), c, xi_of(c)


def select_contour(mu: complex, t: float,
                   tol: ToleranceProfile = DEFAULT_TOLERANCE) -> ContourParams:
    """Error-balanced ``(N, h, gamma, c, xi)`` for ``f_{lam,mu}`` at time ``t``.

    Only ``Re(mu)`` matters.  Below 2 the parameters are closed-form with
    ``N = floor(sqrt(2 l l_tol)/pi)``.  At and above 2 the half-width ``c``
    of the upper strip is chosen by minimising the node estimate ``N(c)``
    with :func:`brent_min`, and ``N`` is its ceiling.
    """
    t = float(t)
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"t must be finite and positive, got {t}")
    mu_re = complex(mu).real
    if not math.isfinite(mu_re):
        raise DomainError(f"mu must be finite, got {mu}")
    n, c, xi = _shape(mu_re, tol.ell, tol.ell_tol)
    return balanced_params(n, t, tol, c=c, xi=xi)


# -- evaluation ---------------------------------------------------------------


def _weights_sum(g: np.ndarray, h: float, halved: bool):
    """Trapezoid sum over nodes ``k = 0..N`` on the last axis of ``g``.

    With ``halved`` the integrand's symmetry g(-u) = -conj g(u) is used and
    a real result is returned; otherwise ``g`` must hold all ``2N + 1``
    nodes ordered ``-N..N``.
    """
    if halved:
        im = g.imag
        return h / (2.0 * math.pi) * (im[..., 0] + 2.0 * im[..., 1:].sum(axis=-1))
    return h / (2j * math.pi) * g.sum(axis=-1)


def trapezoid_sum(order: WrightOrder, point: EvalPoint, params: ContourParams,
                  full: bool = False) -> tuple[complex, float]:
    """Truncated trapezoidal approximation on the given contour.

    Returns ``(value, roundoff_bound)``.  For real ``mu`` only the nodes
    ``k = 0..N`` are evaluated and the result is real, unless ``full`` asks
    for the plain ``2N + 1`` node complex sum.
    """
    gt = params.gamma * point.t
    if gt > MAX_GAMMA_T:
        raise DomainError(f"gamma*t = {gt} overflows the exponent range")
    k = params.n_nodes
    halved = order.real_mu and not full
    if halved:
        u = params.step * np.arange(k + 1, dtype=float)
    else:
        u = params.step * np.arange(-k, k + 1, dtype=float)
    g = _g(u, order.lam, order.mu, point.t, abs(point.x), params.gamma)
    scale = params.step / (2.0 * math.pi)
    # correctly rounded sums: the result no longer depends on summation order
    if halved:
        value = scale * math.fsum(np.concatenate((g.imag[:1], 2.0 * g.imag[1:])))
        bound = sys.float_info.epsilon * scale * 2.0 * float(np.abs(g).sum())
        return value, bound
    value = complex(scale * math.fsum(g.imag), -scale * math.fsum(g.real))
    bound = sys.float_info.epsilon * scale * float(np.abs(g).sum())
    return value, bound


def _warn_im_mu(mu: complex):
    if abs(mu.imag) > IM_MU_WARN:
        warnings.warn(
            f"|Im(mu)| = {abs(mu.imag)} > {IM_MU_WARN}: the error bound carries "
            "exp(2 pi Im mu) and the node count is not adjusted for it",
            AccuracyWarning, stacklevel=3)


def wright_eval(order: WrightOrder, point: EvalPoint,
                tol: ToleranceProfile | None = None, full: bool = False) -> EvalResult:
    """Evaluate ``f_{lam,mu}(t; x)``.

    ``x = 0`` is answered directly as ``t^(mu-1)/Gamma(mu)``.  ``full``
    forces the complex ``2N + 1`` node sum even for real ``mu`` (mostly of
    use for checking the halved sum).
    """
    tol = DEFAULT_TOLERANCE if tol is None else tol
    params = select_contour(order.mu, point.t, tol)
    est = tol.eps_machine * math.exp(params.gamma * point.t)
    _warn_im_mu(order.mu)
    if point.x == 0.0:
        mu = order.mu
        if order.real_mu:
            value = point.t ** (mu.real - 1.0) * recip_gamma(mu.real)
        else:
            value = complex(np.exp((mu - 1.0) * math.log(point.t))) * recip_gamma(mu)
        return EvalResult(value, params, est, 0.0)
    value, bound = trapezoid_sum(order, point, params, full=full)
    return EvalResult(value, params, est, bound)


def wright(lam: float, mu: complex, t: float, x: float,
           tol: ToleranceProfile | None = None):
    """Shorthand for ``wright_eval(...).value``."""
    return wright_eval(WrightOrder(lam, mu), EvalPoint(t, x), tol).value


def wright_grid(order: WrightOrder, t, x, tol: ToleranceProfile | None = None) -> np.ndarray:
    """``f_{lam,mu}(t; x)`` on broadcast arrays ``t`` and ``x``.

    The selector makes ``gamma t`` and ``h`` independent of ``t``, so the
    same scaled nodes serve every time level and the whole grid is one
    vectorised sum.  Returns a float array for real ``mu``, complex
    otherwise; ``x = 0`` entries use the closed form like
    :func:`wright_eval`.
    """
    tol = DEFAULT_TOLERANCE if tol is None else tol
    t_arr, x_arr = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    if not np.all(np.isfinite(t_arr)) or np.any(t_arr <= 0.0):
        raise DomainError("t must be finite and positive")
    if not np.all(np.isfinite(x_arr)):
        raise DomainError("x must be finite")
    _warn_im_mu(order.mu)
    base = select_contour(order.mu, 1.0, tol)
    gt = base.gamma
    if gt > MAX_GAMMA_T:
        raise DomainError(f"gamma*t = {gt} overflows the exponent range")
    halved = order.real_mu
    k = base.n_nodes
    idx = np.arange(k + 1) if halved else np.arange(-k, k + 1)
    u = base.step * idx.astype(float)

    tt = t_arr[..., None]
    gamma = gt / tt
    g = _g(u, order.lam, order.mu, tt, np.abs(x_arr)[..., None], gamma)
    out = _weights_sum(g, base.step, halved)

    zero = x_arr == 0.0
    if np.any(zero):
        mu = order.mu
        if halved:
            at0 = t_arr[zero] ** (mu.real - 1.0) * recip_gamma(mu.real)
        else:
            at0 = np.exp((mu - 1.0) * np.log(t_arr[zero])) * recip_gamma(mu)
        out = np.array(out, copy=True)
        out[zero] = at0
    return out


def mainardi_eval(nu, z, tol: ToleranceProfile | None = None):
    """Mainardi function ``M_nu(z) = W_{-nu,1-nu}(-z)`` for ``z >= 0``.

    ``nu`` may be 0 (giving ``exp(-z)``) up to but excluding 1.  ``z`` may be
    a scalar or an array; arrays are evaluated in one vectorised sum.
    """
    nu = float(nu)
    if not 0.0 <= nu < 1.0:
        raise DomainError(f"nu must lie in [0, 1), got {nu}")
    order = WrightOrder(-nu, 1.0 - nu)
    if np.ndim(z) == 0:
        zf = float(z)
        if not zf >= 0.0:
            raise DomainError(f"z must be nonnegative, got {z}")
        return float(wright_eval(order, EvalPoint(1.0, zf), tol).value)
    za = np.asarray(z, dtype=float)
    if np.any(~(za >= 0.0)):
        raise DomainError("z must be nonnegative")
    return wright_grid(order, 1.0, za, tol)
