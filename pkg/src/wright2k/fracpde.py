"""Green's-function solutions of time-fractional diffusion-wave problems.

Three problems on the real line, all with kernels that are Wright functions
of the second kind evaluated by :mod:`wright2k.core`:

* Cauchy problem, ``D_t^{2 nu} u = D u_xx`` with ``u(x, 0) = g`` (and
  ``u_t(x, 0) = p`` when ``nu > 1/2``), solved by periodic FFT convolution
  on a uniform grid;
* signalling problem on ``x > 0`` with boundary signal ``h(t)``, solved by
  adaptive quadrature of the time convolution;
* heat conduction in two rods in perfect thermal contact at ``x = 0``
  with an initial pulse at ``x = rho``.

``nu`` is the order over two (``2 nu`` is the time-derivative order); the
kernels are ``G_C = t^-nu M_nu(|x| t^-nu / sqrt D) / (2 sqrt D)`` and
``G_S = t^-1 F_nu(x t^-nu / sqrt D)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import ToleranceProfile, WrightOrder, mainardi_eval, wright_grid
from .errors import AccuracyWarning, DomainError, GridMismatchError, TruncationWarning

__all__ = [
    "GridFunction",
    "CauchyProblem",
    "TwoRodConfig",
    "SignallingSolution",
    "cauchy_green",
    "cauchy_green_primitive",
    "cauchy_solve",
    "signalling_green",
    "signalling_solve",
    "tworod_solve",
    "DEMO_RODS",
]

NU_CLAMP = 1.0 - 1e-8
EDGE_DECAY = 1e-12
MAX_PANELS = 2 ** 14


def _clamp_nu(nu: float) -> float:
    # nu = 1 is lam = -1, outside the second-kind range
    if nu == 1.0:
        warnings.warn("nu = 1 clamped to 1 - 1e-8 (lambda = -1 is not supported)",
                      AccuracyWarning, stacklevel=3)
        return NU_CLAMP
    return nu


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be finite and positive, got {value}")
    return value


# -- grids --------------------------------------------------------------------


@dataclass(frozen=True)
class GridFunction:
    """Samples on the uniform grid ``x_min + k dx``, ``k = 0..n-1``."""

    x_min: float
    dx: float
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 2 or n & (n - 1):
            raise DomainError(f"grid size must be a power of two, got {self.n}")
        _check_positive("dx", self.dx)
        vals = np.array(self.values, dtype=float)
        if vals.shape != (n,):
            raise DomainError(f"expected {n} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, fn: Callable, x_min: float, x_max: float, n: int) -> "GridFunction":
        """Sample ``fn`` on ``n`` points of ``[x_min, x_max)``."""
        dx = (x_max - x_min) / n
        x = x_min + dx * np.arange(n)
        return cls(x_min, dx, n, np.broadcast_to(fn(x), x.shape))

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    def same_grid(self, other: "GridFunction") -> bool:
        return self.n == other.n and self.x_min == other.x_min and self.dx == other.dx


@dataclass(frozen=True)
class CauchyProblem:
    nu: float
    diffusivity: float
    g: GridFunction
    p: Optional[GridFunction] = None

    def __post_init__(self):
        nu = float(self.nu)
        if not 0.0 < nu <= 1.0:
            raise DomainError(f"nu must lie in (0, 1], got {nu}")
        _check_positive("diffusivity", self.diffusivity)
        if (nu > 0.5) != (self.p is not None):
            raise DomainError("an initial velocity p is required exactly when nu > 1/2")
        if self.p is not None and not self.g.same_grid(self.p):
            raise GridMismatchError("g and p must share one grid")


# -- Cauchy problem -----------------------------------------------------------


def cauchy_green(nu: float, D: float, x, t: float,
                 tol: ToleranceProfile | None = None):
    """Green's function ``G_C(x, t; nu)`` of the Cauchy problem.

    Equal to ``f_{-nu,1-nu}(t; |x|/sqrt D) / (2 sqrt D)``; even in ``x``.
    ``x`` may be an array.
    """
    nu = float(nu)
    if not 0.0 < nu <= 1.0:
        raise DomainError(f"nu must lie in (0, 1], got {nu}")
    nu = _clamp_nu(nu)
    D = _check_positive("D", D)
    t = _check_positive("t", t)
    sd = math.sqrt(D)
    out = wright_grid(WrightOrder(-nu, 1.0 - nu), t, np.abs(np.asarray(x, dtype=float)) / sd, tol)
    out = out / (2.0 * sd)
    return float(out) if np.ndim(out) == 0 else out


def cauchy_green_primitive(nu: float, D: float, x, t: float,
                           tol: ToleranceProfile | None = None):
    """Time primitive of ``G_C``, ``f_{-nu,2-nu}(t; |x|/sqrt D) / (2 sqrt D)``.

    Dividing the Laplace image by ``s`` raises ``mu`` by one.  Only needed
    (and only accepted) for ``1/2 < nu <= 1``.
    """
    nu = float(nu)
    if not 0.5 < nu <= 1.0:
        raise DomainError(f"the primitive kernel is used for nu in (1/2, 1], got {nu}")
    nu = _clamp_nu(nu)
    D = _check_positive("D", D)
    t = _check_positive("t", t)
    sd = math.sqrt(D)
    out = wright_grid(WrightOrder(-nu, 2.0 - nu), t, np.abs(np.asarray(x, dtype=float)) / sd, tol)
    out = out / (2.0 * sd)
    return float(out) if np.ndim(out) == 0 else out


def _periodic_conv(values: np.ndarray, kernel: np.ndarray, dx: float) -> np.ndarray:
    # kernel is sampled at offsets (k - n/2) dx, hence the half shift
    return dx * np.fft.fftshift(np.real(np.fft.ifft(np.fft.fft(values) * np.fft.fft(kernel))))


def _edge_check(kernel: np.ndarray, what: str):
    peak = float(np.max(np.abs(kernel)))
    edge = max(abs(float(kernel[0])), abs(float(kernel[-1])))
    if peak > 0.0 and edge > EDGE_DECAY * peak:
        warnings.warn(
            f"{what} has not decayed at the grid edge ({edge:.3e} vs peak {peak:.3e}); "
            "periodic wrap-around will pollute the solution",
            TruncationWarning, stacklevel=3)


def cauchy_solve(problem: CauchyProblem, t: float,
                 tol: ToleranceProfile | None = None) -> GridFunction:
    """Solution of the Cauchy problem at time ``t`` on the datum's grid.

    ``u = dx * (g (*) G_C)`` plus ``dx * (p (*) G_C^(1))`` when ``nu > 1/2``,
    where ``(*)`` is circular convolution by FFT.  The kernels are sampled
    at the grid offsets ``(k - n/2) dx``; a :class:`TruncationWarning` is
    issued when they have not decayed to ``1e-12`` of their peak at the
    ends, since the wrap-around then reaches the solution.
    """
    t = _check_positive("t", t)
    g = problem.g
    offsets = g.dx * (np.arange(g.n) - g.n // 2)
    kern = cauchy_green(problem.nu, problem.diffusivity, offsets, t, tol)
    _edge_check(kern, "G_C")
    u = _periodic_conv(g.values, kern, g.dx)
    if problem.p is not None:
        kern1 = cauchy_green_primitive(problem.nu, problem.diffusivity, offsets, t, tol)
        _edge_check(kern1, "G_C primitive")
        u = u + _periodic_conv(problem.p.values, kern1, g.dx)
    return GridFunction(g.x_min, g.dx, g.n, u)


# -- signalling problem -------------------------------------------------------


def signalling_green(nu: float, D: float, x: float, t,
                     tol: ToleranceProfile | None = None):
    """Green's function ``G_S(x, t; nu) = f_{-nu,0}(t; x/sqrt D)`` for ``x > 0``.

    ``t`` may be an array of positive times.
    """
    nu = float(nu)
    if not 0.0 < nu <= 0.5:
        raise DomainError(f"signalling is supported for nu in (0, 1/2], got {nu}")
    D = _check_positive("D", D)
    x = _check_positive("x", x)
    out = wright_grid(WrightOrder(-nu, 0.0), t, x / math.sqrt(D), tol)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SignallingSolution:
    """``u(x, t)`` on the requested times.

    ``converged[i]`` is False when the panel cap was reached before the
    error estimate met the tolerance; ``u[i]`` is then the best estimate.
    """

    t: np.ndarray
    u: np.ndarray
    error_estimate: np.ndarray
    converged: np.ndarray
    panels: np.ndarray


def _eval_signal(h: Callable, s: np.ndarray) -> np.ndarray:
    try:
        vals = h(s)
    except (TypeError, ValueError):
        # scalar-only callable, e.g. one that branches on its argument
        vals = np.vectorize(h, otypes=[float])(s)
    return np.broadcast_to(np.asarray(vals, dtype=float), s.shape)


def _initial_panels(t: float) -> np.ndarray:
    # uniform start, then geometric grading toward tau = t where h(t - tau)
    # starts and may jump
    uniform = np.linspace(0.0, t, 17)
    graded = t * (1.0 - 2.0 ** -np.arange(5.0, 21.0))
    return np.unique(np.concatenate((uniform, graded)))


def _convolve_at(h, nu, D, x, t, quad_tol, tol):
    def phi(tau):
        out = np.zeros_like(tau)
        pos = tau > 0.0
        if np.any(pos):
            out[pos] = signalling_green(nu, D, x, tau[pos], tol) * _eval_signal(h, t - tau[pos])
        return out

    edges = _initial_panels(t)
    a, b = edges[:-1], edges[1:]
    total = 0.0
    err_total = 0.0
    done = 0
    while a.size:
        # two trapezoid levels per panel and their Richardson combinations
        w = b - a
        pts = a[:, None] + w[:, None] * np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        f = phi(pts.ravel()).reshape(pts.shape)
        t1 = 0.5 * w * (f[:, 0] + f[:, 4])
        t2 = 0.5 * t1 + 0.5 * w * f[:, 2]
        t4 = 0.5 * t2 + 0.25 * w * (f[:, 1] + f[:, 3])
        r1 = (4.0 * t2 - t1) / 3.0
        r2 = (4.0 * t4 - t2) / 3.0
        est = np.abs(r2 - r1) / 15.0
        ok = est <= quad_tol * w / t
        live = a.size + done
        if live + int(np.count_nonzero(~ok)) > MAX_PANELS:
            total += math.fsum(r2 + (r2 - r1) / 15.0)
            err_total += float(est.sum())
            return total, err_total, False, live
        total += math.fsum(r2[ok] + (r2[ok] - r1[ok]) / 15.0)
        err_total += float(est[ok].sum())
        done += int(np.count_nonzero(ok))
        mid = 0.5 * (a[~ok] + b[~ok])
        a, b = np.concatenate((a[~ok], mid)), np.concatenate((mid, b[~ok]))
    return total, err_total, True, done


def signalling_solve(h: Callable, nu: float, D: float, x: float, t_grid,
                     quad_tol: float = 1e-10,
                     tol: ToleranceProfile | None = None) -> SignallingSolution:
    """Solve the signalling problem ``u(x, t) = int_0^t G_S(x, tau) h(t - tau) dtau``.

    The time convolution is computed per ``t`` by adaptive bisection of
    panels: each panel carries trapezoid sums on one, two and four
    subintervals, their Richardson extrapolants give an error estimate,
    and panels are split until the estimate falls below ``quad_tol``
    (distributed over ``[0, t]`` in proportion to panel width).  The
    integrand is set to zero at ``tau = 0`` where ``G_S`` vanishes faster
    than any power.  At most ``2**14`` panels are used per time level.

    ``h`` receives arrays of times; scalar-only callables are vectorised.
    """
    nu = float(nu)
    if not 0.0 < nu <= 0.5:
        raise DomainError(f"signalling is supported for nu in (0, 1/2], got {nu}")
    D = _check_positive("D", D)
    x = _check_positive("x", x)
    quad_tol = _check_positive("quad_tol", quad_tol)
    times = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if not np.all(np.isfinite(times)) or np.any(times <= 0.0):
        raise DomainError("t_grid must contain finite positive times")
    u = np.empty(times.shape)
    err = np.empty(times.shape)
    conv = np.empty(times.shape, dtype=bool)
    panels = np.empty(times.shape, dtype=int)
    for i, t in enumerate(times):
        u[i], err[i], conv[i], panels[i] = _convolve_at(h, nu, D, x, float(t), quad_tol, tol)
    return SignallingSolution(times, u, err, conv, panels)


# -- two rods in perfect thermal contact ----------------------------------------


@dataclass(frozen=True)
class TwoRodConfig:
    """Two semi-infinite rods joined at ``x = 0`` with a pulse at ``x = rho``.

    Rod 1 occupies ``x > 0`` and rod 2 ``x < 0``.  ``alpha`` is the order of
    the time derivative.
    """

    p0: float
    rho: float
    a1: float
    a2: float
    k1: float
    k2: float
    alpha: float
    eta: float = field(init=False)

    def __post_init__(self):
        for name in ("rho", "a1", "a2", "k1", "k2"):
            _check_positive(name, getattr(self, name))
        if not math.isfinite(self.p0):
            raise DomainError("p0 must be finite")
        if not 0.0 < self.alpha <= 2.0:
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        eta = self.k1 * math.sqrt(self.a2) / (self.k2 * math.sqrt(self.a1))
        object.__setattr__(self, "eta", eta)


# the parameter set used by the CLI demo
DEMO_RODS = dict(p0=1.0, rho=0.5, a1=3.0, a2=1.0, k1=2.0, k2=6.0)


def _rod_nu(alpha: float) -> float:
    nu = 0.5 * alpha
    if nu >= 1.0:
        warnings.warn("alpha = 2 clamped to nu = 1 - 1e-8 (lambda = -1 is not supported)",
                      AccuracyWarning, stacklevel=3)
        return NU_CLAMP
    return nu


def tworod_solve(config: TwoRodConfig, x: float, t: float,
                 tol: ToleranceProfile | None = None) -> float:
    """Temperature ``T(x, t)`` of the two-rod problem.

    ``x > 0`` and ``x = +0.0`` use the rod-1 formula, ``x < 0`` and
    ``x = -0.0`` the rod-2 formula, so the two one-sided limits at the
    contact point can be compared directly.
    """
    x = float(x)
    t = _check_positive("t", t)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    nu = _rod_nu(config.alpha)
    ta = t ** (0.5 * config.alpha)
    s1 = math.sqrt(config.a1) * ta
    eta = config.eta
    if x > 0.0 or (x == 0.0 and math.copysign(1.0, x) > 0.0):
        direct = mainardi_eval(nu, abs(x - config.rho) / s1, tol)
        image = mainardi_eval(nu, (x + config.rho) / s1, tol)
        return config.p0 / (2.0 * s1) * (direct + (eta - 1.0) / (eta + 1.0) * image)
    s2 = math.sqrt(config.a2) * ta
    arg = abs(x) / s2 + config.rho / s1
    return eta * config.p0 / ((eta + 1.0) * s1) * mainardi_eval(nu, arg, tol)
