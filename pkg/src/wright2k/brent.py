"""Bounded scalar minimisation used by the contour selector."""

from __future__ import annotations

import math
from typing import Callable

from scipy.optimize import minimize_scalar

from .errors import DomainError, IterationLimitError

MAX_ITER = 200


def brent_min(f: Callable[[float], float], a: float, b: float,
              xtol: float = 1e-4, max_iter: int = MAX_ITER) -> tuple[float, float]:
    """Local minimiser of ``f`` on ``[a, b]`` by Brent's bounded method.

    This is a thin wrapper over :func:`scipy.optimize.minimize_scalar`
    (golden section plus parabolic interpolation) that turns the
    "maximum iterations reached" status into :class:`IterationLimitError`
    instead of returning a silently unconverged point.

    Returns ``(c_star, f(c_star))``.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"brent_min needs finite a < b, got [{a}, {b}]")
    if xtol <= 0:
        raise DomainError("xtol must be positive")
    res = minimize_scalar(f, bounds=(a, b), method="bounded",
                          options={"xatol": xtol, "maxiter": max_iter})
    if res.status != 0:
        raise IterationLimitError(
            f"Brent minimisation did not converge in {max_iter} iterations: {res.message}")
    return float(res.x), float(res.fun)
