"""Wright functions of the second kind via parabolic-contour Laplace inversion."""

from .core import (
    DEFAULT_TOLERANCE,
    ContourParams,
    EvalPoint,
    EvalResult,
    ToleranceProfile,
    WrightOrder,
    balanced_params,
    contour_point,
    integrand,
    mainardi_eval,
    select_contour,
    trapezoid_sum,
    wright,
    wright_eval,
    wright_grid,
)
from .errors import (
    AccuracyWarning,
    DomainError,
    GridMismatchError,
    InfeasibleToleranceError,
    IterationLimitError,
    RangeError,
    TruncationWarning,
    WrightError,
)
from .oracles import airy_ai, closed_form_mainardi, recip_gamma, wright_series

__version__ = "0.1.0"
