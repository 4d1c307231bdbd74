"""Exception and warning types shared across the package."""


class WrightError(Exception):
    """Base class for all errors raised by wright2k."""


class DomainError(WrightError, ValueError):
    """An argument lies outside the supported parameter range."""


class InfeasibleToleranceError(DomainError):
    """The requested accuracy cannot be met at the working precision."""


class RangeError(WrightError, ValueError):
    """An oracle was asked for a value outside its validated range."""


class IterationLimitError(WrightError, RuntimeError):
    """An iterative procedure hit its iteration cap before converging."""


class GridMismatchError(WrightError, ValueError):
    """Two grid functions that must share a grid do not."""


class AccuracyWarning(UserWarning):
    """The computed value may not meet the requested accuracy."""


class TruncationWarning(UserWarning):
    """A kernel has not decayed at the edges of the computational domain."""
