"""Exception hierarchy shared by the numeric modules and the CLI."""
from typing import Optional


class OscillatorEntropyError(Exception):
    """Base class for numeric failures (range, root finding, convergence)."""


class SeriesRangeError(OscillatorEntropyError, ArithmeticError):
    """A hypergeometric kernel cannot meet its error budget at the requested argument."""

    def __init__(self, message: str, argument: Optional[float] = None):
        super().__init__(message)
        self.argument = argument


class RootFindingError(OscillatorEntropyError):
    """Newton polishing of Hermite zeros did not reach the accuracy target."""


class QuadratureNonConvergenceError(OscillatorEntropyError):
    """Adaptive quadrature ran out of subdivisions.

    Carries the best estimate reached so far and its error bound so callers can
    still report something useful.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate:.17g}, error_bound={error_bound:.3e})")
        self.estimate = estimate
        self.error_bound = error_bound
