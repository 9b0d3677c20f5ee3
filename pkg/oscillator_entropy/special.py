"""Hypergeometric kernels of the closed-form entropy, log-factorials and constants.

Two kernels appear at every Hermite zero x:

* ``2F2(1, 1; 3/2, 2; -x^2)``, an alternating series. Small arguments are
  summed directly (pair arithmetic in extended mode). Larger arguments use
  ``x^2 2F2(1,1;3/2,2;-x^2) = 2 int_0^x F(t) dt`` with Dawson's function F,
  which has no cancellation at all.
* ``1F1(k; 1/2; -x^2)``, summed after the Kummer transformation
  ``1F1(k;1/2;-x^2) = exp(-x^2) 1F1(1/2-k;1/2;x^2)``, whose terms keep a
  fixed sign after the first k.

Every evaluation returns a :class:`SeriesResult` with an error estimate;
kernels raise :class:`~oscillator_entropy.errors.SeriesRangeError` instead of
returning a value outside the 1e-12 budget.
"""
import logging
import math
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import dawsn

from . import ddouble
from .config import Precision, resolve_precision
from .ddouble import DoubleDouble
from .errors import SeriesRangeError

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286060651209008240243
MAX_TERMS = 10_000
ERROR_BUDGET = 1e-12
# |x| up to here covers the Hermite zeros of degree <= 300
GUARANTEED_RANGE = 25.0

# largest x^2 summed as a power series before switching to the Dawson integral
_F22_SERIES_LIMIT = {"double": 4.0, "extended": 40.0}
_UNIT = {"double": 2.0 ** -53, "extended": ddouble.EPS}
# relative error of exp(-x^2); the pair exp squares its reduced argument ten times
_EXP_ERROR = {"double": 2.0 ** -52, "extended": 2.0 ** -92}

Scalar = Union[float, DoubleDouble]


class SeriesResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    abs_error_estimate: float = Field(ge=0.0)
    terms_used: int = Field(ge=1)


# ---------------------------------------------------------------------
#  log-factorials
# ---------------------------------------------------------------------
_LN_FACTORIAL_TABLE_SIZE = 1024


def _build_ln_factorial_table() -> Tuple[float, ...]:
    acc = DoubleDouble(0.0)
    table = [0.0]
    for k in range(1, _LN_FACTORIAL_TABLE_SIZE + 1):
        acc = acc + math.log(k)
        table.append(float(acc))
    return tuple(table)


_LN_FACTORIAL = _build_ln_factorial_table()


def ln_factorial(n: int) -> float:
    """ln(n!), from a compensated cumulative table up to 1024 and lgamma beyond."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n <= _LN_FACTORIAL_TABLE_SIZE:
        return _LN_FACTORIAL[n]
    return math.lgamma(n + 1)


def binomial_root_weight(n: int, k: int) -> DoubleDouble:
    """C(n, k) (-1)^k 2^k / k in pair precision (the numerator is an exact integer)."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    numerator = math.comb(n, k) * (-2) ** k
    return DoubleDouble.from_int(numerator) / k


# ---------------------------------------------------------------------
#  helpers shared by both accumulation modes
# ---------------------------------------------------------------------
def _one(precision: Precision) -> Scalar:
    return DoubleDouble(1.0) if precision == "extended" else 1.0


def _square(x: float, precision: Precision) -> Scalar:
    return DoubleDouble.square(x) if precision == "extended" else x * x


def _exp(v: Scalar, precision: Precision) -> Scalar:
    if precision == "extended":
        return ddouble.exp(v)
    return math.exp(float(v))


def _check_argument(x: float) -> None:
    if not math.isfinite(x):
        raise ValueError(f"kernel argument must be finite, got {x}")
    if abs(x) > GUARANTEED_RANGE:
        logger.debug("kernel argument %.6g beyond the guaranteed range %.1f", x, GUARANTEED_RANGE)


def _enforce_budget(name: str, x: float, err: float) -> None:
    if not err <= ERROR_BUDGET:
        raise SeriesRangeError(
            f"{name} at x={x:.17g} misses the error budget ({err:.3e} > {ERROR_BUDGET:.0e})",
            argument=x,
        )


# ---------------------------------------------------------------------
#  2F2(1, 1; 3/2, 2; -x^2)
# ---------------------------------------------------------------------
def _f22_series(x: float, precision: Precision) -> Tuple[float, float, int]:
    unit = _UNIT[precision]
    z = float(x * x)
    zneg = -_square(x, precision)
    term = _one(precision)
    total = _one(precision)
    abs_sum = 1.0
    m = 0
    while True:
        term = term * zneg * (m + 1) / ((m + 1.5) * (m + 2))
        m += 1
        total = total + term
        t = abs(float(term))
        abs_sum += t
        ratio = z * (m + 1) / ((m + 1.5) * (m + 2))
        # alternating with shrinking terms: the tail is below the next term
        if ratio < 1.0 and t * ratio <= unit * abs(float(total)):
            tail = t * ratio
            break
        if m >= MAX_TERMS:
            raise SeriesRangeError(f"2F2 series exceeded {MAX_TERMS} terms at x={x}", argument=x)
    err = tail + 3.0 * m * unit * abs_sum
    return float(total), err, m + 1


_GL_HIGH = np.polynomial.legendre.leggauss(24)
_GL_LOW = np.polynomial.legendre.leggauss(12)


def _dawson_integral(x: float) -> Tuple[float, float, int]:
    """2 * int_0^|x| F(t) dt by composite Gauss–Legendre on unit panels."""
    a = abs(x)
    panels = max(1, math.ceil(a))
    edges = np.linspace(0.0, a, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])

    def composite(rule) -> float:
        nodes, weights = rule
        t = mid[:, None] + half[:, None] * nodes[None, :]
        return math.fsum((half[:, None] * weights[None, :] * dawsn(t)).ravel())

    high = 2.0 * composite(_GL_HIGH)
    low = 2.0 * composite(_GL_LOW)
    # positive summands: the fsum keeps the rounding relative to the total
    err = abs(high - low) + 8.0 * np.finfo(float).eps * abs(high)
    return high, err, panels * len(_GL_HIGH[0])


def f22_kernel(x: float, precision: Precision | None = None) -> SeriesResult:
    """2F2(1, 1; 3/2, 2; -x^2) with an absolute error estimate <= 1e-12."""
    precision = resolve_precision(precision)
    _check_argument(x)
    z = x * x
    if z == 0.0:
        return SeriesResult(value=1.0, abs_error_estimate=0.0, terms_used=1)
    if z <= _F22_SERIES_LIMIT[precision]:
        value, err, terms = _f22_series(x, precision)
    else:
        integral, ierr, terms = _dawson_integral(x)
        value, err = integral / z, ierr / z
        logger.debug("2F2 at x=%.6g via Dawson integral (%d nodes)", x, terms)
    _enforce_budget("2F2(1,1;3/2,2;-x^2)", x, err)
    return SeriesResult(value=value, abs_error_estimate=err, terms_used=terms)


# ---------------------------------------------------------------------
#  1F1(k; 1/2; -x^2)
# ---------------------------------------------------------------------
def f11_kummer_pair(k: int, x: float, precision: Precision | None = None) -> Tuple[Scalar, float, int]:
    """Kummer-transformed series for 1F1(k; 1/2; -x^2).

    Returns:
        ``(value, abs_error_estimate, terms_used)`` where ``value`` stays a
        :class:`DoubleDouble` in extended mode so callers can keep summing in
        pair precision.
    """
    precision = resolve_precision(precision)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_argument(x)
    unit = _UNIT[precision]
    zf = float(x * x)
    if zf == 0.0:
        return _one(precision), 0.0, 1
    z = _square(x, precision)
    a = 0.5 - k
    term = _one(precision)
    total = _one(precision)
    abs_sum = 1.0
    m = 0
    while True:
        term = term * z * (a + m) / ((0.5 + m) * (m + 1))
        m += 1
        total = total + term
        t = abs(float(term))
        if not math.isfinite(t):
            raise SeriesRangeError(f"1F1 Kummer series overflowed at x={x}", argument=x)
        abs_sum += t
        # past m ~ 2k the signs are fixed and the term ratios decrease
        if m > 2 * k + 1:
            ratio = zf * (a + m) / ((0.5 + m) * (m + 1))
            if ratio < 1.0:
                tail = t * ratio / (1.0 - ratio)
                if tail <= unit * abs(float(total)):
                    break
        if m >= MAX_TERMS:
            raise SeriesRangeError(f"1F1 series exceeded {MAX_TERMS} terms at x={x}", argument=x)
    if not math.isfinite(float(total)):
        raise SeriesRangeError(f"1F1 Kummer series overflowed at x={x}", argument=x)
    scale = _exp(-z, precision)
    value = total * scale
    err = float(scale) * (tail + 3.0 * m * unit * abs_sum) + _EXP_ERROR[precision] * abs(float(value))
    return value, err, m + 1


def f11_kernel(k: int, x: float, precision: Precision | None = None) -> SeriesResult:
    """1F1(k; 1/2; -x^2) with an absolute error estimate <= 1e-12."""
    value, err, terms = f11_kummer_pair(k, x, precision)
    _enforce_budget(f"1F1({k};1/2;-x^2)", x, err)
    return SeriesResult(value=float(value), abs_error_estimate=err, terms_used=terms)


def f11_direct(k: int, x: float) -> SeriesResult:
    """1F1(k; 1/2; -x^2) from the untransformed alternating series in pair precision.

    Only meant for moderate x (it loses about x^2/2.3 digits); it is the
    independent reference for the Kummer form.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_argument(x)
    unit = _UNIT["extended"]
    zf = x * x
    zneg = -DoubleDouble.square(x)
    term = DoubleDouble(1.0)
    total = DoubleDouble(1.0)
    abs_sum = 1.0
    m = 0
    while True:
        term = term * zneg * (k + m) / ((0.5 + m) * (m + 1))
        m += 1
        total = total + term
        t = abs(float(term))
        abs_sum += t
        ratio = zf * (k + m) / ((0.5 + m) * (m + 1))
        if ratio < 1.0 and t * ratio <= unit * max(abs(float(total)), 1e-300):
            tail = t * ratio
            break
        if m >= MAX_TERMS:
            raise SeriesRangeError(f"1F1 direct series exceeded {MAX_TERMS} terms", argument=x)
    err = tail + 3.0 * m * unit * abs_sum
    return SeriesResult(value=float(total), abs_error_estimate=err, terms_used=m + 1)
