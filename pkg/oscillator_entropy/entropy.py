"""Exact Shannon entropies of the D-dimensional harmonic oscillator.

The position entropy of a Cartesian state {n_1, ..., n_D} with strength alpha
separates into one-dimensional pieces,

    S[rho] = sum_i S_1(n_i) - (D/2) ln(alpha),

and each S_1(n) is a finite sum over the zeros x_{n,j} of H_n:

    S_1(n) = ln(2^n n! sqrt(pi)) + n + 1/2 + n*gamma
             - 2 sum_j x_j^2 2F2(1,1;3/2,2;-x_j^2)
             + sum_k C(n,k) (-2)^k / k  sum_j 1F1(k;1/2;-x_j^2).

All entropies are in nats. The momentum entropy is the position entropy at
1/alpha, so the uncertainty sum does not depend on alpha.
"""
import logging
import math
from typing import Literal, Tuple

import mpmath
from mpmath.libmp import NoConvergence
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    computed_field,
    model_validator,
)

from .cache import locked_memo
from .config import Precision, resolve_precision
from .ddouble import DoubleDouble, EPS as PAIR_EPS, dd_sum
from .errors import SeriesRangeError
from .hermite import hermite_roots
from .special import (
    EULER_GAMMA,
    SeriesResult,
    binomial_root_weight,
    f11_kummer_pair,
    f22_kernel,
    ln_factorial,
)

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
LN_PI = math.log(math.pi)
# D ln(e pi): the entropic uncertainty bound, saturated by the ground state
BBM_PER_DIMENSION = 1.0 + LN_PI

# largest absolute error S_1(n) may carry before it is refused
ENTROPY_ERROR_BUDGET = 1e-10
LOG10_3 = math.log10(3.0)
MP_GUARD_DIGITS = 20
# highest degree whose binomial 1F1 sum stays in the fast accumulation mode
_FAST_DEGREE_LIMIT = {"double": 5, "extended": 15}

Family = Literal["ground", "one-excited", "all-but-one", "all-ones"]
FAMILIES: Tuple[Family, ...] = ("ground", "one-excited", "all-but-one", "all-ones")


class StateSpec(BaseModel):
    """A stationary state: dimension, hyperquantum numbers and oscillator strength."""

    model_config = ConfigDict(frozen=True)

    dims: int = Field(ge=1)
    occupations: Tuple[NonNegativeInt, ...]
    alpha: float = Field(default=1.0, gt=0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_length(self) -> "StateSpec":
        if len(self.occupations) != self.dims:
            raise ValueError(
                f"occupations has {len(self.occupations)} entries but dims={self.dims}"
            )
        return self

    @computed_field
    @property
    def total(self) -> int:
        """Principal quantum number N."""
        return sum(self.occupations)

    @classmethod
    def from_occupations(cls, occupations, alpha: float = 1.0) -> "StateSpec":
        occupations = tuple(occupations)
        return cls(dims=len(occupations), occupations=occupations, alpha=alpha)

    def with_alpha(self, alpha: float) -> "StateSpec":
        return StateSpec(dims=self.dims, occupations=self.occupations, alpha=alpha)


class EntropyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    position_entropy: float
    momentum_entropy: float
    uncertainty_sum: float
    energy: float
    per_dimension_position: Tuple[float, ...]
    abs_error_estimate: float = Field(ge=0.0)


class RootKernelSums(BaseModel):
    """The two root-sums of S_1(n) for one degree."""

    model_config = ConfigDict(frozen=True)

    degree: int
    # sum_j x_j^2 2F2(1,1;3/2,2;-x_j^2)
    f22_sum: float
    # sum_k C(n,k)(-2)^k/k sum_j 1F1(k;1/2;-x_j^2)
    f11_sum: float
    abs_error_estimate: float


def configuration_state(family: Family, dims: int, alpha: float = 1.0) -> StateSpec:
    """The four state families plotted against D."""
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if family == "ground":
        ns = [0] * dims
    elif family == "one-excited":
        ns = [1] + [0] * (dims - 1)
    elif family == "all-but-one":
        ns = [1] * (dims - 1) + [0]
    elif family == "all-ones":
        ns = [1] * dims
    else:
        raise ValueError(f"unknown configuration family {family!r}")
    return StateSpec.from_occupations(ns, alpha)


# ---------------------------------------------------------------------
#  Per-degree building blocks
# ---------------------------------------------------------------------
def _ln_hermite_norm(n: int) -> float:
    """ln(2^n n! sqrt(pi)), the squared norm of H_n against exp(-x^2)."""
    return n * LN2 + ln_factorial(n) + 0.5 * LN_PI


def _binomial_f11_sum(n: int, points, precision: Precision) -> Tuple[float, float]:
    """sum_k C(n,k)(-2)^k/k sum_{(x, mult)} mult * 1F1(k;1/2;-x^2), with error.

    The binomial weights reach 3^n/n in size and cancel. Degrees up to
    ``_FAST_DEGREE_LIMIT[precision]`` are summed in the accumulation
    precision; beyond it the sum is carried in mpmath with
    ``n log10(3) + MP_GUARD_DIGITS`` digits.
    """
    if n > _FAST_DEGREE_LIMIT[precision]:
        return _binomial_f11_sum_mp(n, points)

    unit = 2.0 ** -53 if precision == "double" else PAIR_EPS
    total = DoubleDouble(0.0) if precision == "extended" else 0.0
    err = 0.0
    magnitude = 0.0
    for k in range(1, n + 1):
        weight = binomial_root_weight(n, k)
        if precision == "double":
            weight = float(weight)
        kernels = [f11_kummer_pair(k, x, precision) for x, _ in points]
        terms = [value * mult for (value, _, _), (_, mult) in zip(kernels, points)]
        inner = dd_sum(terms) if precision == "extended" else math.fsum(terms)
        inner_err = math.fsum(mult * e for (_, e, _), (_, mult) in zip(kernels, points))
        contribution = weight * inner
        total = total + contribution
        err += abs(float(weight)) * inner_err
        magnitude += abs(float(contribution))
    err += 4.0 * unit * magnitude
    return float(total), err


def _binomial_f11_sum_mp(n: int, points) -> Tuple[float, float]:
    """The binomial 1F1 sum in a private mpmath context sized to the cancellation."""
    digits = math.ceil(n * LOG10_3) + MP_GUARD_DIGITS
    ctx = mpmath.MPContext()
    ctx.dps = digits
    half = ctx.mpf(0.5)
    # the zeros are taken as exact doubles
    args = [(-ctx.mpf(x) ** 2, mult) for x, mult in points]
    total = ctx.zero
    magnitude = ctx.zero
    try:
        for k in range(1, n + 1):
            weight = ctx.mpf(math.comb(n, k) * (-2) ** k) / k
            values = [mult * ctx.hyp1f1(k, half, z) for z, mult in args]
            total += weight * ctx.fsum(values)
            magnitude += abs(weight) * ctx.fsum(abs(v) for v in values)
    except NoConvergence as exc:
        raise SeriesRangeError(f"1F1 sum for n={n} did not converge at {digits} digits") from exc
    err = float(magnitude) * 10.0 ** (3 - digits)
    logger.debug("binomial 1F1 sum for n=%d carried at %d digits", n, digits)
    return float(total), err


@locked_memo
def root_kernel_sums(n: int, precision: Precision) -> RootKernelSums:
    """Both root-sums for degree n, memoized per (degree, precision)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return RootKernelSums(degree=0, f22_sum=0.0, f11_sum=0.0, abs_error_estimate=0.0)

    roots = hermite_roots(n)
    # H_n zeros come in +/- pairs and both kernels are even in x
    points = roots.nonnegative()

    f22_terms = []
    f22_err = 0.0
    for x, mult in points:
        res = f22_kernel(x, precision)
        f22_terms.append(mult * x * x * res.value)
        f22_err += mult * x * x * res.abs_error_estimate
    f22_sum = math.fsum(f22_terms)

    f11_sum, f11_err = _binomial_f11_sum(n, points, precision)

    # The log potential is stationary at every zero of H_n, so a root error
    # delta only enters at second order.
    root_term = roots.accuracy ** 2 * n * (2 * n + 1)

    err = 2.0 * f22_err + f11_err + root_term
    logger.debug("root kernel sums for n=%d (%s): error estimate %.3e", n, precision, err)
    if not err <= ENTROPY_ERROR_BUDGET:
        raise SeriesRangeError(
            f"root sums for n={n} ({precision}) miss the error budget "
            f"({err:.3e} > {ENTROPY_ERROR_BUDGET:.0e})"
        )
    return RootKernelSums(degree=n, f22_sum=f22_sum, f11_sum=f11_sum, abs_error_estimate=err)


def entropy_1d_with_error(n: int, precision: Precision | None = None) -> Tuple[float, float]:
    """S_1(n) at alpha = 1 and its absolute error estimate."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    sums = root_kernel_sums(n, resolve_precision(precision))
    value = math.fsum([
        _ln_hermite_norm(n),
        float(n),
        0.5,
        n * EULER_GAMMA,
        -2.0 * sums.f22_sum,
        sums.f11_sum,
    ])
    rounding = 8.0 * 2.0 ** -53 * (abs(value) + abs(sums.f11_sum) + 2.0 * sums.f22_sum)
    return value, sums.abs_error_estimate + rounding


def entropy_1d(n: int, precision: Precision | None = None) -> float:
    """Position entropy of the 1-D oscillator state n at alpha = 1, in nats."""
    return entropy_1d_with_error(n, precision)[0]


# ---------------------------------------------------------------------
#  Log potential and the Hermite entropy functional
# ---------------------------------------------------------------------
def log_potential_scaled(n: int, x: float, precision: Precision | None = None) -> SeriesResult:
    """V_n(x) / (2^n n! sqrt(pi)), the form that never overflows."""
    if n < 1:
        raise ValueError("log potential needs n >= 1")
    precision = resolve_precision(precision)
    f22 = f22_kernel(x, precision)
    k_sum, k_err = _binomial_f11_sum(n, ((x, 1),), precision)
    value = math.fsum([LN2, 0.5 * EULER_GAMMA, -x * x * f22.value, 0.5 * k_sum])
    err = x * x * f22.abs_error_estimate + 0.5 * k_err + 4.0 * 2.0 ** -53 * abs(value)
    return SeriesResult(value=value, abs_error_estimate=err, terms_used=n + 1)


def log_potential(n: int, x: float, precision: Precision | None = None) -> float:
    """Logarithmic potential V_n(x) = -int ln|x - t| H_n(t)^2 exp(-t^2) dt.

    Raises:
        SeriesRangeError: when 2^n n! sqrt(pi) overflows; use
            :func:`log_potential_scaled` instead.
    """
    scaled = log_potential_scaled(n, x, precision).value
    try:
        return scaled * math.exp(_ln_hermite_norm(n))
    except OverflowError as exc:
        raise SeriesRangeError(f"V_{n} overflows a double; use the scaled form") from exc


def entropy_functional_scaled(n: int, precision: Precision | None = None) -> float:
    """E_n(H) / (2^n n! sqrt(pi)) = 2 sum x^2 2F2 - (binomial 1F1 sum) - n gamma."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return 0.0
    sums = root_kernel_sums(n, resolve_precision(precision))
    return math.fsum([2.0 * sums.f22_sum, -sums.f11_sum, -n * EULER_GAMMA])


def entropy_functional(n: int, precision: Precision | None = None) -> float:
    """E_n(H) = int_R H_n^2 ln(H_n^2) exp(-x^2) dx over the full real line.

    Equals 2^n n! sqrt(pi) ln(2^{2n}) - 2 sum_k V_n(x_{n,k}).
    """
    scaled = entropy_functional_scaled(n, precision)
    if n == 0:
        return 0.0
    try:
        return scaled * math.exp(_ln_hermite_norm(n))
    except OverflowError as exc:
        raise SeriesRangeError(f"E_{n}(H) overflows a double; use the scaled form") from exc


# ---------------------------------------------------------------------
#  D-dimensional quantities
# ---------------------------------------------------------------------
def energy(state: StateSpec) -> float:
    """(N + D/2) * omega with omega = alpha, in atomic units."""
    return (state.total + 0.5 * state.dims) * state.alpha


def i1_component(state: StateSpec) -> float:
    """N ln 2 + sum ln(n_i!) + (D/2) ln(pi/alpha)."""
    return math.fsum(
        [state.total * LN2, 0.5 * state.dims * (LN_PI - math.log(state.alpha))]
        + [ln_factorial(n) for n in state.occupations]
    )


def i2_component(state: StateSpec) -> float:
    """alpha <r^2> = N + D/2, independent of alpha."""
    return state.total + 0.5 * state.dims


def i3_component(state: StateSpec, precision: Precision | None = None) -> float:
    """-sum_i E_{n_i}(H) / (2^{n_i} n_i! sqrt(pi)), the additive form of the third integral."""
    return -math.fsum(entropy_functional_scaled(n, precision) for n in state.occupations)


def _per_dimension(state: StateSpec, precision: Precision | None):
    shift = 0.5 * math.log(state.alpha)
    values, errors = [], []
    for n in state.occupations:
        value, err = entropy_1d_with_error(n, precision)
        values.append(value)
        errors.append(err)
    return values, errors, shift


def position_entropy(state: StateSpec, precision: Precision | None = None) -> float:
    """S[rho] in nats: sum_i S_1(n_i) - (D/2) ln alpha."""
    values, _, shift = _per_dimension(state, precision)
    return math.fsum(values) - state.dims * shift


def momentum_entropy(state: StateSpec, precision: Precision | None = None) -> float:
    """S[gamma] in nats: the position entropy at 1/alpha."""
    values, _, shift = _per_dimension(state, precision)
    return math.fsum(values) + state.dims * shift


def uncertainty_sum(state: StateSpec, precision: Precision | None = None) -> float:
    """S[rho] + S[gamma] = 2 sum_i S_1(n_i); alpha cancels exactly."""
    values, _, _ = _per_dimension(state, precision)
    return 2.0 * math.fsum(values)


def entropy_report(state: StateSpec, precision: Precision | None = None) -> EntropyReport:
    """Every output for one state, with the propagated error estimate."""
    values, errors, shift = _per_dimension(state, precision)
    per_dimension = tuple(v - shift for v in values)
    base = math.fsum(values)
    return EntropyReport(
        position_entropy=math.fsum(per_dimension),
        momentum_entropy=base + state.dims * shift,
        uncertainty_sum=2.0 * base,
        energy=energy(state),
        per_dimension_position=per_dimension,
        abs_error_estimate=math.fsum(errors),
    )
