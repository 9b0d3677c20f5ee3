"""Direct numerical entropies by adaptive quadrature.

The closed form in :mod:`oscillator_entropy.entropy` is checked against

    S_1(n, alpha) = -int rho_n(x) ln rho_n(x) dx,
    rho_n(x) = sqrt(alpha/pi) / (2^n n!) exp(-alpha x^2) H_n(sqrt(alpha) x)^2,

integrated panel by panel between the zeros of rho_n (where rho ln rho has
unbounded derivatives) with a bisecting Gauss–Legendre rule. The tails beyond
a cutoff are not integrated; an analytic bound on them goes into the error.
"""
import heapq
import itertools
import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .cache import locked_memo
from .errors import QuadratureNonConvergenceError
from .hermite import gauss_hermite, hermite_log_abs, hermite_roots
from .special import ln_factorial

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
MAX_CUTOFF_GROWTH = 100


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-10, gt=0.0)
    abs_tol: float = Field(default=1e-12, gt=0.0)
    # integrate |x| <= (sqrt(2n+1) + sigma) / sqrt(alpha)
    tail_cutoff_sigma: float = Field(default=12.0, gt=0.0)
    # per panel
    max_subdivisions: int = Field(default=2000, ge=1)
    panel_order: int = Field(default=31, ge=5)


class QuadratureResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    error_bound: float = Field(ge=0.0)
    subdivisions: int = Field(ge=0)
    tail_bound: float = Field(ge=0.0)
    cutoff: float = Field(gt=0.0)


# ---------------------------------------------------------------------
#  Densities
# ---------------------------------------------------------------------
def _check_state(n: int, alpha: float) -> None:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ValueError("alpha must be positive")


def _log_parts(n: int, alpha: float, x) -> Tuple[np.ndarray, np.ndarray]:
    """(ln rho_n(x), ln|H_n(sqrt(alpha) x)|), both -inf at the zeros."""
    x = np.asarray(x, dtype=float)
    _, log_h = hermite_log_abs(n, math.sqrt(alpha) * x)
    log_rho = (
        0.5 * math.log(alpha / math.pi)
        - n * LN2
        - ln_factorial(n)
        - alpha * x * x
        + 2.0 * log_h
    )
    return log_rho, log_h


def density_log(n: int, alpha: float, x):
    """ln rho_n(x); vectorized over x, -inf where the density vanishes."""
    _check_state(n, alpha)
    log_rho, _ = _log_parts(n, alpha, x)
    if np.ndim(x) == 0:
        return float(log_rho.reshape(-1)[0])
    return log_rho


def density_1d(n: int, alpha: float, x):
    """rho_n(x), computed in log space; underflow gives 0."""
    log_rho = density_log(n, alpha, x)
    if isinstance(log_rho, float):
        return math.exp(log_rho) if log_rho > -math.inf else 0.0
    return np.exp(log_rho)


def _entropy_integrand(n: int, alpha: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(x: np.ndarray) -> np.ndarray:
        log_rho, _ = _log_parts(n, alpha, x)
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(log_rho), -np.exp(log_rho) * log_rho, 0.0)

    return f


def _mass_integrand(n: int, alpha: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(x: np.ndarray) -> np.ndarray:
        log_rho, _ = _log_parts(n, alpha, x)
        return np.exp(log_rho)

    return f


def _functional_integrand(n: int) -> Callable[[np.ndarray], np.ndarray]:
    """rho_n(x) ln H_n(x)^2 at alpha = 1."""

    def f(x: np.ndarray) -> np.ndarray:
        log_rho, log_h = _log_parts(n, 1.0, x)
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(log_h), 2.0 * np.exp(log_rho) * log_h, 0.0)

    return f


# ---------------------------------------------------------------------
#  Tail cutoff
# ---------------------------------------------------------------------
TailBound = Callable[[float, float, float], float]


def _entropy_tail(rho_c: float, kappa: float, c: float) -> float:
    # rho decays at least like exp(-kappa t) past c, so with u = -ln rho,
    # int rho |ln rho| <= int_{u_c}^inf u exp(-u) du / kappa
    return 2.0 * rho_c * (abs(math.log(rho_c)) + 1.0) / kappa


def _mass_tail(rho_c: float, kappa: float, c: float) -> float:
    return 2.0 * rho_c / kappa


def _functional_tail(n: int) -> TailBound:
    # past every zero, 0 <= ln H_n(x)^2 <= 2n ln(4x)
    def bound(rho_c: float, kappa: float, c: float) -> float:
        return 4.0 * n * rho_c * (math.log(4.0 * c) / kappa + 1.0 / (c * kappa * kappa))

    return bound


def _tail_cutoff(n: int, alpha: float, sigma: float, target: float, tail: TailBound) -> Tuple[float, float]:
    """Smallest cutoff c on the sigma grid whose two-sided tail bound is below target.

    Returns:
        ``(c, bound)``.
    """
    sqrt_alpha = math.sqrt(alpha)
    y_max = hermite_roots(n).roots[-1] if n >= 1 else 0.0
    for _ in range(MAX_CUTOFF_GROWTH):
        c = (math.sqrt(2 * n + 1) + sigma) / sqrt_alpha
        # lower bound of -d ln rho / dx on [c, inf)
        kappa = 2.0 * alpha * c - 2.0 * sqrt_alpha * n / (sqrt_alpha * c - y_max)
        log_rho_c = float(density_log(n, alpha, c))
        if kappa > 0.0 and log_rho_c < -1.0:
            bound = tail(math.exp(log_rho_c), kappa, c)
            if bound <= target:
                return c, bound
        logger.debug("tail bound too large at sigma=%.1f; growing the cutoff", sigma)
        sigma += 2.0
    raise QuadratureNonConvergenceError(
        f"no tail cutoff found for n={n}, alpha={alpha}", estimate=math.nan, error_bound=math.inf
    )


# ---------------------------------------------------------------------
#  Adaptive Gauss–Legendre
# ---------------------------------------------------------------------
@locked_memo
def _legendre_rule(order: int) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return tuple(nodes), tuple(weights)


class _Panel:
    """Bisection state of one panel."""

    def __init__(self, f, order: int):
        nodes, weights = _legendre_rule(order)
        self._f = f
        self._nodes = np.asarray(nodes)
        self._weights = np.asarray(weights)

    def apply(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[:, None] + half[:, None] * self._nodes[None, :]
        values = self._f(x.ravel()).reshape(x.shape)
        return half * (values @ self._weights)

    def integrate(self, a: float, b: float, abs_tol: float, rel_tol: float, max_subdivisions: int):
        """Bisect the worst interval until the summed error estimate is small enough.

        Each interval is scored by the gap between its rule and the sum of
        the rule on its two halves; the finer value is kept.
        """
        counter = itertools.count()
        heap = []

        def push(lo: float, hi: float, coarse: float) -> None:
            mid = 0.5 * (lo + hi)
            left, right = self.apply(np.array([lo, mid]), np.array([mid, hi]))
            fine = left + right
            heapq.heappush(heap, (-abs(fine - coarse), next(counter), lo, hi, float(left), float(right), fine))

        push(a, b, float(self.apply(np.array([a]), np.array([b]))[0]))
        subdivisions = 0
        while True:
            value = math.fsum(item[6] for item in heap)
            err = math.fsum(-item[0] for item in heap)
            if err <= max(abs_tol, rel_tol * abs(value)):
                return value, err, subdivisions
            if subdivisions >= max_subdivisions:
                raise QuadratureNonConvergenceError(
                    f"panel [{a:.6g}, {b:.6g}] did not converge in {max_subdivisions} subdivisions",
                    estimate=value,
                    error_bound=err,
                )
            _, _, lo, hi, left, right, _ = heapq.heappop(heap)
            mid = 0.5 * (lo + hi)
            push(lo, mid, left)
            push(mid, hi, right)
            subdivisions += 1


def _integrate_full_line(
    f,
    n: int,
    alpha: float,
    cfg: QuadratureConfig,
    tail: TailBound,
) -> QuadratureResult:
    cutoff, tail_bound = _tail_cutoff(n, alpha, cfg.tail_cutoff_sigma, cfg.abs_tol / 10.0, tail)
    zeros = list(hermite_roots(n).as_array() / math.sqrt(alpha)) if n >= 1 else []
    edges = [-cutoff, *zeros, cutoff]
    panel_count = len(edges) - 1

    panel = _Panel(f, cfg.panel_order)
    values, errors = [], []
    subdivisions = 0
    for a, b in zip(edges[:-1], edges[1:]):
        value, err, used = panel.integrate(
            a, b, cfg.abs_tol / panel_count, cfg.rel_tol, cfg.max_subdivisions
        )
        values.append(value)
        errors.append(err)
        subdivisions += used
    logger.debug(
        "n=%d alpha=%g: %d panels, %d subdivisions, cutoff %.3f", n, alpha, panel_count, subdivisions, cutoff
    )
    return QuadratureResult(
        value=math.fsum(values),
        error_bound=math.fsum(errors) + tail_bound,
        subdivisions=subdivisions,
        tail_bound=tail_bound,
        cutoff=cutoff,
    )


# ---------------------------------------------------------------------
#  Public oracle
# ---------------------------------------------------------------------
def entropy_quadrature(n: int, alpha: float = 1.0, cfg: Optional[QuadratureConfig] = None) -> QuadratureResult:
    """-int rho_n ln rho_n dx with its error bound."""
    _check_state(n, alpha)
    cfg = cfg or QuadratureConfig()
    return _integrate_full_line(_entropy_integrand(n, alpha), n, alpha, cfg, _entropy_tail)


def quadrature_entropy_1d(n: int, alpha: float = 1.0, cfg: Optional[QuadratureConfig] = None) -> float:
    return entropy_quadrature(n, alpha, cfg).value


def normalization_check(n: int, alpha: float = 1.0, cfg: Optional[QuadratureConfig] = None) -> float:
    """int rho_n dx over the real line; should be 1."""
    _check_state(n, alpha)
    cfg = cfg or QuadratureConfig()
    return _integrate_full_line(_mass_integrand(n, alpha), n, alpha, cfg, _mass_tail).value


def quadrature_entropy_functional_scaled(n: int, cfg: Optional[QuadratureConfig] = None) -> float:
    """int H_n^2 ln H_n^2 exp(-x^2) dx / (2^n n! sqrt(pi)) by quadrature."""
    _check_state(n, 1.0)
    if n == 0:
        return 0.0
    cfg = cfg or QuadratureConfig()
    return _integrate_full_line(_functional_integrand(n), n, 1.0, cfg, _functional_tail(n)).value


def quadrature_entropy_functional(n: int, cfg: Optional[QuadratureConfig] = None) -> float:
    """The defining full-line integral of E_n(H), by quadrature."""
    scaled = quadrature_entropy_functional_scaled(n, cfg)
    return scaled * math.exp(n * LN2 + ln_factorial(n) + 0.5 * math.log(math.pi))


def moment_check(n: int, alpha: float = 1.0) -> float:
    """alpha <x^2> from an (n+2)-point Gauss–Hermite rule; exactly n + 1/2."""
    _check_state(n, alpha)
    rule = gauss_hermite(n + 2)
    sqrt_alpha = math.sqrt(alpha)
    y = np.asarray(rule.nodes)
    x = y / sqrt_alpha
    # int f(x) exp(-alpha x^2) dx = sum w_k f(y_k / sqrt(alpha)) / sqrt(alpha)
    _, log_h = hermite_log_abs(n, y)
    scaled_h2 = np.exp(2.0 * log_h - n * LN2 - ln_factorial(n))
    terms = np.asarray(rule.weights) * x * x * scaled_h2 / sqrt_alpha
    return alpha * math.sqrt(alpha / math.pi) * math.fsum(terms)


def quadrature_entropy(occupations: Sequence[int], alpha: float = 1.0, cfg: Optional[QuadratureConfig] = None) -> QuadratureResult:
    """D-dimensional oracle through the exact product structure of the density.

    Accepts either an occupation sequence or a :class:`~oscillator_entropy.entropy.StateSpec`.
    """
    if hasattr(occupations, "occupations"):
        alpha = occupations.alpha
        occupations = occupations.occupations
    occupations = tuple(occupations)
    if not occupations:
        raise ValueError("occupations must not be empty")
    per_degree = {n: entropy_quadrature(n, alpha, cfg) for n in sorted(set(occupations))}
    parts = [per_degree[n] for n in occupations]
    return QuadratureResult(
        value=math.fsum(p.value for p in parts),
        error_bound=math.fsum(p.error_bound for p in parts),
        subdivisions=sum(per_degree[n].subdivisions for n in per_degree),
        tail_bound=math.fsum(p.tail_bound for p in parts),
        cutoff=max(p.cutoff for p in parts),
    )


# ---------------------------------------------------------------------
#  Direct 2-D integration
# ---------------------------------------------------------------------
def _graded_axis(n: int, alpha: float, cutoff: float, order: int, levels: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss–Legendre nodes on [-cutoff, cutoff].

    Sub-intervals are at most 1/2 wide and are refined geometrically
    towards every zero of rho_n.
    """
    zeros = list(hermite_roots(n).as_array() / math.sqrt(alpha)) if n >= 1 else []
    edges = [-cutoff, *zeros, cutoff]
    breaks = set()
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        pieces = max(2, math.ceil((b - a) / 0.5))
        breaks.update(np.linspace(a, b, pieces + 1).tolist())
        h = (b - a) / pieces
        if i > 0:
            breaks.update(a + h * 2.0 ** -np.arange(1, levels + 1))
        if i < len(edges) - 2:
            breaks.update(b - h * 2.0 ** -np.arange(1, levels + 1))
    grid = np.array(sorted(breaks))
    nodes, weights = (np.asarray(v) for v in _legendre_rule(order))
    half = 0.5 * np.diff(grid)
    mid = 0.5 * (grid[1:] + grid[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def quadrature_entropy_2d(
    n1: int,
    n2: int,
    alpha: float = 1.0,
    cfg: Optional[QuadratureConfig] = None,
    order: int = 16,
    levels: int = 14,
) -> float:
    """-int int rho ln rho dx dy for the 2-D state {n1, n2}, without using separability.

    A tensor-product graded grid; accurate to about 1e-7.
    """
    _check_state(n1, alpha)
    _check_state(n2, alpha)
    cfg = cfg or QuadratureConfig(tail_cutoff_sigma=6.0, abs_tol=1e-9)
    cutoff = max(
        _tail_cutoff(n, alpha, cfg.tail_cutoff_sigma, cfg.abs_tol / 10.0, _entropy_tail)[0] for n in (n1, n2)
    )
    x, wx = _graded_axis(n1, alpha, cutoff, order, levels)
    y, wy = _graded_axis(n2, alpha, cutoff, order, levels)
    log_rho = density_log(n1, alpha, x)[:, None] + density_log(n2, alpha, y)[None, :]
    with np.errstate(invalid="ignore"):
        integrand = np.where(np.isfinite(log_rho), -np.exp(log_rho) * log_rho, 0.0)
    return float(wx @ integrand @ wy)
