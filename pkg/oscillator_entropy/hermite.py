"""Physicists' Hermite polynomials: evaluation, zeros and Gauss–Hermite rules.

All evaluation runs on the orthonormal recurrence

    p_0 = 1,  p_1 = sqrt(2) x,  p_{k+1} = sqrt(2/(k+1)) x p_k - sqrt(k/(k+1)) p_{k-1}

with ``p_k = H_k / sqrt(2^k k!)``, rescaled on the fly and carried as a
(sign, log-magnitude) pair so that degrees in the hundreds never overflow.
"""
import logging
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import eigh_tridiagonal

from .cache import locked_memo
from .errors import RootFindingError

logger = logging.getLogger(__name__)

DEFAULT_ACCURACY = 1e-13
MAX_NEWTON_ITERATIONS = 50

# rescale the recurrence once magnitudes leave [2^-400, 2^400]
_BIG = 2.0 ** 400
_LOG_BIG = 400 * math.log(2.0)

SQRT_PI = math.sqrt(math.pi)


class RootSet(BaseModel):
    """The real zeros of H_n in ascending order."""

    model_config = ConfigDict(frozen=True)

    degree: int = Field(ge=0)
    roots: Tuple[float, ...]
    # max certified absolute error per root
    accuracy: float = Field(ge=0.0)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=float)

    def nonnegative(self) -> Tuple[Tuple[float, int], ...]:
        """Distinct |root| values with their multiplicity in the symmetric set."""
        n = self.degree
        half = self.roots[n // 2:]
        out = []
        for r in half:
            out.append((r, 1 if r == 0.0 else 2))
        return tuple(out)


class GaussHermiteRule(BaseModel):
    """m-point rule for integrals against exp(-x^2) over the real line."""

    model_config = ConfigDict(frozen=True)

    degree: int = Field(ge=1)
    nodes: Tuple[float, ...]
    weights: Tuple[float, ...]

    def integrate(self, f) -> float:
        """Apply the rule to a vectorized callable ``f``."""
        x = np.asarray(self.nodes)
        return math.fsum(np.asarray(self.weights) * f(x))


def _scaled_recurrence(n: int, x: np.ndarray):
    """Run the orthonormal recurrence up to degree n.

    Returns:
        ``(p_n, p_{n-1}, log_scale)`` arrays such that the true orthonormal
        values are ``p * exp(log_scale)``. For n == 0, ``p_{n-1}`` is zero.
    """
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    log_scale = np.zeros_like(x)
    for k in range(n):
        nxt = math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _BIG
        if np.any(big):
            cur = np.where(big, cur / _BIG, cur)
            prev = np.where(big, prev / _BIG, prev)
            log_scale = log_scale + np.where(big, _LOG_BIG, 0.0)
    return cur, prev, log_scale


def _log_norm(n: int) -> float:
    """ln sqrt(2^n n!)."""
    return 0.5 * (n * math.log(2.0) + math.lgamma(n + 1))


def hermite_log_abs(n: int, x) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized (sign, ln|H_n(x)|); ln|H_n| is -inf where H_n vanishes."""
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    p, _, log_scale = _scaled_recurrence(n, np.atleast_1d(np.asarray(x, dtype=float)))
    sign = np.sign(p)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(p)) + log_scale + _log_norm(n)
    return sign, log_abs


def hermite_eval(n: int, x: float) -> Tuple[int, float]:
    """Sign and natural log of |H_n(x)|.

    Args:
        n: degree, n >= 0.
        x: finite evaluation point.

    Returns:
        ``(sign, log_abs)`` with sign in {-1, 0, +1}; ``log_abs`` is ``-inf``
        exactly at a zero.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    sign, log_abs = hermite_log_abs(n, x)
    return int(sign[0]), float(log_abs[0])


def _newton_ratio(n: int, x: np.ndarray) -> np.ndarray:
    """H_n / H_n' at x, using H_n' = 2n H_{n-1}."""
    p, prev, _ = _scaled_recurrence(n, x)
    return p / (math.sqrt(2.0 * n) * prev)


@locked_memo
def hermite_roots(n: int, accuracy_target: float = DEFAULT_ACCURACY) -> RootSet:
    """All n zeros of H_n.

    Golub–Welsch start (eigenvalues of the Jacobi matrix with zero diagonal and
    off-diagonals sqrt(k/2)) followed by Newton polishing on the recurrence.
    """
    if n < 1:
        raise ValueError("hermite_roots needs n >= 1; H_0 has no zeros")
    if not accuracy_target > 0:
        raise ValueError("accuracy_target must be positive")
    if n == 1:
        return RootSet(degree=1, roots=(0.0,), accuracy=0.0)

    off = np.sqrt(np.arange(1, n) / 2.0)
    x = eigh_tridiagonal(np.zeros(n), off, eigvals_only=True)
    x = np.sort(x)

    largest = previous = np.inf
    for iteration in range(MAX_NEWTON_ITERATIONS):
        step = _newton_ratio(n, x)
        x = x - step
        largest = float(np.max(np.abs(step)))
        if largest <= accuracy_target * 1e-2:
            break
        # rounding floor: steps stopped shrinking quadratically
        if largest <= accuracy_target and largest >= 0.5 * previous:
            break
        previous = largest
    else:
        raise RootFindingError(
            f"Newton polishing of H_{n} zeros stalled at step {largest:.3e}"
        )
    logger.debug("polished %d Hermite zeros in %d Newton steps", n, iteration + 1)

    # exact symmetry; the middle zero of an odd degree is 0
    x = 0.5 * (x - x[::-1])
    if n % 2 == 1:
        x[n // 2] = 0.0

    residual = np.abs(_newton_ratio(n, x))
    floor = 4.0 * np.finfo(float).eps * float(np.max(np.abs(x)))
    accuracy = max(2.0 * float(np.max(residual)), floor)
    if accuracy > accuracy_target:
        raise RootFindingError(
            f"H_{n} zeros certified only to {accuracy:.3e} > target {accuracy_target:.3e}"
        )
    if np.any(np.diff(x) <= 0.0):
        raise RootFindingError(f"H_{n} zeros are not strictly increasing after polishing")
    return RootSet(degree=n, roots=tuple(float(r) for r in x), accuracy=accuracy)


@locked_memo
def gauss_hermite(m: int) -> GaussHermiteRule:
    """m-point Gauss–Hermite rule, exact for degree <= 2m-1 against exp(-x^2).

    Weights are the Golub–Welsch first-eigenvector components: at a node x_k
    the Jacobi eigenvector is (p_0, ..., p_{m-1})(x_k) up to normalization,
    so ``w_k = sqrt(pi) / sum_j p_j(x_k)^2``.
    """
    if m < 1:
        raise ValueError("gauss_hermite needs m >= 1")
    if m == 1:
        return GaussHermiteRule(degree=1, nodes=(0.0,), weights=(SQRT_PI,))

    x = hermite_roots(m).as_array()
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    acc = np.ones_like(x)
    log_scale = np.zeros_like(x)
    for k in range(m - 1):
        nxt = math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        acc = acc + cur * cur
        big = np.abs(cur) > _BIG
        if np.any(big):
            cur = np.where(big, cur / _BIG, cur)
            prev = np.where(big, prev / _BIG, prev)
            acc = np.where(big, acc / _BIG ** 2, acc)
            log_scale = log_scale + np.where(big, _LOG_BIG, 0.0)
    w = SQRT_PI * np.exp(-2.0 * log_scale) / acc
    w = 0.5 * (w + w[::-1])
    return GaussHermiteRule(
        degree=m,
        nodes=tuple(float(v) for v in x),
        weights=tuple(float(v) for v in w),
    )
