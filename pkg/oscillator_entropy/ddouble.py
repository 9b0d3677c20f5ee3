"""Double-double ("pair") arithmetic.

A value is stored as an unevaluated sum ``hi + lo`` of two floats with
``|lo| <= ulp(hi)/2``, giving roughly 106 bits of significand. Only the
operations the hypergeometric series need are provided: add, subtract,
multiply, divide, exp and construction from (big) integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

# 2^27 + 1, exact in double
_SPLITTER = 134217729.0

# unit roundoff of the pair format
EPS = 2.0 ** -104

LN2_HI = 6.931471805599452862e-01
LN2_LO = 2.319046813846299558e-17


# ---------------------------------------------------------------------
#  Error-free transformations
# ---------------------------------------------------------------------
def _split(a: float) -> tuple[float, float]:
    """Dekker split into two halves of at most 26 significant bits."""
    c = _SPLITTER * a
    abig = c - a
    ahi = c - abig
    return ahi, a - ahi


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Return ``(s, err)`` with ``s + err == a + b`` exactly."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """As ``two_sum`` but requires ``|a| >= |b|``."""
    s = a + b
    return s, b - (s - a)


def two_prod_dekker(a: float, b: float) -> tuple[float, float]:
    """Dekker's product; exact unless ``a * b`` overflows or underflows."""
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def two_prod_fma(a: float, b: float) -> tuple[float, float]:
    """Return ``(p, err)`` with ``p + err == a * b`` exactly."""
    p = a * b
    return p, math.fma(a, b, -p)


# math.fma arrived in Python 3.13
two_prod = two_prod_fma if hasattr(math, "fma") else two_prod_dekker


# ---------------------------------------------------------------------
#  The pair type
# ---------------------------------------------------------------------
Operand = Union["DoubleDouble", float, int]


@dataclass(frozen=True, slots=True)
class DoubleDouble:
    hi: float
    lo: float = 0.0

    @staticmethod
    def from_int(n: int) -> DoubleDouble:
        """Exact for ``|n| < 2**106``."""
        hi = float(n)
        lo = float(n - int(hi))
        return DoubleDouble(*quick_two_sum(hi, lo))

    @staticmethod
    def square(x: float) -> DoubleDouble:
        """``x*x`` without rounding."""
        return DoubleDouble(*two_prod(x, x))

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: Operand) -> DoubleDouble:
        if not isinstance(other, DoubleDouble):
            s, e = two_sum(self.hi, float(other))
            e += self.lo
            return DoubleDouble(*quick_two_sum(s, e))
        s, e = two_sum(self.hi, other.hi)
        t, f = two_sum(self.lo, other.lo)
        e += t
        s, e = quick_two_sum(s, e)
        e += f
        return DoubleDouble(*quick_two_sum(s, e))

    __radd__ = __add__

    def __neg__(self) -> DoubleDouble:
        return DoubleDouble(-self.hi, -self.lo)

    def __sub__(self, other: Operand) -> DoubleDouble:
        return self + (-_coerce(other))

    def __rsub__(self, other: Operand) -> DoubleDouble:
        return _coerce(other) + (-self)

    def __mul__(self, other: Operand) -> DoubleDouble:
        if not isinstance(other, DoubleDouble):
            b = float(other)
            p, e = two_prod(self.hi, b)
            e += self.lo * b
            return DoubleDouble(*quick_two_sum(p, e))
        p, e = two_prod(self.hi, other.hi)
        e += self.hi * other.lo + self.lo * other.hi
        return DoubleDouble(*quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> DoubleDouble:
        other = _coerce(other)
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        q = DoubleDouble(*quick_two_sum(q1, q2))
        return q + q3

    def __rtruediv__(self, other: Operand) -> DoubleDouble:
        return _coerce(other) / self

    def __abs__(self) -> DoubleDouble:
        return -self if self.hi < 0.0 else self

    def __float__(self) -> float:
        return self.hi + self.lo

    def ldexp(self, k: int) -> DoubleDouble:
        return DoubleDouble(math.ldexp(self.hi, k), math.ldexp(self.lo, k))

    def __repr__(self) -> str:
        return f"DoubleDouble(hi={self.hi:.17g}, lo={self.lo:.17g})"


def _coerce(x: Operand) -> DoubleDouble:
    if isinstance(x, DoubleDouble):
        return x
    if isinstance(x, int):
        return DoubleDouble.from_int(x)
    return DoubleDouble(float(x))


LN2 = DoubleDouble(LN2_HI, LN2_LO)


def exp(x: Operand) -> DoubleDouble:
    """Pair-precision exponential.

    Reduces ``x = k ln2 + r`` with ``|r| <= ln2/2``, scales ``r`` by 2^-10,
    sums the Taylor series of ``expm1`` and undoes the scaling by repeated
    ``s <- 2s + s^2``.
    """
    x = _coerce(x)
    if x.hi > 709.0:
        raise OverflowError("exp overflow in pair arithmetic")
    if x.hi < -745.0:
        return DoubleDouble(0.0)
    k = int(round(x.hi / LN2_HI))
    r = (x - LN2 * k).ldexp(-10)
    s = r
    term = r
    m = 2
    while True:
        term = term * r / m
        s = s + term
        if abs(term.hi) <= EPS * 1e-3 * abs(s.hi) or m > 40:
            break
        m += 1
    for _ in range(10):
        s = s * 2.0 + s * s
    return (s + 1.0).ldexp(k)


def dd_sum(values: Iterable[Operand]) -> DoubleDouble:
    total = DoubleDouble(0.0)
    for v in values:
        total = total + v
    return total
