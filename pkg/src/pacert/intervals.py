"""Rational enclosures for the few transcendental quantities the checks need.

Endpoints are always :class:`fractions.Fraction`.  Transcendental values are
produced by :mod:`mpmath`'s interval context with outward rounding and then
converted exactly, so every comparison made on an :class:`Interval` is a
comparison between rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import mpmath
from mpmath import iv

DEFAULT_PREC = 128


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def __add__(self, other):
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        c = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def certainly_le(self, other) -> bool:
        """True when every point of ``self`` is <= every point of ``other``."""
        return self.hi <= _coerce(other).lo

    def certainly_lt(self, other) -> bool:
        return self.hi < _coerce(other).lo

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def to_pair(self, digits: int = 20) -> list[str]:
        return [decimal_down(self.lo, digits), decimal_up(self.hi, digits)]

    def __repr__(self):
        lo, hi = self.to_pair(12)
        return f"Interval[{lo}, {hi}]"


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


def _mpf_to_fraction(raw) -> Fraction:
    p, q = mpmath.libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def from_iv(x) -> Interval:
    a, b = x._mpi_
    return Interval(_mpf_to_fraction(a), _mpf_to_fraction(b))


def to_iv(x):
    x = _coerce(x)
    lo = iv.mpf(x.lo.numerator) / x.lo.denominator
    hi = iv.mpf(x.hi.numerator) / x.hi.denominator
    return iv.mpf([lo.a, hi.b])


def log_enclosure(x, prec: int = DEFAULT_PREC) -> Interval:
    """Outward-rounded enclosure of ``log(x)`` for a positive rational or interval."""
    x = _coerce(x)
    if x.lo <= 0:
        raise ValueError("log of a non-positive quantity")
    old = iv.prec
    iv.prec = prec
    try:
        return from_iv(iv.log(to_iv(x)))
    finally:
        iv.prec = old


def pi_enclosure(prec: int = DEFAULT_PREC) -> Interval:
    old = iv.prec
    iv.prec = prec
    try:
        return from_iv(iv.pi)
    finally:
        iv.prec = old


def floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


def decimal_down(x: Fraction, digits: int = 20) -> str:
    """Decimal string for a value <= x, exact as written."""
    return _decimal(x, digits, math.floor)


def decimal_up(x: Fraction, digits: int = 20) -> str:
    return _decimal(x, digits, math.ceil)


def _decimal(x: Fraction, digits: int, rnd) -> str:
    x = Fraction(x)
    scaled = rnd(x * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    s = f"{sign}{whole}.{frac:0{digits}d}".rstrip("0")
    return s[:-1] if s.endswith(".") else s


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
