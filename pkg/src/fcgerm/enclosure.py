"""Rational interval enclosures with outward dyadic rounding."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_BITS = 48
MAX_BITS = 2048


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @classmethod
    def exact(cls, x) -> "Enclosure":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "Enclosure") -> "Enclosure":
        other = _enc(other)
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __mul__(self, other) -> "Enclosure":
        other = _enc(other)
        c = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Enclosure(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        other = _enc(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self * Enclosure(1 / other.hi, 1 / other.lo)

    def __pow__(self, n: int) -> "Enclosure":
        if n < 0:
            raise ValueError("negative power")
        if self.lo < 0:
            raise ValueError("power of an enclosure that may be negative")
        return Enclosure(self.lo ** n, self.hi ** n)

    def scale(self, c) -> "Enclosure":
        return self * Enclosure.exact(abs(Fraction(c)))

    def certainly_lt(self, other) -> bool:
        return self.hi < _enc(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= _enc(other).lo

    def certainly_ge(self, other) -> bool:
        return self.lo >= _enc(other).hi

    def contains(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def to_json(self) -> list[str]:
        return [fmt_rational(self.lo), fmt_rational(self.hi)]

    def __float__(self):
        return float((self.lo + self.hi) / 2)


def _enc(x) -> Enclosure:
    return x if isinstance(x, Enclosure) else Enclosure.exact(x)


def sqrt_enclosure(x, bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of sqrt(x) with endpoints on the grid 2^-bits (exact for rational squares)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Enclosure.exact(Fraction(rn, rd))
    scale = 1 << bits
    # floor(sqrt(x) * 2^bits) = isqrt(floor(x * 4^bits))
    lo = math.isqrt((n * scale * scale) // d)
    return Enclosure(Fraction(lo, scale), Fraction(lo + 1, scale))


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
