"""Exact nonnegative magnitudes of the form ``mant * 2**exp``.

Evanescent sequences reach values like ``2**-(2**20)`` after a handful of
levels.  Such numbers are cheap to carry as a small rational mantissa and an
integer binary exponent, and can be compared exactly without ever
materializing the full rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

Number = Union[int, Fraction]


def floor_log2(x: Number) -> int:
    """Largest integer ``l`` with ``2**l <= x`` (exact, ``x > 0``)."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    p, q = x.numerator, x.denominator
    l = p.bit_length() - q.bit_length()
    if l >= 0:
        if p < (q << l):
            l -= 1
    elif (p << -l) < q:
        l -= 1
    return l


def ceil_log2(x: Number) -> int:
    """Least integer ``l`` with ``x <= 2**l`` (exact, ``x > 0``)."""
    l = floor_log2(x)
    return l if Fraction(x) == _pow2(l) else l + 1


def log2(x: Number) -> float:
    """Float log2 of an exact rational of any size; ``-inf`` for zero."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("log2 of a negative number")
    if x == 0:
        return -math.inf
    return math.log2(x.numerator) - math.log2(x.denominator)


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


@total_ordering
@dataclass(frozen=True)
class Magnitude:
    """The exact number ``mant * 2**exp`` with ``mant >= 0``."""

    mant: Fraction
    exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mant", Fraction(self.mant))
        if self.mant < 0:
            raise ValueError("Magnitude must be nonnegative")

    @classmethod
    def of(cls, x: Union[Number, "Magnitude"]) -> "Magnitude":
        return x if isinstance(x, Magnitude) else cls(Fraction(x), 0)

    @classmethod
    def pow2(cls, e: int) -> "Magnitude":
        return cls(Fraction(1), e)

    def is_zero(self) -> bool:
        return self.mant == 0

    def __mul__(self, other):
        o = Magnitude.of(other)
        return Magnitude(self.mant * o.mant, self.exp + o.exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Magnitude.of(other)
        if o.is_zero():
            raise ZeroDivisionError("division by a zero Magnitude")
        return Magnitude(self.mant / o.mant, self.exp - o.exp)

    def floor_log2(self) -> int:
        return floor_log2(self.mant) + self.exp

    def ceil_log2(self) -> int:
        return ceil_log2(self.mant) + self.exp

    def log2(self) -> float:
        return log2(self.mant) + self.exp

    def to_fraction(self) -> Fraction:
        """Exact value; the caller is responsible for the size of ``2**exp``."""
        return self.mant * _pow2(self.exp)

    def _cmp(self, other) -> int:
        o = Magnitude.of(other)
        if self.is_zero() or o.is_zero():
            return (not self.is_zero()) - (not o.is_zero())
        if self.floor_log2() > o.ceil_log2():
            return 1
        if self.ceil_log2() < o.floor_log2():
            return -1
        # exponents are now within a few bits of each other modulo the mantissas
        d = self.exp - o.exp
        lhs, rhs = self.mant, o.mant
        if d >= 0:
            lhs = lhs * (1 << d)
        else:
            rhs = rhs * (1 << -d)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if not isinstance(other, (Magnitude, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        if not isinstance(other, (Magnitude, int, Fraction)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        if self.is_zero():
            return hash(0)
        # normalize the power of two hidden in the mantissa
        m, e = self.mant, self.exp
        num, den = m.numerator, m.denominator
        tz = (num & -num).bit_length() - 1
        num >>= tz
        e += tz
        tz = (den & -den).bit_length() - 1
        den >>= tz
        e -= tz
        return hash((num, den, e))

    def __repr__(self):
        return f"Magnitude({self.mant}, {self.exp})"
