"""Exact arithmetic on the unit circle R/Z at fixed dyadic resolution.

A point on the circle is stored as an integer numerator k with
0 <= k < 2**128, representing the real number k / 2**128.  All
operations (addition, subtraction, scaling by an integer) reduce the
numerator mod 2**128, i.e. they are exact arithmetic mod 1 on the
dyadic grid.  128 fractional bits are enough that multiplying by any
admissible sequence term (|a| < 2**62) keeps more than 64 significant
bits below the unit, so fractional parts of n*alpha never collapse to
float rounding artifacts.

Scaling by an integer is exact in the following sense: if alpha is
represented by numerator k then alpha.mul_int(a) is represented by
(k * a) mod 2**128, which is exactly the fractional part of a * (k /
2**128) scaled back to the grid.  No rounding ever occurs after
construction.
"""

from __future__ import annotations

import math
from fractions import Fraction

FRACTION_BITS = 128
MODULUS = 1 << FRACTION_BITS

_HEX_DIGITS = FRACTION_BITS // 4


class FixedPointReal:
    """A real number mod 1 with exactly 128 fractional bits."""

    __slots__ = ("_num",)

    def __init__(self, numerator: int):
        if not isinstance(numerator, int):
            raise TypeError("numerator must be an int")
        self._num = numerator % MODULUS

    # -- constructors -------------------------------------------------

    @classmethod
    def from_float(cls, value: float) -> "FixedPointReal":
        """Exact image of a float: every float in [0, 1) lies on the grid.

        Floats carry at most 53 significant bits, so value * 2**128 is an
        integer whenever |value| < 1; the conversion is exact, not rounded.
        """
        if not math.isfinite(value):
            raise ValueError("value must be finite")
        scaled = math.ldexp(value, FRACTION_BITS)
        if scaled != int(scaled):
            # Cannot happen for |value| < 2**75 or so; guard anyway.
            raise ValueError("float does not lie on the dyadic grid")
        return cls(int(scaled))

    @classmethod
    def from_fraction(cls, p: int, q: int) -> "FixedPointReal":
        """Nearest grid point to the rational p/q (ties round up)."""
        if q <= 0:
            raise ValueError("denominator must be positive")
        num, den = Fraction(p, q).as_integer_ratio()
        scaled = (num * MODULUS * 2 + den) // (2 * den)
        return cls(scaled)

    @classmethod
    def from_hex(cls, text: str) -> "FixedPointReal":
        """Inverse of to_hex()."""
        text = text.strip()
        if len(text) != _HEX_DIGITS or text.lower() != text:
            raise ValueError("expected %d lowercase hex digits" % _HEX_DIGITS)
        return cls(int(text, 16))

    # -- accessors ----------------------------------------------------

    @property
    def numerator(self) -> int:
        return self._num

    def to_float(self) -> float:
        """Nearest float64; loses all but the top ~53 bits."""
        return math.ldexp(self._num, -FRACTION_BITS)

    def to_hex(self) -> str:
        """Zero-padded 32-digit lowercase hex of the numerator."""
        return format(self._num, "0%dx" % _HEX_DIGITS)

    def as_fraction(self) -> Fraction:
        return Fraction(self._num, MODULUS)

    # -- arithmetic mod 1 ---------------------------------------------

    def mul_int(self, a: int) -> "FixedPointReal":
        """Exact product with an integer, reduced mod 1."""
        if not isinstance(a, int):
            raise TypeError("a must be an int")
        return FixedPointReal((self._num * a) % MODULUS)

    def add(self, other: "FixedPointReal") -> "FixedPointReal":
        return FixedPointReal((self._num + other._num) % MODULUS)

    def sub(self, other: "FixedPointReal") -> "FixedPointReal":
        return FixedPointReal((self._num - other._num) % MODULUS)

    # -- protocol -----------------------------------------------------

    def __float__(self) -> float:
        return self.to_float()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FixedPointReal):
            return self._num == other._num
        return NotImplemented

    def __lt__(self, other: "FixedPointReal") -> bool:
        return self._num < other._num

    def __hash__(self) -> int:
        return hash(self._num)

    def __repr__(self) -> str:
        return "FixedPointReal(0x%s)" % self.to_hex()
