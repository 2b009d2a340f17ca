"""Exactness contract of the 128-bit circle arithmetic.

Everything downstream leans on three properties checked here: floats in
[0, 1) embed into the grid without rounding, integer scaling reduces
mod 1 with no precision loss, and the hex serialization round-trips
bit for bit.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from numvar import FixedPointReal, FRACTION_BITS
from numvar.fixedpoint import MODULUS


def test_fraction_bits_is_128():
    assert FRACTION_BITS == 128
    assert MODULUS == 1 << 128


def test_constructor_reduces_mod_one():
    assert FixedPointReal(MODULUS).numerator == 0
    assert FixedPointReal(MODULUS + 5).numerator == 5
    assert FixedPointReal(-1).numerator == MODULUS - 1


def test_constructor_rejects_non_int():
    with pytest.raises(TypeError):
        FixedPointReal(0.5)


def test_from_float_dyadic_values_are_exact():
    assert FixedPointReal.from_float(0.25).numerator == 1 << 126
    assert FixedPointReal.from_float(0.5).numerator == 1 << 127
    assert FixedPointReal.from_float(0.75).numerator == 3 << 126
    assert FixedPointReal.from_float(0.0).numerator == 0


def test_from_float_random_floats_embed_exactly():
    # Any float in [0, 1) has at most 53 significant bits, so its image
    # on the 128-bit grid is exact: as_fraction must equal the float's
    # own exact rational value.
    rng = np.random.default_rng(20260819)
    for value in rng.random(200):
        v = float(value)
        assert FixedPointReal.from_float(v).as_fraction() == Fraction(v)


def test_from_float_rejects_non_finite():
    with pytest.raises(ValueError):
        FixedPointReal.from_float(float("nan"))
    with pytest.raises(ValueError):
        FixedPointReal.from_float(float("inf"))


def test_from_fraction_one_third_rounds_to_nearest():
    # 2**128 = 3k + 1 with k = (2**128 - 1) / 3, so the nearest grid
    # point to 1/3 is k (remainder 1/3 rounds down).
    k = (MODULUS - 1) // 3
    assert FixedPointReal.from_fraction(1, 3).numerator == k


def test_from_fraction_exact_dyadics():
    assert FixedPointReal.from_fraction(1, 4).numerator == 1 << 126
    assert FixedPointReal.from_fraction(3, 8).numerator == 3 << 125
    assert FixedPointReal.from_fraction(0, 7).numerator == 0


def test_from_fraction_wraps_mod_one():
    # 5/4 and 1/4 are the same circle point.
    assert FixedPointReal.from_fraction(5, 4) == FixedPointReal.from_fraction(1, 4)
    assert FixedPointReal.from_fraction(-1, 4) == FixedPointReal.from_fraction(3, 4)


def test_from_fraction_ties_round_up():
    # 1 / 2**129 sits exactly halfway between grid points 0 and 2**-128.
    assert FixedPointReal.from_fraction(1, 1 << 129).numerator == 1


def test_from_fraction_rejects_bad_denominator():
    with pytest.raises(ValueError):
        FixedPointReal.from_fraction(1, 0)
    with pytest.raises(ValueError):
        FixedPointReal.from_fraction(1, -3)


def test_mul_int_one_third_times_three_is_one_minus_ulp():
    # The rounded 1/3 has numerator (2**128 - 1)/3; tripling it lands on
    # 2**128 - 1, i.e. 1 - 2**-128, not on 0.  This pins the truncation
    # semantics of rational dilation factors.
    alpha = FixedPointReal.from_fraction(1, 3)
    assert alpha.mul_int(3).numerator == MODULUS - 1


def test_mul_int_matches_bigint_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        num = int(rng.integers(0, 1 << 62)) << int(rng.integers(0, 66))
        num %= MODULUS
        a = int(rng.integers(-(1 << 62), 1 << 62))
        got = FixedPointReal(num).mul_int(a).numerator
        assert got == (num * a) % MODULUS


def test_mul_int_negative_scaling():
    quarter = FixedPointReal.from_fraction(1, 4)
    assert quarter.mul_int(-1) == FixedPointReal.from_fraction(3, 4)
    assert quarter.mul_int(-4).numerator == 0


def test_mul_int_rejects_non_int():
    with pytest.raises(TypeError):
        FixedPointReal.from_fraction(1, 4).mul_int(2.0)


def test_add_sub_wrap_exactly():
    a = FixedPointReal.from_float(0.75)
    b = FixedPointReal.from_float(0.5)
    assert a.add(b) == FixedPointReal.from_float(0.25)
    assert b.sub(a) == FixedPointReal.from_float(0.75)
    assert a.sub(a).numerator == 0


def test_hex_is_exactly_32_lowercase_digits():
    cases = [0, 1, MODULUS - 1, (MODULUS - 1) // 3, 1 << 126]
    for num in cases:
        text = FixedPointReal(num).to_hex()
        assert len(text) == 32
        assert text == text.lower()
        assert all(c in "0123456789abcdef" for c in text)


def test_hex_round_trip_sweep():
    rng = np.random.default_rng(11)
    for _ in range(300):
        num = (int(rng.integers(0, 1 << 63)) << 65) | int(rng.integers(0, 1 << 63))
        x = FixedPointReal(num)
        assert FixedPointReal.from_hex(x.to_hex()) == x


def test_from_hex_rejects_malformed_input():
    with pytest.raises(ValueError):
        FixedPointReal.from_hex("ab")  # wrong length
    with pytest.raises(ValueError):
        FixedPointReal.from_hex("A" * 32)  # uppercase
    with pytest.raises(ValueError):
        FixedPointReal.from_hex("g" * 32)  # not hex


def test_to_float_is_nearest_double():
    assert FixedPointReal(1 << 127).to_float() == 0.5
    # 1 - 2**-128 is closer to 1.0 than to the largest double below 1.
    assert FixedPointReal(MODULUS - 1).to_float() == 1.0
    assert FixedPointReal(1).to_float() == math.ldexp(1.0, -128)


def test_float_protocol_and_ordering():
    a = FixedPointReal.from_float(0.25)
    b = FixedPointReal.from_float(0.75)
    assert float(a) == 0.25
    assert a < b
    assert not (b < a)
    assert a != b
    assert hash(a) == hash(FixedPointReal.from_fraction(1, 4))
    assert len({a, b, FixedPointReal.from_fraction(1, 4)}) == 2


def test_as_fraction_exact():
    assert FixedPointReal(1 << 126).as_fraction() == Fraction(1, 4)
    k = (MODULUS - 1) // 3
    assert FixedPointReal(k).as_fraction() == Fraction(k, MODULUS)
