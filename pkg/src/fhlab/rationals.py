"""Helpers for exact rational arithmetic.

`fractions.Fraction` already provides canonical reduced form (positive
denominator, gcd 1), so the scalar type itself needs no wrapper.  The
extended value +infinity, needed only for a handful of thresholds, is
represented by `math.inf`, which compares correctly against Fraction.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

RatOrInf = Union[Fraction, float]


def parse_rational(text: str) -> Fraction:
    """Parse 'a/b' or 'a' into an exact Fraction.

    Decimal notation is rejected on purpose: exponent-calculus inputs
    must stay exact.
    """
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"expected an exact rational 'a/b', got {text!r}")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}: {exc}") from None


def exact_str(value) -> str:
    """Canonical 'num/den' (or integer) string; 'inf' for +infinity."""
    if value is None:
        return "undefined"
    if value == math.inf:
        return "inf"
    return str(Fraction(value))


def decimal_str(value) -> str:
    """Shortest round-tripping decimal string of the value."""
    if value is None:
        return "undefined"
    if value == math.inf:
        return "inf"
    return repr(float(value))


def _int_nth_root(value: int, n: int):
    """Exact n-th root of a nonnegative integer, or None."""
    if value < 0 or n <= 0:
        return None
    if value in (0, 1) or n == 1:
        return value
    if value.bit_length() > 960:
        return None
    root = round(value ** (1.0 / n))
    for cand in (root - 1, root, root + 1):
        if cand >= 0 and cand**n == value:
            return cand
    return None


def rational_power(base: Fraction, exponent: Fraction) -> RatOrInf:
    """base**exponent, exact when the result is rational, else float.

    Integer exponents are always exact.  For exponent p/q the result is
    exact precisely when numerator and denominator of base**p are perfect
    q-th powers.
    """
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ValueError("rational_power requires a positive base")
    # Exactness is only attempted while the integers stay small; beyond
    # that the float value is returned directly.
    digits = max(base.numerator.bit_length(), base.denominator.bit_length())
    if abs(exponent.numerator) * digits > 512:
        return float(base) ** float(exponent)
    if exponent.denominator == 1:
        return base**exponent.numerator
    powered = base**exponent.numerator
    num_root = _int_nth_root(powered.numerator, exponent.denominator)
    den_root = _int_nth_root(powered.denominator, exponent.denominator)
    if num_root is not None and den_root is not None:
        return Fraction(num_root, den_root)
    return float(base) ** float(exponent)


def ceil_power(base: Fraction, exponent: Fraction) -> int:
    """ceil(base**exponent) with exact arithmetic whenever possible."""
    value = rational_power(base, exponent)
    if isinstance(value, Fraction):
        return math.ceil(value)
    if not math.isfinite(value):
        raise ValueError(f"{base}**{exponent} overflows the step count")
    return math.ceil(value - 1e-12)


def random_fraction(rng, lo: Fraction, hi: Fraction, max_den: int = 24) -> Fraction:
    """Random rational strictly inside (lo, hi) with a small denominator.

    The raw value has denominator <= max_den relative to the interval
    width, so downstream exact arithmetic stays cheap.
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    den = rng.randint(2, max_den)
    num = rng.randint(1, den - 1)
    return lo + (hi - lo) * Fraction(num, den)


def subseed(seed: int, index: int) -> int:
    """Fixed splitting rule for deriving per-task seeds."""
    return (seed * 1_000_003 + index) % (2**63)
