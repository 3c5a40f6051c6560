"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Gaussian Rationals - Exact arithmetic in the field Q(i).

Provides:
- GaussianRational, an immutable exact complex rational
- Canonical text form "a/b+c/di" and its parser
- Height, rational modulus bounds and dyadic rounding from mpmath values
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import mpmath

Number = Union[int, Fraction, "GaussianRational"]

_PART = r"[+-]?\d+(?:/\d+)?"
_FORM = re.compile(
    rf"^(?P<re>{_PART})?(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i)?$"
)


def _fraction(value: Union[int, Fraction, str]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if "." in value or "e" in value.lower():
            raise ValueError(f"Floats are not exact rationals: {value!r}")
        return Fraction(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to an exact rational")


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """An element re + im*i of Q(i)."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _fraction(self.re))
        object.__setattr__(self, "im", _fraction(self.im))

    # construction -------------------------------------------------------

    @classmethod
    def of(cls, value: Number) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls(_fraction(value), Fraction(0))

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """
        Parse the canonical text form.

        Accepts "3", "-1/2", "i", "-i", "2/3i", "1/2+1/3i", "1-i".
        """
        source = text.strip().replace(" ", "")
        if not source:
            raise ValueError("Empty Gaussian rational")
        match = _FORM.match(source)
        if not match or (match.group("re") is None and "i" not in source):
            raise ValueError(f"Not a Gaussian rational: {text!r}")
        real = Fraction(match.group("re")) if match.group("re") else Fraction(0)
        imag = Fraction(0)
        if source.endswith("i"):
            raw = match.group("im")
            if raw in (None, "", "+"):
                imag = Fraction(1)
            elif raw == "-":
                imag = Fraction(-1)
            else:
                imag = Fraction(raw)
            if match.group("re") is not None and raw in (None, ""):
                # "3i" parses as re="3" with a bare "i"; move it over
                imag, real = real, Fraction(0)
        return cls(real, imag)

    @classmethod
    def from_mpc(cls, value, bits: int) -> "GaussianRational":
        """Round an mpmath number to the dyadic grid 2^-bits."""
        scale = 2 ** bits
        z = mpmath.mpc(value)
        re_int = int(mpmath.nint(z.real * scale))
        im_int = int(mpmath.nint(z.imag * scale))
        return cls(Fraction(re_int, scale), Fraction(im_int, scale))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: Number) -> "GaussianRational":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "GaussianRational":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Number) -> "GaussianRational":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Number) -> "GaussianRational":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "GaussianRational":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> "GaussianRational":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """|q|^2, exact."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # metrics ------------------------------------------------------------

    def height(self) -> int:
        return max(
            abs(self.re.numerator), self.re.denominator,
            abs(self.im.numerator), self.im.denominator,
        )

    def sort_key(self) -> Tuple[int, Fraction, Fraction]:
        """Height first, then lexicographic on (re, im)."""
        return (self.height(), self.re, self.im)

    def abs_bounds(self, bits: int = 64) -> Tuple[Fraction, Fraction]:
        """
        Rational lo <= |q| <= hi with `bits` bits relative to |q|.

        Exact for real or imaginary q and when |q|^2 is a square.
        """
        if self.im == 0 or self.re == 0:
            size = abs(self.re) + abs(self.im)
            return size, size
        n = self.norm()
        shift = bits + max(0, (n.denominator.bit_length() - n.numerator.bit_length()) // 2 + 1)
        scale = 4 ** shift
        scaled = n.numerator * scale // n.denominator
        root = math.isqrt(scaled)
        lo = Fraction(root, 2 ** shift)
        hi = Fraction(root + 1, 2 ** shift)
        if root * root * n.denominator == n.numerator * scale:
            hi = lo
        if lo * lo > n:
            lo = Fraction(0)
        return lo, hi

    def abs_upper(self, bits: int = 64) -> Fraction:
        return self.abs_bounds(bits)[1]

    def to_mpc(self) -> "mpmath.mpc":
        """Nearest mpmath value at the current working precision."""
        return mpmath.mpc(
            mpmath.mpf(self.re.numerator) / self.re.denominator,
            mpmath.mpf(self.im.numerator) / self.im.denominator,
        )

    # text ---------------------------------------------------------------

    def canonical(self) -> str:
        if self.im == 0:
            return _fmt(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{_fmt(self.im)}i"
        if self.re == 0:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"{_fmt(self.re)}{sign}{imag}"

    def __str__(self) -> str:
        return self.canonical()

    def __repr__(self) -> str:
        return f"GaussianRational({self.canonical()!r})"


def _coerce(value) -> "GaussianRational":
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GaussianRational(Fraction(value), Fraction(0))
    return None


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


def gaussian(value) -> GaussianRational:
    """Coerce int, Fraction, str or GaussianRational."""
    if isinstance(value, str):
        return GaussianRational.parse(value)
    return GaussianRational.of(value)


def fraction_from_mpf(value) -> Fraction:
    """
    Exact rational value of a finite mpmath float or point interval.

    The value is read as stored, without rounding to the working precision.

    Raises:
        ValueError: for infinities, nan and intervals of positive width
    """
    if hasattr(value, "_mpi_"):
        raw, other = value._mpi_
        if raw != other:
            raise ValueError(f"Not a point interval: {value}")
    else:
        raw = (value if isinstance(value, mpmath.mpf) else mpmath.mpf(value))._mpf_
    sign, man, exp, _ = raw
    if not man and exp:
        raise ValueError(f"Not a finite number: {value}")
    man = -int(man) if sign else int(man)
    exp = int(exp)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def _dyadic_ceil(q: Fraction, bits: int) -> Fraction:
    if q == 0:
        return q
    shift = bits - (abs(q.numerator).bit_length() - q.denominator.bit_length())
    scale = Fraction(2) ** shift
    return Fraction(math.ceil(q * scale)) / scale


def dyadic_upper(value, bits: int = 64) -> Fraction:
    """Rational upper bound for an mpmath real, with at most `bits` of mantissa."""
    return _dyadic_ceil(fraction_from_mpf(value), bits)


def dyadic_lower(value, bits: int = 64) -> Fraction:
    """Rational lower bound for an mpmath real, with at most `bits` of mantissa."""
    return -_dyadic_ceil(-fraction_from_mpf(value), bits)
