"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Complex Boxes - Rigorous enclosures on top of mpmath.iv.

A ComplexBox wraps an mpmath.iv complex interval [a, b] + i[c, d]. Every
operation rounds outward at the ambient mpmath precision (mpmath.mp.prec,
usually set with mpmath.workprec). `center` and `radius` describe a disk
that covers the rectangle, for callers that think in balls.
"""

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

import mpmath
from mpmath import iv

from .errors import DivisionByEnclosedZero
from .gaussian import GaussianRational, dyadic_lower, dyadic_upper


def ambient(method):
    """Run `method` with mpmath.iv at the precision of mpmath.mp."""
    @functools.wraps(method)
    def wrapper(*args, **kwargs):
        saved = iv.prec
        iv.prec = mpmath.mp.prec
        try:
            return method(*args, **kwargs)
        finally:
            iv.prec = saved
    return wrapper


def _floor(x) -> "mpmath.mpf":
    return mpmath.mpf(x.a, rounding="f")


def _ceil(x) -> "mpmath.mpf":
    return mpmath.mpf(x.b, rounding="c")


def _exact(raw) -> "mpmath.mpf":
    """An endpoint tuple as an mpf, without rounding."""
    return mpmath.mp.make_mpf(raw)


def _midpoint(lo, hi) -> "mpmath.mpf":
    return mpmath.ldexp(mpmath.fadd(lo, hi, exact=True), -1)


def _rational(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def _interval(value):
    """mpmath.iv complex interval around an exact or mpmath value."""
    if isinstance(value, ComplexBox):
        return value.value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        value = GaussianRational.of(value)
    if isinstance(value, GaussianRational):
        return iv.mpc(_rational(value.re), _rational(value.im))
    x = iv.convert(value)
    return x if isinstance(x, iv.mpc) else iv.mpc(x, 0)


def _upper(value) -> "mpmath.mpf":
    """Upper bound of a nonnegative real given as a number, interval or box."""
    if isinstance(value, ComplexBox):
        return value.abs_upper()
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return _ceil(_rational(value))
    if hasattr(value, "_mpi_"):
        return _ceil(value)
    return mpmath.mpf(value, rounding="c")


@dataclass(frozen=True)
class RealInterval:
    """Exact rational bounds lo <= x <= hi."""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}]")

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


class ComplexBox:
    """
    Rectangular enclosure of a complex number.

    ComplexBox(center, radius) covers the disk B(center, radius).
    """

    __slots__ = ("value",)

    @ambient
    def __init__(self, center=0, radius=0):
        r = _upper(radius)
        if mpmath.isnan(r) or r < 0:
            raise ValueError(f"Invalid box radius: {r}")
        value = _interval(center)
        if r:
            span = iv.mpf([-r, r])
            value = value + iv.mpc(span, span)
        self.value = value

    # construction -------------------------------------------------------

    @classmethod
    def of_interval(cls, value) -> "ComplexBox":
        """Wrap an mpmath.iv interval as it is."""
        box = cls.__new__(cls)
        box.value = value if isinstance(value, iv.mpc) else iv.mpc(value, 0)
        return box

    @classmethod
    def exact(cls, value) -> "ComplexBox":
        """Box around a value that is exactly representable."""
        return cls(value)

    @classmethod
    def from_gaussian(cls, q: GaussianRational) -> "ComplexBox":
        return cls(q)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "ComplexBox":
        return cls(Fraction(q))

    @classmethod
    @ambient
    def pi(cls) -> "ComplexBox":
        return cls.of_interval(+iv.pi)

    @classmethod
    @ambient
    def unit(cls, turns: Fraction) -> "ComplexBox":
        """Enclosure of e^(2 pi i turns)."""
        angle = 2 * (+iv.pi) * _rational(turns)
        return cls.of_interval(iv.exp(iv.mpc(0, angle)))

    @classmethod
    def coerce(cls, value: Union["ComplexBox", GaussianRational, int, Fraction]) -> "ComplexBox":
        if isinstance(value, ComplexBox):
            return value
        return cls(value)

    @classmethod
    def hull(cls, boxes: Iterable["ComplexBox"]) -> "ComplexBox":
        items = [b.bounds() for b in boxes]
        if not items:
            raise ValueError("Hull of no boxes")
        return cls.of_interval(iv.mpc(
            iv.mpf([min(b[0] for b in items), max(b[1] for b in items)]),
            iv.mpf([min(b[2] for b in items), max(b[3] for b in items)]),
        ))

    # geometry -----------------------------------------------------------

    def bounds(self) -> Tuple["mpmath.mpf", "mpmath.mpf", "mpmath.mpf", "mpmath.mpf"]:
        """Exact endpoints (re_lo, re_hi, im_lo, im_hi)."""
        (a, b), (c, d) = self.value._mpci_
        return _exact(a), _exact(b), _exact(c), _exact(d)

    @property
    def center(self) -> "mpmath.mpc":
        """Exact midpoint of the box."""
        a, b, c, d = self.bounds()
        return mpmath.mp.make_mpc((_midpoint(a, b)._mpf_, _midpoint(c, d)._mpf_))

    @property
    @ambient
    def radius(self) -> "mpmath.mpf":
        """Radius of a disk around `center` covering the box."""
        a, b, c, d = self.bounds()
        dx = mpmath.fsub(b, _midpoint(a, b), exact=True)
        dy = mpmath.fsub(d, _midpoint(c, d), exact=True)
        square = mpmath.fadd(mpmath.fmul(dx, dx, exact=True), mpmath.fmul(dy, dy, exact=True), exact=True)
        return _ceil(iv.sqrt(iv.convert(square)))

    # queries ------------------------------------------------------------

    def contains_zero(self) -> bool:
        a, b, c, d = self.bounds()
        return a <= 0 <= b and c <= 0 <= d

    def contains(self, point) -> bool:
        """True when the point or box lies in this box."""
        pa, pb, pc, pd = ComplexBox.coerce(point).bounds()
        a, b, c, d = self.bounds()
        return a <= pa and pb <= b and c <= pc and pd <= d

    def overlaps(self, other: "ComplexBox") -> bool:
        a, b, c, d = self.bounds()
        oa, ob, oc, od = ComplexBox.coerce(other).bounds()
        return a <= ob and oa <= b and c <= od and oc <= d

    def inside(self, other: "ComplexBox") -> bool:
        """True when self lies in the interior of other."""
        a, b, c, d = self.bounds()
        oa, ob, oc, od = other.bounds()
        return oa < a and b < ob and oc < c and d < od

    @ambient
    def abs_upper(self) -> "mpmath.mpf":
        return _ceil(abs(self.value))

    @ambient
    def abs_lower(self) -> "mpmath.mpf":
        low = _floor(abs(self.value))
        return low if low > 0 else mpmath.mpf(0)

    def abs_upper_fraction(self, bits: int = 64) -> Fraction:
        return dyadic_upper(self.abs_upper(), bits)

    def abs_lower_fraction(self, bits: int = 64) -> Fraction:
        return max(Fraction(0), dyadic_lower(self.abs_lower(), bits))

    def distance_lower(self, other: "ComplexBox") -> "mpmath.mpf":
        return (self - other).abs_lower()

    @ambient
    def widen(self, extra) -> "ComplexBox":
        """Add the square [-extra, extra]^2."""
        r = _upper(extra)
        span = iv.mpf([-r, r])
        return ComplexBox.of_interval(self.value + iv.mpc(span, span))

    # arithmetic ---------------------------------------------------------

    @ambient
    def __add__(self, other) -> "ComplexBox":
        return ComplexBox.of_interval(self.value + _interval(other))

    __radd__ = __add__

    @ambient
    def __sub__(self, other) -> "ComplexBox":
        return ComplexBox.of_interval(self.value - _interval(other))

    @ambient
    def __rsub__(self, other) -> "ComplexBox":
        return ComplexBox.of_interval(_interval(other) - self.value)

    def __neg__(self) -> "ComplexBox":
        return ComplexBox.of_interval(-self.value)

    @ambient
    def __mul__(self, other) -> "ComplexBox":
        return ComplexBox.of_interval(self.value * _interval(other))

    __rmul__ = __mul__

    @ambient
    def reciprocal(self) -> "ComplexBox":
        if self.contains_zero():
            raise DivisionByEnclosedZero(
                f"Denominator enclosure contains 0 ({self!r})"
            )
        return ComplexBox.of_interval(1 / self.value)

    def __truediv__(self, other) -> "ComplexBox":
        return self * ComplexBox.coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "ComplexBox":
        return ComplexBox.coerce(other) * self.reciprocal()

    def __pow__(self, exponent: int) -> "ComplexBox":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = ComplexBox.exact(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # elementary functions ----------------------------------------------

    @ambient
    def exp(self) -> "ComplexBox":
        return ComplexBox.of_interval(iv.exp(self.value))

    @ambient
    def sin(self) -> "ComplexBox":
        return ComplexBox.of_interval(iv.sin(self.value))

    @ambient
    def cos(self) -> "ComplexBox":
        return ComplexBox.of_interval(iv.cos(self.value))

    # identity -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexBox):
            return NotImplemented
        return self.value._mpci_ == other.value._mpci_

    def __hash__(self) -> int:
        return hash(self.value._mpci_)

    def __repr__(self) -> str:
        return f"ComplexBox({mpmath.nstr(self.center, 12)} +/- {mpmath.nstr(self.radius, 4)})"
