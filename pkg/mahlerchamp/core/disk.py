"""
Disk - Closed disks B(center, radius) with exact rational radius.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

The center may be a GaussianRational, a SymbolicValue or a ComplexBox.
Geometric tests hold for every point of the center enclosure.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

from .balls import ComplexBox
from .gaussian import ZERO, GaussianRational
from .symbolic import SymbolicValue

Center = Union[GaussianRational, SymbolicValue, ComplexBox]


@dataclass(frozen=True)
class Disk:
    center: Center
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError(f"Disk radius must be positive, got {self.radius}")

    @classmethod
    def origin(cls, radius) -> "Disk":
        return cls(ZERO, Fraction(radius))

    def center_box(self) -> ComplexBox:
        """Enclosure of the center at the current working precision."""
        c = self.center
        if isinstance(c, GaussianRational):
            return ComplexBox.from_gaussian(c)
        if isinstance(c, SymbolicValue):
            return c.box(mpmath.mp.prec)
        return c

    def center_point(self) -> "mpmath.mpc":
        """Midpoint at the current working precision."""
        return self.center_box().center

    def center_error(self) -> "mpmath.mpf":
        """Bound on |center_point() - center|."""
        return self.center_box().radius

    def radius_mpf(self) -> "mpmath.mpf":
        return mpmath.mpf(self.radius.numerator) / self.radius.denominator

    def radius_lower(self) -> "mpmath.mpf":
        return ComplexBox.from_fraction(self.radius).bounds()[0]

    def as_box(self) -> ComplexBox:
        return self.center_box().widen(self.radius)

    def contains_box(self, box: ComplexBox) -> bool:
        """True when the box lies strictly inside the open disk."""
        return (box - self.center_box()).abs_upper() < self.radius_lower()

    def contains_exact(self, q: GaussianRational) -> bool:
        """Exact test |q - center| < radius for GaussianRational centers."""
        if isinstance(self.center, GaussianRational):
            return (q - self.center).norm() < self.radius * self.radius
        return self.contains_box(ComplexBox.from_gaussian(q))

    def describe(self) -> str:
        c = self.center
        text = c.canonical() if isinstance(c, GaussianRational) else mpmath.nstr(self.center_point(), 10)
        return f"B({text}, {self.radius})"
