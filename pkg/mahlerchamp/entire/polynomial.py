"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Polynomials - Exact polynomials over Q(i).

Every nail root of the construction lies in K, so every P_{n,j} is stored
expanded with exact GaussianRational coefficients (lowest degree first),
which keeps divisibility checks exact.
"""

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from ..core.balls import ComplexBox, RealInterval
from ..core.gaussian import ONE, ZERO, GaussianRational, gaussian
from ..core.symbolic import SymbolicValue
from .evaluable import Evaluable, poly_eval_box


class Polynomial(Evaluable):
    """Exact polynomial sum c_k z^k with c_k in K."""

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [gaussian(c) for c in coefficients]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self._coeffs: Tuple[GaussianRational, ...] = tuple(coeffs)
        self.id = f"poly[{', '.join(c.canonical() for c in self._coeffs)}]"

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, value) -> "Polynomial":
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coefficient=ONE) -> "Polynomial":
        return cls([ZERO] * degree + [gaussian(coefficient)])

    @classmethod
    def from_roots(cls, roots: Iterable[GaussianRational], multiplicity: int = 1) -> "Polynomial":
        result = cls([ONE])
        for root in roots:
            factor = cls([-gaussian(root), ONE])
            for _ in range(multiplicity):
                result = result * factor
        return result

    @classmethod
    def squared_from_roots(cls, roots: Iterable[GaussianRational]) -> "Polynomial":
        """prod (z - r)^2."""
        return cls.from_roots(roots, multiplicity=2)

    # structure ----------------------------------------------------------

    @property
    def coefficients(self) -> Tuple[GaussianRational, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, k: int) -> GaussianRational:
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return ZERO

    def leading(self) -> GaussianRational:
        if not self._coeffs:
            raise ValueError("Zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[c.canonical() for c in self._coeffs]})"

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(self.coefficient(k) + other.coefficient(k) for k in range(n))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(self.coefficient(k) - other.coefficient(k) for k in range(n))

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            q = gaussian(other)
            return Polynomial(c * q for c in self._coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [ZERO] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def shift(self, power: int) -> "Polynomial":
        """z^power * self."""
        if self.is_zero():
            return self
        return Polynomial([ZERO] * power + list(self._coeffs))

    def divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if divisor.is_zero():
            raise ZeroDivisionError("Polynomial division by zero")
        remainder = list(self._coeffs)
        quotient = [ZERO] * max(len(remainder) - divisor.degree, 1)
        lead_inv = divisor.leading().inverse()
        while len(remainder) - 1 >= divisor.degree and any(not c.is_zero() for c in remainder):
            shift = len(remainder) - 1 - divisor.degree
            factor = remainder[-1] * lead_inv
            quotient[shift] = factor
            for k, c in enumerate(divisor._coeffs):
                remainder[shift + k] = remainder[shift + k] - factor * c
            remainder.pop()
            while remainder and remainder[-1].is_zero():
                remainder.pop()
        return Polynomial(quotient), Polynomial(remainder)

    def divides(self, other: "Polynomial") -> bool:
        """Exact test self | other."""
        if self.is_zero():
            return other.is_zero()
        return other.divmod(self)[1].is_zero()

    def derivative(self) -> "Polynomial":
        return Polynomial(c * k for k, c in enumerate(self._coeffs) if k > 0)

    # evaluation ---------------------------------------------------------

    def evaluate(self, z: GaussianRational) -> GaussianRational:
        """Exact Horner evaluation at a point of K."""
        result = ZERO
        for c in reversed(self._coeffs):
            result = result * z + c
        return result

    def evaluate_symbolic(self, z: SymbolicValue) -> SymbolicValue:
        result = SymbolicValue.exact(ZERO)
        for c in reversed(self._coeffs):
            result = result * z + c
        return result

    def coefficient_boxes(self) -> List[ComplexBox]:
        return [ComplexBox.from_gaussian(c) for c in self._coeffs]

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return poly_eval_box(self.coefficient_boxes(), box)

    # size ---------------------------------------------------------------

    def length_bounds(self, bits: int = 64) -> RealInterval:
        lo = Fraction(0)
        hi = Fraction(0)
        for c in self._coeffs:
            a, b = c.abs_bounds(bits)
            lo += a
            hi += b
        return RealInterval(lo, hi)

    def length_upper(self, bits: int = 64) -> Fraction:
        return self.length_bounds(bits).hi

    def sup_bound(self, reach: Fraction, bits: int = 64) -> Fraction:
        """Upper bound of |P(z)| on |z| <= reach."""
        total = Fraction(0)
        power = Fraction(1)
        for c in self._coeffs:
            total += c.abs_upper(bits) * power
            power *= reach
        return total

    def to_text(self) -> List[str]:
        return [c.canonical() for c in self._coeffs]

    @classmethod
    def from_text(cls, items: Sequence[str]) -> "Polynomial":
        return cls(GaussianRational.parse(t) for t in items)


def poly_length(p: Polynomial) -> RealInterval:
    """Enclosure of L(P), the sum of the absolute values of the coefficients."""
    return p.length_bounds()
