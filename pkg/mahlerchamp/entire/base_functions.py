"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Base Functions - The entire function g the construction starts from.

Provides:
- BaseFunction, the contract every base must satisfy
- ExpAffine: e^z + c0 + c1 z (exp, exp-1, exp+z)
- Trig: +/- sin and +/- cos
- PolynomialBase: non-transcendental bases used by tests and degenerate checks

All Taylor coefficients are exact rationals; tail bounds are rational
upper bounds from a ratio-test majorant.
"""

import math
from abc import abstractmethod
from fractions import Fraction
from typing import Callable, List, Optional

import mpmath

from ..core.balls import ComplexBox
from ..core.gaussian import ZERO, GaussianRational, gaussian
from .evaluable import Evaluable
from .polynomial import Polynomial


def factorial_tail(radius: Fraction, order: int, coefficient_abs: Callable[[int], Fraction]) -> Fraction:
    """
    Upper bound of sum_{n > order} |b_n| R^n when |b_n| <= 1/n! for n >= 2.

    Terms up to M = max(order + 1, ceil(2R), 1) are summed exactly; the rest
    is bounded by the geometric majorant R^(M+1) / (M+1)! / (1 - R/(M+2)).
    The bound never grows with the order.
    """
    radius = Fraction(radius)
    if radius < 0:
        raise ValueError("Tail radius must be non-negative")
    start = max(order + 1, 0)
    stop = max(start, math.ceil(2 * radius), 1)
    total = Fraction(0)
    for n in range(start, stop + 1):
        total += coefficient_abs(n) * radius ** n
    head = radius ** (stop + 1) / math.factorial(stop + 1)
    return total + head / (1 - radius / (stop + 2))


class BaseFunction(Evaluable):
    """Entire function with exact Taylor coefficients."""

    id: str = "base"

    @abstractmethod
    def taylor_coefficient(self, n: int) -> GaussianRational:
        """Exact b_n."""

    @abstractmethod
    def eval_enclosure(self, box: ComplexBox) -> ComplexBox:
        """Box containing g(z) for every z in the box."""

    @abstractmethod
    def tail_bound(self, radius: Fraction, order: int) -> Fraction:
        """Bound on |sum_{n > order} b_n z^n| for |z| <= radius."""

    @abstractmethod
    def derivative(self) -> "BaseFunction":
        """g' as a base function."""

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.eval_enclosure(box)

    def exact_value(self, z: GaussianRational) -> Optional[GaussianRational]:
        """g(z) when it is known to lie in K, else None."""
        return None

    @property
    def omitted_value(self) -> Optional[GaussianRational]:
        """A value g never takes, if one is known."""
        return None

    def inverse_branches(self, w, branches: int) -> List["mpmath.mpc"]:
        """Approximate solutions of g(z) = w, for seeding Newton."""
        return []

    def taylor_polynomial(self, order: int) -> Polynomial:
        return Polynomial(self.taylor_coefficient(n) for n in range(order + 1))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.id!r})"


def _exp_affine_id(c0: GaussianRational, c1: GaussianRational) -> str:
    known = {
        (ZERO, ZERO): "exp",
        (GaussianRational(-1), ZERO): "exp_minus_1",
        (ZERO, GaussianRational(1)): "exp_plus_z",
        (GaussianRational(1), ZERO): "exp_plus_1",
    }
    return known.get((c0, c1), f"exp_affine[{c0.canonical()},{c1.canonical()}]")


class ExpAffine(BaseFunction):
    """e^z + c0 + c1 z."""

    def __init__(self, c0=0, c1=0):
        self.c0 = gaussian(c0)
        self.c1 = gaussian(c1)
        self.id = _exp_affine_id(self.c0, self.c1)

    @property
    def is_transcendental(self) -> bool:
        return True

    def taylor_coefficient(self, n: int) -> GaussianRational:
        if n < 0:
            raise ValueError(f"Negative Taylor index {n}")
        value = GaussianRational(Fraction(1, math.factorial(n)))
        if n == 0:
            return value + self.c0
        if n == 1:
            return value + self.c1
        return value

    def eval_enclosure(self, box: ComplexBox) -> ComplexBox:
        result = box.exp()
        if not self.c1.is_zero():
            result = result + box * self.c1
        if not self.c0.is_zero():
            result = result + self.c0
        return result

    def tail_bound(self, radius: Fraction, order: int) -> Fraction:
        return factorial_tail(
            radius, order, lambda n: self.taylor_coefficient(n).abs_upper()
        )

    def derivative(self) -> "ExpAffine":
        return ExpAffine(self.c1, 0)

    def exact_value(self, z: GaussianRational) -> Optional[GaussianRational]:
        if z.is_zero():
            return GaussianRational(1) + self.c0
        return None

    @property
    def omitted_value(self) -> Optional[GaussianRational]:
        return self.c0 if self.c1.is_zero() else None

    def inverse_branches(self, w, branches: int) -> List["mpmath.mpc"]:
        shifted = mpmath.mpc(w) - self.c0.to_mpc()
        if self.c1.is_zero():
            if shifted == 0:
                return []
            principal = mpmath.log(shifted)
            turn = 2j * mpmath.pi
            return [principal + m * turn for m in _branch_order(branches)]
        # e^z + c1 z = v  <=>  z = v/c1 - W(e^(v/c1) / c1)
        c1 = self.c1.to_mpc()
        ratio = shifted / c1
        argument = mpmath.exp(ratio) / c1
        return [ratio - mpmath.lambertw(argument, m) for m in _branch_order(branches)]


class Trig(BaseFunction):
    """sign * sin(z) or sign * cos(z)."""

    def __init__(self, kind: str = "sin", sign: int = 1):
        if kind not in ("sin", "cos"):
            raise ValueError(f"Unknown trigonometric kind: {kind}")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.kind = kind
        self.sign = sign
        self.id = kind if sign == 1 else f"neg_{kind}"

    @property
    def is_transcendental(self) -> bool:
        return True

    def taylor_coefficient(self, n: int) -> GaussianRational:
        if n < 0:
            raise ValueError(f"Negative Taylor index {n}")
        odd = n % 2 == 1
        if (self.kind == "sin") != odd:
            return ZERO
        half = (n - 1) // 2 if odd else n // 2
        return GaussianRational(Fraction(self.sign * (-1) ** half, math.factorial(n)))

    def eval_enclosure(self, box: ComplexBox) -> ComplexBox:
        value = box.sin() if self.kind == "sin" else box.cos()
        return value if self.sign == 1 else -value

    def tail_bound(self, radius: Fraction, order: int) -> Fraction:
        return factorial_tail(radius, order, lambda n: Fraction(1, math.factorial(n)))

    def derivative(self) -> "Trig":
        if self.kind == "sin":
            return Trig("cos", self.sign)
        return Trig("sin", -self.sign)

    def exact_value(self, z: GaussianRational) -> Optional[GaussianRational]:
        if z.is_zero():
            return ZERO if self.kind == "sin" else GaussianRational(self.sign)
        return None

    def inverse_branches(self, w, branches: int) -> List["mpmath.mpc"]:
        target = mpmath.mpc(w) * self.sign
        two_pi = 2 * mpmath.pi
        if self.kind == "sin":
            a = mpmath.asin(target)
            heads = [a, mpmath.pi - a]
        else:
            a = mpmath.acos(target)
            heads = [a, -a]
        return [h + m * two_pi for m in _branch_order(branches) for h in heads]


class PolynomialBase(BaseFunction):
    """A polynomial treated as a base; not transcendental."""

    def __init__(self, coefficients, name: Optional[str] = None):
        self.poly = coefficients if isinstance(coefficients, Polynomial) else Polynomial(coefficients)
        self.id = name or f"poly[{','.join(self.poly.to_text())}]"

    def taylor_coefficient(self, n: int) -> GaussianRational:
        return self.poly.coefficient(n)

    def eval_enclosure(self, box: ComplexBox) -> ComplexBox:
        return self.poly.eval_box(box)

    def tail_bound(self, radius: Fraction, order: int) -> Fraction:
        radius = Fraction(radius)
        return sum(
            (self.poly.coefficient(n).abs_upper() * radius ** n
             for n in range(max(order + 1, 0), self.poly.degree + 1)),
            Fraction(0),
        )

    def derivative(self) -> "PolynomialBase":
        return PolynomialBase(self.poly.derivative(), name=f"{self.id}'")

    def exact_value(self, z: GaussianRational) -> Optional[GaussianRational]:
        return self.poly.evaluate(z)

    def inverse_branches(self, w, branches: int) -> List["mpmath.mpc"]:
        coeffs = [c.to_mpc() for c in self.poly.coefficients]
        if len(coeffs) < 2:
            return []
        coeffs[0] = coeffs[0] - mpmath.mpc(w)
        if len(coeffs) == 2:
            return [-coeffs[0] / coeffs[1]]
        try:
            return list(mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=64))
        except mpmath.libmp.NoConvergence:
            return []


def _branch_order(branches: int) -> List[int]:
    """0, 1, -1, 2, -2, ... up to +/- branches."""
    order = [0]
    for m in range(1, branches + 1):
        order.extend([m, -m])
    return order
