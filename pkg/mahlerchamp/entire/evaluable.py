"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Evaluables - Anything that maps a ComplexBox to a certified ComplexBox.

Root counting, Newton refinement and cycle search only need this contract:
eval_box(box) returns a box containing f(z) for every z in box, and
derivative() returns another evaluable. The combinators here build
f - alpha, f(z) - z, f^k and (f^k)' from a given evaluable.
"""

from abc import ABC, abstractmethod
from typing import List, Sequence

import mpmath

from ..core.balls import ComplexBox
from ..core.gaussian import GaussianRational
from ..core.symbolic import SymbolicValue


class Evaluable(ABC):
    """Holomorphic function with certified box evaluation."""

    id: str = "evaluable"

    @abstractmethod
    def eval_box(self, box: ComplexBox) -> ComplexBox:
        """Box containing f(z) for all z in `box`."""

    @abstractmethod
    def derivative(self) -> "Evaluable":
        """The derivative as another evaluable."""

    @property
    def is_transcendental(self) -> bool:
        return False

    def eval_point(self, z) -> ComplexBox:
        return self.eval_box(ComplexBox.exact(z))

    def __call__(self, z) -> "mpmath.mpc":
        return self.eval_point(z).center

    def minus(self, alpha) -> "Evaluable":
        return Shifted(self, alpha)


def value_box(value) -> ComplexBox:
    """Box for a constant at the current working precision."""
    if isinstance(value, ComplexBox):
        return value
    if isinstance(value, SymbolicValue):
        return value.box(mpmath.mp.prec)
    if isinstance(value, GaussianRational):
        return ComplexBox.from_gaussian(value)
    return ComplexBox.coerce(value)


def poly_eval_box(coefficients: Sequence[ComplexBox], box: ComplexBox) -> ComplexBox:
    """
    Mean-value evaluation of sum h_k z^k over a box.

    The value at the center is computed by Horner; the spread over the box
    is bounded by radius * sum k |h_k| reach^(k-1), with reach >= |z| on the box.
    """
    if not coefficients:
        return ComplexBox.exact(0)
    point = ComplexBox.exact(box.center)
    value = coefficients[-1]
    for coef in reversed(coefficients[:-1]):
        value = value * point + coef
    if box.radius > 0 and len(coefficients) > 1:
        reach = ComplexBox.exact(box.abs_upper())
        bound = ComplexBox.exact(0)
        power = ComplexBox.exact(1)
        for k in range(1, len(coefficients)):
            bound = bound + power * coefficients[k].abs_upper() * k
            power = power * reach
        value = value.widen(bound * box.radius)
    return value


class Shifted(Evaluable):
    """f(z) - alpha."""

    def __init__(self, inner: Evaluable, alpha):
        self.inner = inner
        self.alpha = alpha
        self.id = f"{inner.id}-({alpha})"

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.inner.eval_box(box) - value_box(self.alpha)

    def derivative(self) -> Evaluable:
        return self.inner.derivative()

    @property
    def is_transcendental(self) -> bool:
        return self.inner.is_transcendental


class MinusIdentity(Evaluable):
    """f(z) - z."""

    def __init__(self, inner: Evaluable):
        self.inner = inner
        self.id = f"{inner.id}-z"

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.inner.eval_box(box) - box

    def derivative(self) -> Evaluable:
        return Shifted(self.inner.derivative(), 1)


class SumEvaluable(Evaluable):
    """f + g."""

    def __init__(self, left: Evaluable, right: Evaluable):
        self.left = left
        self.right = right
        self.id = f"({left.id})+({right.id})"

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.left.eval_box(box) + self.right.eval_box(box)

    def derivative(self) -> Evaluable:
        return SumEvaluable(self.left.derivative(), self.right.derivative())


class Iterate(Evaluable):
    """f composed with itself k times."""

    def __init__(self, inner: Evaluable, k: int):
        if k < 1:
            raise ValueError(f"Iterate order must be positive, got {k}")
        self.inner = inner
        self.k = k
        self.id = f"{inner.id}^{k}"

    def orbit_boxes(self, box: ComplexBox) -> List[ComplexBox]:
        """[box, f(box), ..., f^k(box)]."""
        boxes = [box]
        for _ in range(self.k):
            boxes.append(self.inner.eval_box(boxes[-1]))
        return boxes

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.orbit_boxes(box)[-1]

    def derivative(self) -> Evaluable:
        return IterateDerivative(self.inner, self.k)


class IterateDerivative(Evaluable):
    """(f^k)' by the chain rule: product of f' along the orbit."""

    def __init__(self, inner: Evaluable, k: int):
        self.inner = inner
        self.k = k
        self.id = f"({inner.id}^{k})'"
        self._fprime = inner.derivative()

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        result = ComplexBox.exact(1)
        current = box
        for i in range(self.k):
            result = result * self._fprime.eval_box(current)
            if i + 1 < self.k:
                current = self.inner.eval_box(current)
        return result

    def derivative(self) -> Evaluable:
        raise NotImplementedError("Second derivatives of iterates are not needed")


class PeriodicEquation(Evaluable):
    """f^k(z) - z, whose zeros are the points of period dividing k."""

    def __init__(self, inner: Evaluable, k: int):
        self.iterate = Iterate(inner, k)
        self.k = k
        self.id = f"{inner.id}^{k}-z"

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.iterate.eval_box(box) - box

    def derivative(self) -> Evaluable:
        return Shifted(self.iterate.derivative(), 1)


