"""
Nail Polynomial - prod (z - tau)^2 over every frozen point, and the nu bounds.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

A perturbation eps z^e P(z) with P divisible by the nail polynomial has a
double zero at every nail root, so values and first derivatives there are
invariant under every later term.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from ..core.gaussian import GaussianRational
from ..core.serialization import gaussian_from_text, gaussian_to_text
from ..entire.polynomial import Polynomial
from ..entire.theta import ThetaSequence


@dataclass(frozen=True)
class NailPolynomial:
    """Distinct roots in nailing order; the expanded square is cached."""
    roots: Tuple[GaussianRational, ...] = ()
    _poly: Polynomial = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        roots = tuple(self.roots)
        if len(set(roots)) != len(roots):
            raise ValueError("Nail roots must be distinct")
        object.__setattr__(self, "roots", roots)
        if self._poly is None:
            object.__setattr__(self, "_poly", Polynomial.squared_from_roots(roots))

    @property
    def poly(self) -> Polynomial:
        return self._poly

    @property
    def D(self) -> int:
        """Number of distinct roots."""
        return len(self.roots)

    @property
    def degree(self) -> int:
        return 2 * len(self.roots)

    def contains(self, q: GaussianRational) -> bool:
        return q in self.roots

    def vanishes_at(self, q: GaussianRational) -> bool:
        """Exact evaluation; agrees with contains() for a consistent cache."""
        return self._poly.evaluate(q).is_zero()

    def with_root(self, q: GaussianRational) -> "NailPolynomial":
        """Adds (z - q)^2; a root already present is a no-op."""
        if q in self.roots:
            return self
        factor = Polynomial([-q, 1])
        return NailPolynomial(self.roots + (q,), self._poly * factor * factor)

    def with_roots(self, qs: Iterable[GaussianRational]) -> "NailPolynomial":
        nail = self
        for q in qs:
            nail = nail.with_root(q)
        return nail

    def to_dict(self) -> Dict[str, List[str]]:
        return {"roots": [gaussian_to_text(q) for q in self.roots]}

    @classmethod
    def from_dict(cls, data: Dict[str, List[str]]) -> "NailPolynomial":
        return cls(tuple(gaussian_from_text(t) for t in data.get("roots", [])))


def step_scale(n: int, theta: ThetaSequence) -> Fraction:
    """n + 2 / Theta_{n+2}."""
    return n + 2 / theta.big_theta(n + 2)


def nu_formula(length: Fraction, budget: int, n: int, theta: ThetaSequence, degree: int) -> Fraction:
    """1 / (L * B * (n + 2/Theta_{n+2})^(n+3+deg P))."""
    if length <= 0:
        raise ValueError("Polynomial length must be positive")
    if budget < 1:
        raise ValueError(f"Step budget must be positive, got {budget}")
    return 1 / (Fraction(length) * budget * step_scale(n, theta) ** (n + 3 + degree))


def nu_bound(n: int, j: int, P: Polynomial, theta: ThetaSequence, budget: int) -> Fraction:
    """
    nu_{n,j} for the term eps_{n,j} z^e P, with L(P) replaced by a certified
    upper bound so the result never exceeds the exact value. The bound does
    not depend on j.
    """
    if P.is_zero():
        raise ValueError("nu is undefined for the zero polynomial")
    if j < 0:
        raise ValueError(f"Term index must be non-negative, got {j}")
    return nu_formula(P.length_upper(), budget, n, theta, P.degree)


def step_budget(n: int, perturbation_degree: int, nail_degree: int) -> int:
    """s-hat_n = 1 + n * max(deg H_n, n + 1 + deg P_n)."""
    return 1 + n * max(perturbation_degree, n + 1 + nail_degree)
