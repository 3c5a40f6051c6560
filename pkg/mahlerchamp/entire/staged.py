"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Staged Functions - f_m = g + eps_0 + sum eps_{n,j} z^e P_{n,j}(z).

Provides:
- PerturbationTerm, one eps z^e P summand with its recorded nu bound
- StagedFunction, immutable; adding a term returns a new function
- Box evaluation (base enclosure plus the accumulated perturbation
  polynomial H with ball coefficients), symbolic evaluation at exact
  points, exact Taylor coefficients, derivatives of any order
- tail_certificate, the bound on every stage not yet constructed
"""

import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import mpmath

from ..core.balls import ComplexBox
from ..core.errors import MahlerError
from ..core.gaussian import ZERO, GaussianRational, gaussian
from ..core.symbolic import NOT_EXACT, SymbolicValue, enclose_relative, reduce_exact
from .base_functions import BaseFunction
from .evaluable import Evaluable, poly_eval_box
from .polynomial import Polynomial
from .theta import ThetaSequence

logger = logging.getLogger(__name__)

# exact terms summed before the geometric remainder takes over
TAIL_EXACT_STAGES = 6


class InvalidSchedule(MahlerError):
    """A perturbation term breaks its nu bound, or the tail cannot be bounded."""
    pass


def term_exponent(stage: int, index: int) -> int:
    """n+1 for j = 0, n+2 otherwise."""
    return stage + 1 if index == 0 else stage + 2


@dataclass(frozen=True)
class PerturbationTerm:
    stage: int
    index: int
    epsilon: SymbolicValue
    poly: Polynomial
    nu: Fraction
    kind: str = "perturb"
    exponent: int = field(default=-1)

    def __post_init__(self):
        if self.stage < 0 or self.index < 0:
            raise ValueError(f"Invalid term position ({self.stage}, {self.index})")
        expected = term_exponent(self.stage, self.index)
        if self.exponent == -1:
            object.__setattr__(self, "exponent", expected)
        elif self.exponent != expected:
            raise ValueError(
                f"Term ({self.stage}, {self.index}) must have exponent {expected}, "
                f"got {self.exponent}"
            )
        object.__setattr__(self, "nu", Fraction(self.nu))
        if self.poly.is_zero():
            raise ValueError("Perturbation polynomial must be nonzero")

    @property
    def full_poly(self) -> Polynomial:
        """z^e P(z)."""
        return self.poly.shift(self.exponent)

    @property
    def degree(self) -> int:
        return self.exponent + self.poly.degree

    def epsilon_box(self, bits: int) -> ComplexBox:
        return enclose_relative(self.epsilon, bits)

    def epsilon_upper(self, bits: int = 64) -> Fraction:
        """Certified rational upper bound on |eps|."""
        exact = reduce_exact(self.epsilon)
        if exact is not NOT_EXACT:
            return exact.abs_upper()
        return self.epsilon_box(bits).abs_upper_fraction()

    def within_nu(self) -> bool:
        exact = reduce_exact(self.epsilon)
        if exact is not NOT_EXACT:
            return not exact.is_zero() and exact.norm() < self.nu * self.nu
        box = self.epsilon_box(64)
        return box.abs_lower() > 0 and self.epsilon_upper() < self.nu

    def sup_on(self, reach: Fraction) -> Fraction:
        """Upper bound of |z^e P(z)| on |z| <= reach."""
        return self.full_poly.sup_bound(Fraction(reach))

    def contribution_upper(self, reach: Fraction) -> Fraction:
        return self.epsilon_upper() * self.sup_on(reach)


class StagedFunction(Evaluable):
    """The function of a completed or in-progress stage."""

    def __init__(
        self,
        base: BaseFunction,
        epsilon0: Optional[SymbolicValue] = None,
        terms: Iterable[PerturbationTerm] = (),
    ):
        self.base = base
        self.epsilon0 = epsilon0 if epsilon0 is not None else SymbolicValue.exact(ZERO)
        self.terms: Tuple[PerturbationTerm, ...] = tuple(terms)
        self.id = f"staged[{base.id};{len(self.terms)}]"
        self._coeff_cache: Dict[int, List[ComplexBox]] = {}
        self._lock = threading.Lock()

    @property
    def is_transcendental(self) -> bool:
        return self.base.is_transcendental

    # construction -------------------------------------------------------

    def with_term(self, term: PerturbationTerm) -> "StagedFunction":
        return StagedFunction(self.base, self.epsilon0, self.terms + (term,))

    def with_epsilon0(self, epsilon0: SymbolicValue) -> "StagedFunction":
        return StagedFunction(self.base, epsilon0, self.terms)

    def terms_of_stage(self, stage: int) -> List[PerturbationTerm]:
        return [t for t in self.terms if t.stage == stage]

    def perturbation_degree(self) -> int:
        """Degree of the accumulated perturbation polynomial (0 with no terms)."""
        return max((t.degree for t in self.terms), default=0)

    # box evaluation -----------------------------------------------------

    def perturbation_coefficients(self) -> List[ComplexBox]:
        """Ball coefficients of H = sum eps z^e P at the working precision."""
        prec = mpmath.mp.prec
        cached = self._coeff_cache.get(prec)
        if cached is not None:
            return cached
        coeffs = [ComplexBox.exact(0) for _ in range(self.perturbation_degree() + 1)]
        for term in self.terms:
            eps = term.epsilon_box(prec)
            for k, c in enumerate(term.poly.coefficients):
                if not c.is_zero():
                    coeffs[term.exponent + k] = coeffs[term.exponent + k] + eps * c
        with self._lock:
            self._coeff_cache.setdefault(prec, coeffs)
        return coeffs

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        value = self.base.eval_box(box) + self.epsilon0.box(mpmath.mp.prec)
        if self.terms:
            value = value + poly_eval_box(self.perturbation_coefficients(), box)
        return value

    # symbolic evaluation ------------------------------------------------

    def eval_symbolic(self, z) -> SymbolicValue:
        """f(z) as a SymbolicValue; exact points keep every K-valued factor exact."""
        point = z if isinstance(z, SymbolicValue) else SymbolicValue.exact(gaussian(z))
        exact = reduce_exact(point)
        parts = [SymbolicValue.base_eval(self.base, point), self.epsilon0]
        if exact is not NOT_EXACT:
            for term in self.terms:
                factor = term.full_poly.evaluate(exact)
                if not factor.is_zero():
                    parts.append(term.epsilon * factor)
        else:
            for term in self.terms:
                parts.append(term.epsilon * term.full_poly.evaluate_symbolic(point))
        return SymbolicValue.sum(parts)

    def eval(self, z):
        """Symbolic input gives a SymbolicValue, box input a certified box."""
        if isinstance(z, ComplexBox):
            return self.eval_box(z)
        return self.eval_symbolic(z)

    # coefficients -------------------------------------------------------

    def coefficient_shift(self, k: int) -> SymbolicValue:
        """a_k - b_k as a symbolic sum."""
        if k < 0:
            raise ValueError(f"Taylor index must be non-negative, got {k}")
        parts = [self.epsilon0] if k == 0 else []
        for term in self.terms:
            c = term.poly.coefficient(k - term.exponent)
            if not c.is_zero():
                parts.append(term.epsilon * c)
        return SymbolicValue.sum(parts)

    def taylor_coefficient(self, k: int) -> SymbolicValue:
        """a_k = b_k + [k = 0] eps_0 + sum eps coeff(P, k - e)."""
        return SymbolicValue.sum([SymbolicValue.exact(self.base.taylor_coefficient(k)),
                                  self.coefficient_shift(k)])

    def touched_indices(self) -> List[int]:
        """Every k whose coefficient some perturbation changes."""
        touched = {0}
        for term in self.terms:
            for k, c in enumerate(term.poly.coefficients):
                if not c.is_zero():
                    touched.add(term.exponent + k)
        return sorted(touched)

    def derivative(self) -> "StagedDerivative":
        return StagedDerivative(self, 1)

    def inverse_branches(self, w, branches: int) -> List["mpmath.mpc"]:
        """Seeds for f(z) = w from the base, ignoring the small H."""
        return self.base.inverse_branches(mpmath.mpc(w) - self.epsilon0.approx(), branches)

    # schedule checks ----------------------------------------------------

    def check_schedule(self, through_stage: Optional[int] = None) -> None:
        """
        Raises:
            InvalidSchedule: if some term's eps is not certified in (0, nu)
        """
        for term in self.terms:
            if through_stage is not None and term.stage > through_stage:
                continue
            if not term.within_nu():
                raise InvalidSchedule(
                    f"Term ({term.stage}, {term.index}) violates |eps| < nu = {term.nu}"
                )

    def __repr__(self) -> str:
        return f"StagedFunction(base={self.base.id}, terms={len(self.terms)})"


class StagedDerivative(Evaluable):
    """f^(order) of a staged function."""

    def __init__(self, function: StagedFunction, order: int):
        if order < 1:
            raise ValueError("Derivative order must be positive")
        self.function = function
        self.order = order
        self.id = f"{function.id}{chr(39) * order}"
        base = function.base
        for _ in range(order):
            base = base.derivative()
        self.base = base

    @property
    def is_transcendental(self) -> bool:
        return self.function.is_transcendental

    def perturbation_coefficients(self) -> List[ComplexBox]:
        coeffs = self.function.perturbation_coefficients()
        d = self.order
        out = []
        for k in range(len(coeffs) - d):
            out.append(coeffs[k + d] * (math.factorial(k + d) // math.factorial(k)))
        return out

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        value = self.base.eval_box(box)
        coeffs = self.perturbation_coefficients()
        if coeffs:
            value = value + poly_eval_box(coeffs, box)
        return value

    def eval_symbolic(self, z) -> SymbolicValue:
        point = z if isinstance(z, SymbolicValue) else SymbolicValue.exact(gaussian(z))
        exact = reduce_exact(point)
        parts = [SymbolicValue.base_eval(self.base, point)]
        for term in self.function.terms:
            p = term.full_poly
            for _ in range(self.order):
                p = p.derivative()
            if exact is not NOT_EXACT:
                factor = p.evaluate(exact)
                if not factor.is_zero():
                    parts.append(term.epsilon * factor)
            else:
                parts.append(term.epsilon * p.evaluate_symbolic(point))
        return SymbolicValue.sum(parts)

    def derivative(self) -> "StagedDerivative":
        return StagedDerivative(self.function, self.order + 1)


def tail_certificate(
    f: StagedFunction,
    radius,
    through_stage: int,
    theta: Optional[ThetaSequence] = None,
    coarse: bool = False,
) -> Fraction:
    """
    Bound on |sum of all stages after `through_stage`| for |z| <= radius.

    Stage m contributes at most (1/a)(rho/a)^(m+2) with rho = max(1, R) and
    a = m + 2/Theta_{m+2}, because its terms satisfy |eps| L(P) < nu L(P)
    and there are at most (s_m + l_m) of them. With coarse=True the looser
    ((R+1)/m)(rho/m)^(m+2) bound is returned instead.

    Raises:
        InvalidSchedule: if a constructed term breaks its nu bound or the
            radius is too large for the schedule to bound
    """
    radius = Fraction(radius)
    if radius < 0:
        raise ValueError("Tail radius must be non-negative")
    if through_stage < 0:
        raise ValueError("through_stage must be non-negative")
    f.check_schedule(through_stage)
    theta = theta or ThetaSequence()
    rho = max(Fraction(1), radius)
    first = through_stage + 1
    if coarse:
        stop = max(first + TAIL_EXACT_STAGES, math.ceil(2 * rho) + 1)
        total = sum(
            ((radius + 1) / m) * (rho / m) ** (m + 2) for m in range(first, stop)
        )
        ratio = rho / stop
        total += ((radius + 1) / stop) * ratio ** (stop + 2) / (1 - ratio)
        return Fraction(total)

    def scale(m: int) -> Fraction:
        return m + 2 / theta.big_theta(m + 2)

    stop = first + TAIL_EXACT_STAGES
    total = Fraction(0)
    for m in range(first, stop):
        a = scale(m)
        if rho >= a:
            raise InvalidSchedule(f"Radius {radius} exceeds the stage-{m} scale {a}")
        total += (1 / a) * (rho / a) ** (m + 2)
    # Theta is non-increasing, so a_m >= max(stop, 2/Theta_{stop+2}) past stop
    a_star = max(Fraction(stop), 2 / theta.big_theta(stop + 2))
    ratio = rho / a_star
    if ratio > Fraction(1, 2):
        raise InvalidSchedule(f"Radius {radius} too large for the tail remainder")
    total += (1 / a_star) * ratio ** (stop + 2) / (1 - ratio)
    logger.debug("tail_certificate(R=%s, n=%s) = %s", radius, through_stage, float(total))
    return total
