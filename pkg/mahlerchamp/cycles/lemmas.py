"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Perturbation Lemmas - Iterates and periodic points of g + eps P.

Provides:
- EpsilonPerturbed, the evaluable g + eps P where eps is exact or a ball
- phi_check: f^k = g^k + eps phi_k with the recursion
  phi_1 = P(z) and
  phi_{k+1} = phi_k * int_0^1 g'(g^k(z) + t eps phi_k) dt + P(g^k(z) + eps phi_k),
  the integral done by certified Gauss-Legendre (or exactly, by a divided
  difference, when g is a polynomial and every input lies in K)
- fixed_point_census: certified fixed points in a disk with multiplier filter
- fixed_point_regime: an eps-ball (delta1, delta2) and radius R on which
  g + eps P has many admissible fixed points and repelling t-cycles, for
  every eps in the ball at once
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Union

import mpmath

from ..core.balls import ComplexBox
from ..core.disk import Disk
from ..core.errors import SearchExhausted
from ..core.gaussian import GaussianRational, gaussian
from ..core.precision import PrecisionPolicy, default_policy
from ..entire.base_functions import BaseFunction, PolynomialBase
from ..entire.evaluable import Evaluable, MinusIdentity, value_box
from ..entire.polynomial import Polynomial
from ..rootcount.winding import count_zeros
from .finder import PeriodPreconditionError, find_cycles
from .quadrature import gauss_legendre
from .records import CycleRecord

logger = logging.getLogger(__name__)

Epsilon = Union[GaussianRational, ComplexBox, int, Fraction]

REGIME_HALVINGS = 10
REGIME_RADII = (Fraction(4), Fraction(8), Fraction(16), Fraction(32), Fraction(64))


def _epsilon_box(eps: Epsilon) -> ComplexBox:
    if isinstance(eps, ComplexBox):
        return eps
    return value_box(gaussian(eps))


class EpsilonPerturbed(Evaluable):
    """g + eps P."""

    def __init__(self, g: Evaluable, P: Evaluable, eps: Epsilon):
        self.g = g
        self.P = P
        self.eps = eps if isinstance(eps, ComplexBox) else gaussian(eps)
        label = self.eps.canonical() if isinstance(self.eps, GaussianRational) else repr(self.eps)
        self.id = f"{g.id}+({label})*{P.id}"

    @property
    def is_transcendental(self) -> bool:
        return self.g.is_transcendental

    def eval_box(self, box: ComplexBox) -> ComplexBox:
        return self.g.eval_box(box) + _epsilon_box(self.eps) * self.P.eval_box(box)

    def derivative(self) -> "EpsilonPerturbed":
        return EpsilonPerturbed(self.g.derivative(), self.P.derivative(), self.eps)

    def inverse_branches(self, w, branches: int) -> List["mpmath.mpc"]:
        inverse = getattr(self.g, "inverse_branches", None)
        if inverse is None:
            return []
        shift = _epsilon_box(self.eps).center * self.P(mpmath.mpc(w))
        return inverse(mpmath.mpc(w) - shift, branches)


# ---------------------------------------------------------------------------
# phi recursion
# ---------------------------------------------------------------------------

@dataclass
class PhiResult:
    k: int
    phi: ComplexBox
    eps_phi: ComplexBox
    residual: Fraction
    exact_phi: Optional[GaussianRational] = None

    @property
    def exact(self) -> bool:
        return self.exact_phi is not None


def _phi_exact(g: PolynomialBase, P: Polynomial, eps: GaussianRational, k: int,
               z: GaussianRational) -> GaussianRational:
    y = g.poly.evaluate(z)
    phi = P.evaluate(z)
    dg = g.poly.derivative()
    for _ in range(k - 1):
        h = eps * phi
        if h.is_zero():
            slope = dg.evaluate(y)
        else:
            slope = (g.poly.evaluate(y + h) - g.poly.evaluate(y)) / h
        phi = phi * slope + P.evaluate(y + h)
        y = g.poly.evaluate(y)
    return phi


def phi_check(
    g: BaseFunction,
    P: Polynomial,
    eps,
    k: int,
    z,
    tolerance: Fraction = Fraction(1, 10 ** 12),
    policy: Optional[PrecisionPolicy] = None,
) -> PhiResult:
    """
    phi_k(eps, z) and a certified bound on |f^k(z) - g^k(z) - eps phi_k|.

    Raises:
        QuadratureFailure: if an integral cannot meet the tolerance
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    eps = gaussian(eps)
    if eps.is_zero():
        raise ValueError("eps must be nonzero")
    policy = policy or default_policy()
    exact_z = z if isinstance(z, GaussianRational) else None
    if isinstance(z, (int, Fraction)):
        exact_z = gaussian(z)

    with mpmath.workprec(policy.start_bits):
        eps_box = ComplexBox.from_gaussian(eps)
        if k == 1:
            phi = P.eval_box(ComplexBox.from_gaussian(exact_z) if exact_z is not None
                             else ComplexBox.exact(z))
            exact_phi = P.evaluate(exact_z) if exact_z is not None else None
            return PhiResult(1, phi, eps_box * phi, Fraction(0), exact_phi)

        if isinstance(g, PolynomialBase) and exact_z is not None:
            exact_phi = _phi_exact(g, P, eps, k, exact_z)
            phi = ComplexBox.from_gaussian(exact_phi)
            return PhiResult(k, phi, eps_box * phi, Fraction(0), exact_phi)

        start = ComplexBox.from_gaussian(exact_z) if exact_z is not None else ComplexBox.exact(z)
        dg = g.derivative()
        y = g.eval_box(start)
        phi = P.eval_box(start)
        for _ in range(k - 1):
            shift = eps_box * phi

            def integrand(t: ComplexBox, y=y, shift=shift) -> ComplexBox:
                return dg.eval_box(y + t * shift)

            slope = gauss_legendre(integrand, tolerance)
            phi = phi * slope + P.eval_box(y + shift)
            y = g.eval_box(y)

        f = EpsilonPerturbed(g, P, eps)
        direct = start
        for _ in range(k):
            direct = f.eval_box(direct)
        residual_box = direct - y - eps_box * phi
        residual = residual_box.abs_upper_fraction()
    logger.debug("phi_check(k=%s): residual <= %s", k, float(residual))
    return PhiResult(k, phi, eps_box * phi, residual)


# ---------------------------------------------------------------------------
# fixed points and the eps regime
# ---------------------------------------------------------------------------

def avoids_zero_and_one(record: CycleRecord) -> bool:
    m = record.multiplier
    return m is not None and not m.contains_zero() and not (m - 1).contains_zero()


@dataclass
class FixedPointCensus:
    disk: Disk
    count: int
    cycles: List[CycleRecord]
    rejected: List[CycleRecord] = field(default_factory=list)

    @property
    def admissible(self) -> List[CycleRecord]:
        return [c for c in self.cycles if avoids_zero_and_one(c)]


def fixed_point_census(
    f: Evaluable,
    disk: Disk,
    seed_density: int = 8,
    policy: Optional[PrecisionPolicy] = None,
) -> FixedPointCensus:
    """
    Every fixed point of f in the disk, certified; fixed points whose
    multiplier meets 0 or 1 are listed in `rejected`.

    Raises:
        SearchExhausted: the seeds did not reach all counted fixed points
    """
    policy = policy or default_policy()
    count = count_zeros(MinusIdentity(f), disk, policy=policy).count
    density = seed_density
    last: Optional[SearchExhausted] = None
    for _ in range(3):
        try:
            found = find_cycles(f, 1, disk, want=count, seed_density=density, policy=policy)
            break
        except SearchExhausted as e:
            last = e
            density *= 2
    else:
        raise SearchExhausted(
            f"Located fewer fixed points than the {count} counted in {disk.describe()}",
            diagnostics=dict(last.diagnostics if last else {}, counted=count),
        )
    good = [c for c in found if avoids_zero_and_one(c)]
    bad = [c for c in found if not avoids_zero_and_one(c)]
    for c in bad:
        logger.info("rejecting fixed point %s: multiplier meets {0, 1}", c.describe())
    return FixedPointCensus(disk, count, good, bad)


@dataclass
class RegimeResult:
    delta1: Fraction
    delta2: Fraction
    radius: Fraction
    fixed_points: List[CycleRecord]
    cycles: Dict[int, List[CycleRecord]]
    base_fixed_points: int

    def to_dict(self) -> Dict:
        return {
            "delta1": str(self.delta1),
            "delta2": str(self.delta2),
            "radius": str(self.radius),
            "base_fixed_points": self.base_fixed_points,
            "fixed_points": [c.to_dict() for c in self.fixed_points],
            "cycles": {str(t): [c.to_dict() for c in cs] for t, cs in self.cycles.items()},
        }


def fixed_point_regime(
    g: BaseFunction,
    P: Polynomial,
    k: int,
    M: int,
    delta,
    radii=REGIME_RADII,
    policy: Optional[PrecisionPolicy] = None,
) -> RegimeResult:
    """
    Find 0 < delta1 < delta2 < delta and R such that for every eps in
    (delta1, delta2), g + eps P has at least M fixed points with multiplier
    off {0, 1} and at least M repelling t-cycles in B(0, R), 2 <= t <= k.

    Each candidate is a ball eps = c +/- c/16 with c = delta / 2^j; all
    certificates are computed with that ball as the parameter.

    Raises:
        SearchExhausted: with the failing condition per attempt
    """
    if P.is_zero():
        raise ValueError("P must be nonzero")
    if k < 1 or M < 1:
        raise ValueError("k and M must be positive")
    policy = policy or default_policy()
    delta = Fraction(delta)
    attempts = []
    base_counts: Dict[Fraction, int] = {}
    for j in range(1, REGIME_HALVINGS + 1):
        c = delta / 2 ** j
        eta = c / 16
        with mpmath.workprec(policy.start_bits):
            eps = ComplexBox(c, eta)
        f = EpsilonPerturbed(g, P, eps)
        for R in radii:
            disk = Disk.origin(R)
            try:
                fixed = find_cycles(f, 1, disk, want=M, exhaustive=False,
                                    accept=avoids_zero_and_one, policy=policy)
                cycles = {}
                for t in range(2, k + 1):
                    cycles[t] = find_cycles(f, t, disk, want=M, exhaustive=False,
                                            check_boundary=False,
                                            accept=lambda rec: rec.repelling, policy=policy)
            except (SearchExhausted, PeriodPreconditionError) as e:
                attempts.append({
                    "eps": str(c),
                    "radius": str(R),
                    "reason": e.message,
                    **getattr(e, "diagnostics", {}),
                })
                continue
            if R not in base_counts:
                base_counts[R] = count_zeros(MinusIdentity(g), disk, policy=policy).count
            logger.info("regime found: eps in (%s, %s), R = %s", c - eta, c + eta, R)
            return RegimeResult(c - eta, c + eta, R, fixed[:M],
                                {t: cs[:M] for t, cs in cycles.items()}, base_counts[R])
    raise SearchExhausted(
        f"No eps regime below {delta} gives {M} fixed points and repelling cycles up to period {k}",
        diagnostics={"attempts": attempts},
    )
