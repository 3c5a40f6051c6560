"""
Newton Refinement - Point Newton iteration and the Krawczyk existence test.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

krawczyk(F, c, rho) certifies that F has exactly one zero in B(c, rho),
which is simple, when |Y F(c)| + |1 - Y F'(X)| rho < rho with Y = 1/F'(c).
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import mpmath

from ..core.balls import ComplexBox
from ..core.errors import DivisionByEnclosedZero
from ..entire.evaluable import Evaluable

logger = logging.getLogger(__name__)

ESCAPE_RADIUS = mpmath.mpf(10) ** 8


@dataclass(frozen=True)
class Isolation:
    """`box` holds the zero; it is the only zero of F in B(center, rho)."""
    box: ComplexBox
    rho: "mpmath.mpf"
    center: "mpmath.mpc"

    def unique_region(self) -> ComplexBox:
        """Box covering the uniqueness disk."""
        return ComplexBox(self.center, self.rho)

    def holds(self, box) -> bool:
        """True when `box` lies in the open uniqueness disk."""
        return (ComplexBox.coerce(box) - ComplexBox.exact(self.center)).abs_upper() < self.rho


def newton_refine(F: Evaluable, seed, max_steps: int = 80) -> Optional["mpmath.mpc"]:
    """Newton from `seed` at the working precision; None if it diverges or stalls."""
    z = mpmath.mpc(seed)
    dF = F.derivative()
    tol = mpmath.ldexp(mpmath.mpf(1), 8 - mpmath.mp.prec)
    last_step = None
    for _ in range(max_steps):
        try:
            value = F.eval_point(z).center
            slope = dF.eval_point(z).center
        except (DivisionByEnclosedZero, ZeroDivisionError, ValueError):
            return None
        if slope == 0 or not mpmath.isfinite(value) or not mpmath.isfinite(slope):
            return None
        step = value / slope
        z = z - step
        if not mpmath.isfinite(z) or abs(z) > ESCAPE_RADIUS:
            return None
        last_step = abs(step)
        if last_step <= tol * (1 + abs(z)):
            return z
    if last_step is not None and last_step <= mpmath.sqrt(tol) * (1 + abs(z)):
        return z
    return None


def krawczyk(F: Evaluable, center, rho) -> Optional[Isolation]:
    """
    Isolation of the unique zero of F in B(center, rho), or None when the
    test fails.
    """
    c = mpmath.mpc(center)
    rho = mpmath.mpf(rho)
    dF = F.derivative()
    try:
        value = F.eval_box(ComplexBox.exact(c))
        slope = dF.eval_box(ComplexBox.exact(c))
        if slope.contains_zero():
            return None
        y = ComplexBox.exact(1 / slope.center)
        spread = dF.eval_box(ComplexBox(c, rho))
    except DivisionByEnclosedZero:
        return None
    a = (y * value).abs_upper()
    b = (ComplexBox.exact(1) - y * spread).abs_upper()
    reach = a + b * rho
    if reach < rho:
        return Isolation(ComplexBox(c, reach), rho, c)
    return None


def _radii(F: Evaluable, z) -> Iterable["mpmath.mpf"]:
    scale = 1 + abs(z)
    prec = mpmath.mp.prec
    for shift in (prec // 3, prec // 4, prec // 6, 24, 12):
        yield mpmath.ldexp(scale, -max(shift, 8))
    # F with ball parameters: the zero moves by about |F(z)| / |F'(z)|
    try:
        value = F.eval_point(z)
        slope = F.derivative().eval_point(z).abs_lower()
    except DivisionByEnclosedZero:
        return
    if value.radius > 0 and slope > 0:
        spread = value.abs_upper() / slope
        for j in (1, 2, 3, 5):
            yield mpmath.ldexp(spread, j)


def certify_zero(F: Evaluable, seed, max_rho=None) -> Optional[Isolation]:
    """Newton-refine `seed`, then try Krawczyk on a few radii."""
    z = newton_refine(F, seed)
    if z is None:
        return None
    for rho in _radii(F, z):
        if max_rho is not None and rho > max_rho:
            continue
        found = krawczyk(F, z, rho)
        if found is not None:
            return found
    logger.debug("krawczyk failed near %s", mpmath.nstr(z, 10))
    return None
