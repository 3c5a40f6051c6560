"""
Rouche Radii - Perturbation sizes that preserve zero counts.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

If |eps| max_{dB} |P| < min_{dB} |g - alpha| then g - alpha + eps P has as
many zeros in B as g - alpha. Both extrema are bracketed by branch and
bound over boundary arcs, so the returned delta is a certified interval.
"""

import heapq
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath

from ..core.balls import RealInterval
from ..core.disk import Disk
from ..core.errors import MahlerError
from ..core.gaussian import dyadic_lower, dyadic_upper
from ..core.precision import PrecisionPolicy, default_policy
from ..entire.evaluable import Evaluable, Shifted
from .winding import INITIAL_ARCS, arc_box, circle_point

logger = logging.getLogger(__name__)

REL_TOL = mpmath.mpf("1e-3")
ITERATION_CAP = 4000


class BoundaryContact(MahlerError):
    """min |g - alpha| on the boundary could not be certified positive."""
    pass


def _bracket(f: Evaluable, disk: Disk, want_max: bool) -> Tuple["mpmath.mpf", "mpmath.mpf"]:
    """(lo, hi) around min|f| (or max|f|) on the boundary, at the working precision."""
    heap: List[Tuple["mpmath.mpf", int, Fraction, Fraction]] = []
    counter = 0
    best = None

    def push(t0: Fraction, t1: Fraction):
        nonlocal counter, best
        box = f.eval_box(arc_box(disk, t0, t1))
        point = f.eval_box(circle_point(disk, (t0 + t1) / 2))
        if want_max:
            witness = point.abs_lower()
            best = witness if best is None or witness > best else best
            key = -box.abs_upper()
        else:
            witness = point.abs_upper()
            best = witness if best is None or witness < best else best
            key = box.abs_lower()
        heapq.heappush(heap, (key, counter, t0, t1))
        counter += 1

    for i in range(INITIAL_ARCS):
        push(Fraction(i, INITIAL_ARCS), Fraction(i + 1, INITIAL_ARCS))

    for _ in range(ITERATION_CAP):
        key, _, t0, t1 = heap[0]
        bound = -key if want_max else key
        if want_max and bound <= best * (1 + REL_TOL):
            break
        if not want_max and bound >= best * (1 - REL_TOL):
            break
        heapq.heappop(heap)
        mid = (t0 + t1) / 2
        push(t0, mid)
        push(mid, t1)
    key = heap[0][0]
    bound = -key if want_max else key
    if want_max:
        return best, bound
    return max(bound, mpmath.mpf(0)), best


def modulus_range(
    f: Evaluable,
    disk: Disk,
    want_max: bool = False,
    policy: Optional[PrecisionPolicy] = None,
) -> RealInterval:
    """Rational interval around min_{dB}|f| (or max_{dB}|f| when want_max)."""
    policy = policy or default_policy()
    with mpmath.workprec(policy.start_bits):
        lo, hi = _bracket(f, disk, want_max)
        return RealInterval(dyadic_lower(lo) if lo > 0 else Fraction(0), dyadic_upper(hi))


def boundary_minimum(
    f: Evaluable,
    disk: Disk,
    alpha=None,
    policy: Optional[PrecisionPolicy] = None,
) -> RealInterval:
    """
    Certified interval around min |f - alpha| on the boundary.

    Raises:
        BoundaryContact: the lower end is not positive at the ceiling precision
    """
    policy = policy or default_policy()
    target = Shifted(f, alpha) if alpha is not None else f
    for bits in policy.levels():
        with mpmath.workprec(bits):
            lo, hi = _bracket(target, disk, want_max=False)
            if lo > 0:
                return RealInterval(dyadic_lower(lo), dyadic_upper(hi))
        logger.debug("boundary minimum on %s not positive at %s bits", disk.describe(), bits)
    raise BoundaryContact(
        f"min |{target.id}| on the boundary of {disk.describe()} is not certified positive"
    )


def rouche_delta(
    g: Evaluable,
    P: Evaluable,
    alpha,
    radius,
    policy: Optional[PrecisionPolicy] = None,
) -> RealInterval:
    """
    delta = min_{|z|=R} |g - alpha| / max_{|z|=R} |P|.

    Any eps with 0 < |eps| < delta.lo keeps the count of g + eps P = alpha in
    B(0, R).

    Raises:
        BoundaryContact: if min |g - alpha| cannot be certified positive
    """
    disk = Disk.origin(radius)
    low = boundary_minimum(g, disk, alpha, policy)
    high = modulus_range(P, disk, want_max=True, policy=policy)
    if high.lo <= 0:
        raise BoundaryContact(f"Perturbation {P.id} vanishes identically on {disk.describe()}")
    return RealInterval(low.lo / high.hi, low.hi / high.lo)


def perturbation_sup(P: Evaluable, disk: Disk, policy: Optional[PrecisionPolicy] = None) -> Fraction:
    """Rational upper bound of max |P| on the boundary."""
    return modulus_range(P, disk, want_max=True, policy=policy).hi
