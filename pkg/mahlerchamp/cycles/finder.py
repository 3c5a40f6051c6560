"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Cycle Finder - Certified search for k-cycles inside a disk.

Seeds come from, in order:
- backward iteration along inverse-branch itineraries (repelling cycles
  attract backward orbits)
- exact roots of p^k(z) - z when f is a polynomial
- roots of a Taylor truncation of f(z) - z (k = 1)
- a uniform grid over the disk

Each seed is Newton-refined on f^k(z) - z and certified by the Krawczyk
test. A candidate becomes a CycleRecord when every orbit point is isolated
inside the disk, f maps each isolation box into the next point's
uniqueness region, and f^d moves the first box off itself for every
proper divisor d of k.
"""

import itertools
import logging
import math
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import mpmath

from ..core.balls import ComplexBox
from ..core.disk import Disk
from ..core.errors import MahlerError, SearchExhausted
from ..core.gaussian import ZERO
from ..core.precision import PrecisionPolicy, default_policy
from ..entire.base_functions import PolynomialBase
from ..entire.evaluable import Evaluable, Iterate, MinusIdentity, PeriodicEquation
from ..entire.polynomial import Polynomial
from ..rootcount.newton import Isolation, certify_zero
from ..rootcount.winding import boundary_clear
from .records import CycleRecord

logger = logging.getLogger(__name__)

BACKWARD_ROUNDS = 30
TRUNCATION_ORDER = 16
BACKWARD_STARTS = (mpmath.mpc(1, 1), mpmath.mpc(1, -1), mpmath.mpc(3, 3), mpmath.mpc(3, -3))


class PeriodPreconditionError(MahlerError):
    """The disk boundary is not clear of solutions of f^k(z) = z."""
    pass


def proper_divisors(k: int) -> List[int]:
    return [d for d in range(1, k) if k % d == 0]


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------

def _primitive_words(alphabet: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Words of length k, one per rotation class, that are not powers of shorter words."""
    for word in itertools.product(range(alphabet), repeat=k):
        rotations = [word[i:] + word[:i] for i in range(k)]
        if word != min(rotations):
            continue
        if any(word == word[:d] * (k // d) for d in proper_divisors(k)):
            continue
        yield word


def _branch_count(disk: Disk) -> int:
    reach = float(abs(disk.center_point())) + float(disk.radius)
    return max(1, math.ceil(reach / (2 * math.pi)) + 1)


def backward_seeds(f: Evaluable, k: int, disk: Disk) -> Iterator["mpmath.mpc"]:
    inverse: Optional[Callable] = getattr(f, "inverse_branches", None)
    if not callable(inverse):
        return
    branches = _branch_count(disk)
    try:
        alphabet = len(inverse(BACKWARD_STARTS[0], branches))
    except (ValueError, ZeroDivisionError):
        return
    starts = BACKWARD_STARTS if k == 1 else BACKWARD_STARTS[:2]
    for word in _primitive_words(alphabet, k):
        for start in starts:
            z = _backward_orbit(inverse, word, start, branches)
            if z is not None:
                yield z


def _backward_orbit(inverse: Callable, word: Sequence[int], start, branches: int):
    z = mpmath.mpc(start)
    try:
        for _ in range(BACKWARD_ROUNDS):
            for index in reversed(word):
                pre = inverse(z, branches)
                if index >= len(pre):
                    return None
                z = pre[index]
                if not mpmath.isfinite(z):
                    return None
    except (ValueError, ZeroDivisionError):
        return None
    return z


def _polynomial_of(f: Evaluable) -> Optional[Polynomial]:
    if isinstance(f, Polynomial):
        return f
    if isinstance(f, PolynomialBase):
        return f.poly
    return None


def compose(p: Polynomial, q: Polynomial) -> Polynomial:
    """p(q(z))."""
    result = Polynomial()
    for c in reversed(p.coefficients):
        result = result * q + Polynomial.constant(c)
    return result


def numeric_roots(coefficients: Sequence) -> List["mpmath.mpc"]:
    """Roots of sum c_j z^j (low degree first) with mpmath."""
    coeffs = [mpmath.mpc(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    if len(coeffs) == 2:
        return [-coeffs[0] / coeffs[1]]
    try:
        return list(mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=2 * mpmath.mp.prec))
    except mpmath.libmp.NoConvergence:
        return []


def polynomial_seeds(f: Evaluable, k: int) -> List["mpmath.mpc"]:
    p = _polynomial_of(f)
    if p is None:
        return []
    iterate = p
    for _ in range(k - 1):
        iterate = compose(p, iterate)
    equation = iterate - Polynomial.monomial(1)
    return numeric_roots(c.to_mpc() for c in equation.coefficients)


def truncation_seeds(f: Evaluable) -> List["mpmath.mpc"]:
    coefficient = getattr(f, "taylor_coefficient", None)
    if not callable(coefficient) or _polynomial_of(f) is not None:
        return []
    coeffs = []
    for j in range(TRUNCATION_ORDER + 1):
        a = coefficient(j)
        coeffs.append(a.to_mpc() if hasattr(a, "to_mpc") else a.approx(mpmath.mp.prec))
    coeffs[1] -= 1
    return numeric_roots(coeffs)


def grid_seeds(disk: Disk, k: int, density: int) -> Iterator["mpmath.mpc"]:
    n = max(4, density * k)
    c = disk.center_point()
    r = disk.radius_mpf()
    for i in range(n + 1):
        for j in range(n + 1):
            offset = mpmath.mpc(-1 + 2 * mpmath.mpf(i) / n, -1 + 2 * mpmath.mpf(j) / n) * r
            if abs(offset) < r:
                yield c + offset


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def multiplier_of(f: Evaluable, points: Sequence[ComplexBox]) -> ComplexBox:
    """prod f'(z_i) over the cycle (chain rule)."""
    fprime = f.derivative()
    result = ComplexBox.exact(1)
    for p in points:
        result = result * fprime.eval_box(p)
    return result


def multiplier(f: Evaluable, cycle: CycleRecord) -> ComplexBox:
    """Enclosure of (f^k)' on the cycle; stored in the record."""
    if cycle.exact_points is not None:
        boxes = [ComplexBox.from_gaussian(q) for q in cycle.exact_points]
    else:
        boxes = cycle.points
    value = multiplier_of(f, boxes)
    cycle.multiplier = value
    cycle.repelling = value.abs_lower() > 1
    return value


def _rotate_canonical(isolations: List[Isolation]) -> List[Isolation]:
    def key(i: int):
        c = isolations[i].box.center
        return (abs(c), c.real, c.imag)

    start = min(range(len(isolations)), key=key)
    return isolations[start:] + isolations[:start]


def certify_cycle(f: Evaluable, k: int, first: Isolation, disk: Disk) -> Optional[CycleRecord]:
    """Turn an isolated zero of f^k(z) - z into a cycle record, or None."""
    F = PeriodicEquation(f, k)
    chain = [first]
    z = first.box.center
    for _ in range(k - 1):
        z = f(z)
        nxt = certify_zero(F, z)
        if nxt is None:
            return None
        chain.append(nxt)
    for iso in chain:
        if not disk.contains_box(iso.box):
            return None
    # f maps each point into the uniqueness region of the next
    for i, iso in enumerate(chain if k > 1 else []):
        image = f.eval_box(iso.box)
        if not chain[(i + 1) % k].holds(image):
            return None
    for a, b in itertools.combinations(chain, 2):
        if a.box.overlaps(b.box):
            return None
    for d in proper_divisors(k):
        if Iterate(f, d).eval_box(first.box).overlaps(first.box):
            return None
    chain = _rotate_canonical(chain)
    points = [iso.box for iso in chain]
    mult = multiplier_of(f, points)
    return CycleRecord(
        period=k,
        points=points,
        multiplier=mult,
        repelling=mult.abs_lower() > 1,
    )


def _check_boundary(f: Evaluable, k: int, disk: Disk) -> None:
    if k != 1:
        return
    certificate = boundary_clear(MinusIdentity(f), [ZERO], disk)
    if not certificate:
        raise PeriodPreconditionError(
            f"Boundary of {disk.describe()} is not clear of fixed points of {f.id}"
        )


def find_cycles(
    f: Evaluable,
    k: int,
    disk: Disk,
    want: int = 0,
    seed_density: int = 8,
    exhaustive: bool = True,
    check_boundary: bool = True,
    accept: Optional[Callable[[CycleRecord], bool]] = None,
    policy: Optional[PrecisionPolicy] = None,
) -> List[CycleRecord]:
    """
    Certified cycles of exact period k inside the disk, sorted by the
    modulus of their first point.

    With exhaustive=False the search stops once `want` accepted cycles are
    found. `accept` filters records (e.g. repelling only).

    Raises:
        PeriodPreconditionError: k = 1 and the boundary meets a fixed point
        SearchExhausted: fewer than `want` cycles were found
    """
    if k < 1:
        raise ValueError(f"Period must be positive, got {k}")
    policy = policy or default_policy()
    if check_boundary:
        _check_boundary(f, k, disk)
    found: List[CycleRecord] = []
    tried = 0
    with mpmath.workprec(policy.start_bits):
        F = PeriodicEquation(f, k)
        sources = [
            ("backward", backward_seeds(f, k, disk)),
            ("polynomial", iter(polynomial_seeds(f, k))),
            ("truncation", iter(truncation_seeds(f) if k == 1 else [])),
            ("grid", grid_seeds(disk, k, seed_density)),
        ]
        for name, seeds in sources:
            if name == "grid" and found and not exhaustive and len(found) >= want:
                break
            for seed in seeds:
                tried += 1
                iso = certify_zero(F, seed)
                if iso is None or not disk.contains_box(iso.box):
                    continue
                if any(rec.overlaps(iso.box) for rec in found):
                    continue
                record = certify_cycle(f, k, iso, disk)
                if record is None or (accept is not None and not accept(record)):
                    continue
                if any(rec.same_orbit(record) for rec in found):
                    continue
                found.append(record)
                logger.debug("found %s via %s seed", record.describe(), name)
                if not exhaustive and want and len(found) >= want:
                    break
            if not exhaustive and want and len(found) >= want:
                break
    found.sort(key=lambda rec: rec.sort_key())
    if len(found) < want:
        raise SearchExhausted(
            f"Found {len(found)} of {want} certified {k}-cycles in {disk.describe()}",
            diagnostics={
                "period": k,
                "want": want,
                "found": len(found),
                "seeds_tried": tried,
                "disk": disk.describe(),
            },
        )
    logger.info("find_cycles(k=%s) on %s: %s cycles from %s seeds",
                k, disk.describe(), len(found), tried)
    return found
