"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Winding Numbers - Certified zero counts by the argument principle.

The boundary circle t -> c + r e^(2 pi i t), t in [0, 1], is split into
arcs. Each arc is covered by a box; the image box of f over it must
exclude 0 and stay inside a cone (radius <= 0.7 |center|), so the argument
of f varies by less than pi/2 along the arc and the change is read off the
endpoint values. Arcs failing the test are halved; past the depth cap the
whole scan restarts at the next precision level.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from ..core.balls import ComplexBox
from ..core.disk import Disk
from ..core.errors import MahlerError
from ..core.precision import PrecisionPolicy, default_policy
from ..entire.evaluable import Evaluable, value_box

logger = logging.getLogger(__name__)

INITIAL_ARCS = 32
MAX_DEPTH = 24
ARC_CAP = 65536
CONE_RATIO = mpmath.mpf("0.7")


class BoundaryZero(MahlerError):
    """Some arc box still contains a zero of f - alpha at maximum refinement."""

    def __init__(self, message: str, disk: Optional[Disk] = None, angle: Optional[Fraction] = None):
        self.disk = disk
        self.angle = angle
        super().__init__(message)


class _Refine(Exception):
    def __init__(self, angle: Fraction):
        self.angle = angle


@dataclass
class ArcSample:
    """f over the arc t0 <= t <= t1 (in turns)."""
    t0: Fraction
    t1: Fraction
    box: ComplexBox


@dataclass
class BoundaryEnclosure:
    disk: Disk
    samples: List[ArcSample] = field(default_factory=list)
    bits: int = 0

    def margin(self, alpha=None) -> Fraction:
        """Rational lower bound of min |f - alpha| over the boundary."""
        shift = value_box(alpha) if alpha is not None else None
        low: Optional[Fraction] = None
        with mpmath.workprec(self.bits or mpmath.mp.prec):
            for s in self.samples:
                b = s.box - shift if shift is not None else s.box
                v = b.abs_lower_fraction()
                low = v if low is None or v < low else low
        return low if low is not None else Fraction(0)


@dataclass
class ZeroCount:
    count: int
    disk: Disk
    function_id: str
    certified: bool = True
    margin: Fraction = Fraction(0)
    bits: int = 0

    def to_dict(self) -> Dict:
        return {
            "count": self.count,
            "disk": self.disk.describe(),
            "function": self.function_id,
            "certified": self.certified,
            "margin": f"{self.margin.numerator}/{self.margin.denominator}",
        }


def circle_point(disk: Disk, t: Fraction) -> ComplexBox:
    """Box around c + r e^(2 pi i t) at the working precision."""
    return disk.center_box() + ComplexBox.unit(t) * disk.radius


def arc_box(disk: Disk, t0: Fraction, t1: Fraction) -> ComplexBox:
    """Box covering the arc between t0 and t1."""
    mid = circle_point(disk, (t0 + t1) / 2)
    # every point of the arc is within half its length of the midpoint
    return mid.widen(ComplexBox.pi() * (disk.radius * (t1 - t0)))


def _initial_arcs() -> List[Tuple[Fraction, Fraction, int]]:
    return [
        (Fraction(i, INITIAL_ARCS), Fraction(i + 1, INITIAL_ARCS), 0)
        for i in range(INITIAL_ARCS)
    ]


def _in_cone(b: ComplexBox) -> bool:
    return not b.contains_zero() and b.radius <= CONE_RATIO * abs(b.center)


def scan_boundary(
    f: Evaluable,
    disk: Disk,
    offsets: Sequence = (),
    cone: bool = True,
) -> BoundaryEnclosure:
    """
    One pass at the working precision.

    Every arc box of f - alpha (alpha in offsets, or f itself when empty)
    excludes 0, and lies in a cone when `cone` is set.

    Raises:
        _Refine: an arc needed more than MAX_DEPTH halvings
    """
    shifts = [value_box(a) for a in offsets] or [None]
    stack = list(reversed(_initial_arcs()))
    samples: List[ArcSample] = []
    check = _in_cone if cone else (lambda b: not b.contains_zero())
    while stack:
        t0, t1, depth = stack.pop()
        fb = f.eval_box(arc_box(disk, t0, t1))
        if all(check(fb - s if s is not None else fb) for s in shifts):
            samples.append(ArcSample(t0, t1, fb))
            continue
        if depth >= MAX_DEPTH or len(samples) + len(stack) >= ARC_CAP:
            raise _Refine((t0 + t1) / 2)
        mid = (t0 + t1) / 2
        stack.append((mid, t1, depth + 1))
        stack.append((t0, mid, depth + 1))
    return BoundaryEnclosure(disk, samples, mpmath.mp.prec)


def _winding_from(f: Evaluable, enclosure: BoundaryEnclosure, alpha=None) -> int:
    shift = value_box(alpha) if alpha is not None else None
    points: Dict[Fraction, ComplexBox] = {}

    def value_at(t: Fraction) -> ComplexBox:
        key = t % 1
        if key not in points:
            b = f.eval_box(circle_point(enclosure.disk, key))
            points[key] = b - shift if shift is not None else b
        return points[key]

    total = mpmath.mpf(0)
    error = mpmath.mpf(0)
    for s in enclosure.samples:
        a = value_at(s.t0)
        b = value_at(s.t1)
        if a.contains_zero() or b.contains_zero():
            raise _Refine(s.t0)
        total += mpmath.arg(b.center / a.center)
        error += mpmath.asin(min(mpmath.mpf(1), a.radius / abs(a.center)))
        error += mpmath.asin(min(mpmath.mpf(1), b.radius / abs(b.center)))
    turns = total / (2 * mpmath.pi)
    count = int(mpmath.nint(turns))
    if abs(turns - count) + error / (2 * mpmath.pi) >= mpmath.mpf("0.5"):
        raise _Refine(Fraction(0))
    return count


def _with_precision(disk: Disk, policy: PrecisionPolicy, body, what: str):
    last: Optional[_Refine] = None
    for bits in policy.levels():
        with mpmath.workprec(bits):
            try:
                return body(bits)
            except _Refine as e:
                last = e
                logger.debug("%s on %s needs more than %s bits", what, disk.describe(), bits)
    angle = last.angle if last else None
    raise BoundaryZero(
        f"{what}: boundary of {disk.describe()} meets a zero at turn {angle} "
        f"(max refinement, {policy.max_bits} bits)",
        disk=disk,
        angle=angle,
    )


def count_zeros(
    f: Evaluable,
    disk: Disk,
    alpha=None,
    policy: Optional[PrecisionPolicy] = None,
) -> ZeroCount:
    """
    Number of zeros of f - alpha in the open disk, with multiplicity.

    Raises:
        BoundaryZero: an arc box contains 0 at maximum refinement
    """
    policy = policy or default_policy()
    offsets = [alpha] if alpha is not None else []

    def body(bits: int) -> ZeroCount:
        enclosure = scan_boundary(f, disk, offsets, cone=True)
        count = _winding_from(f, enclosure, alpha)
        return ZeroCount(
            count=count,
            disk=disk,
            function_id=f.id if alpha is None else f"{f.id}-({alpha})",
            certified=True,
            margin=enclosure.margin(alpha),
            bits=bits,
        )

    result = _with_precision(disk, policy, body, "count_zeros")
    logger.debug("count_zeros(%s) on %s = %s", result.function_id, disk.describe(), result.count)
    return result


@dataclass
class BoundaryCertificate:
    clear: bool
    disk: Disk
    margins: List[Fraction] = field(default_factory=list)
    failed_target: Optional[int] = None

    def __bool__(self) -> bool:
        return self.clear

    @property
    def min_margin(self) -> Fraction:
        return min(self.margins) if self.margins else Fraction(0)


def boundary_clear(
    f: Evaluable,
    targets: Sequence,
    disk: Disk,
    policy: Optional[PrecisionPolicy] = None,
) -> BoundaryCertificate:
    """
    Certify f(z) != alpha on the boundary for every target.

    Returns a falsy certificate when some arc box meets a target at maximum
    refinement; per-target margins are rational lower bounds otherwise.
    """
    if not targets:
        return BoundaryCertificate(True, disk, [])
    policy = policy or default_policy()

    def body(bits: int) -> BoundaryCertificate:
        enclosure = scan_boundary(f, disk, list(targets), cone=False)
        margins = [enclosure.margin(t) for t in targets]
        return BoundaryCertificate(True, disk, margins)

    try:
        return _with_precision(disk, policy, body, "boundary_clear")
    except BoundaryZero:
        failed = _failing_target(f, targets, disk)
        return BoundaryCertificate(False, disk, [], failed_target=failed)


def _failing_target(f: Evaluable, targets: Sequence, disk: Disk) -> Optional[int]:
    for i, t in enumerate(targets):
        try:
            with mpmath.workprec(default_policy().start_bits):
                scan_boundary(f, disk, [t], cone=False)
        except _Refine:
            return i
    return None

