"""
Admissibility - The growing list of count-preservation predicates.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

An eps for the term eps z^e P is admissible when 0 < |eps| < nu and, for
every registered predicate, spent + |eps| sup|z^e P| < margin / 2. Since
|f - target| >= margin on the boundary of the predicate's disk, the total
perturbation then never reaches the margin and Rouche keeps the count.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.disk import Disk
from ..core.gaussian import GaussianRational
from ..core.precision import PrecisionPolicy
from ..entire.polynomial import Polynomial
from ..entire.staged import StagedFunction
from ..rootcount.winding import count_zeros
from .state import RouchePredicate

logger = logging.getLogger(__name__)


class SupCache:
    """sup_{|z| <= reach} |z^e P| per reach, for one full polynomial."""

    def __init__(self, full_poly: Polynomial):
        self.full_poly = full_poly
        self._values: Dict[Fraction, Fraction] = {}

    def __call__(self, reach: Fraction) -> Fraction:
        value = self._values.get(reach)
        if value is None:
            value = self.full_poly.sup_bound(reach)
            self._values[reach] = value
        return value


def register(
    f: StagedFunction,
    disk: Disk,
    target: GaussianRational,
    label: str,
    stage: int,
    policy: Optional[PrecisionPolicy] = None,
) -> RouchePredicate:
    """
    Measure the margin of f - target on the disk boundary and record the
    zero count it protects.

    Raises:
        BoundaryZero: f - target vanishes on the boundary
    """
    zc = count_zeros(f, disk, target, policy)
    predicate = RouchePredicate(
        center=disk.center,
        radius=disk.radius,
        target=target,
        margin=zc.margin,
        spent=Fraction(0),
        count=zc.count,
        label=label,
        stage=stage,
        since=len(f.terms),
    )
    logger.debug("registered %s: %s zeros, margin %.3e", label, zc.count, float(zc.margin))
    return predicate


def ceiling(predicates: Sequence[RouchePredicate], full_poly: Polynomial) -> Fraction:
    """Largest |eps| bound every predicate still allows (exclusive)."""
    sup = SupCache(full_poly)
    best: Optional[Fraction] = None
    for p in predicates:
        s = sup(p.reach)
        if s == 0:
            continue
        room = p.room / s
        best = room if best is None else min(best, room)
    return best if best is not None else Fraction(1)


def charges(
    predicates: Sequence[RouchePredicate],
    full_poly: Polynomial,
    epsilon_upper: Fraction,
) -> List[Fraction]:
    sup = SupCache(full_poly)
    return [epsilon_upper * sup(p.reach) for p in predicates]


def first_violation(
    predicates: Sequence[RouchePredicate],
    amounts: Sequence[Fraction],
) -> Optional[RouchePredicate]:
    for p, amount in zip(predicates, amounts):
        if not p.admits(amount):
            return p
    return None


def charge_all(
    predicates: Sequence[RouchePredicate],
    amounts: Sequence[Fraction],
) -> List[RouchePredicate]:
    return [p.charged(amount) for p, amount in zip(predicates, amounts)]


def recompute_spent(predicate: RouchePredicate, f: StagedFunction) -> Fraction:
    """Charges of every term added after the predicate was registered."""
    return sum(
        (term.contribution_upper(predicate.reach) for term in f.terms[predicate.since:]),
        Fraction(0),
    )


def audit(
    predicates: Sequence[RouchePredicate],
    f: StagedFunction,
) -> List[Tuple[RouchePredicate, Fraction, bool]]:
    """(predicate, recomputed spend, still below margin / 2) for each predicate."""
    rows = []
    for p in predicates:
        spent = recompute_spent(p, f)
        rows.append((p, spent, spent < p.margin / 2))
    return rows
