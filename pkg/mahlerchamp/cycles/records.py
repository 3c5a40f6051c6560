"""
Cycle Records - Certified periodic orbits and per-period censuses.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional

import mpmath

from ..core.balls import ComplexBox
from ..core.gaussian import GaussianRational
from ..core.serialization import box_to_dict, gaussian_to_text


class CycleStatus(Enum):
    FREE = "free"
    NAILED = "nailed"
    MIXED = "mixed"


@dataclass
class CycleRecord:
    """
    A k-cycle. `points` are certified boxes, each holding exactly one
    point of the orbit; `exact_points` is set when the orbit lies in K.
    """
    period: int
    points: List[ComplexBox]
    multiplier: Optional[ComplexBox] = None
    repelling: bool = False
    status: CycleStatus = CycleStatus.FREE
    exact_points: Optional[List[GaussianRational]] = None

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"Period must be positive, got {self.period}")
        if len(self.points) != self.period:
            raise ValueError(f"{self.period}-cycle needs {self.period} points, got {len(self.points)}")

    def overlaps(self, box: ComplexBox) -> bool:
        return any(p.overlaps(box) for p in self.points)

    def same_orbit(self, other: "CycleRecord") -> bool:
        return self.period == other.period and any(other.overlaps(p) for p in self.points)

    def classify(self, nail_roots: Iterable[GaussianRational]) -> CycleStatus:
        """Nailed when every point is a nail root, free when none is."""
        roots = list(nail_roots)
        hits = 0
        for i, box in enumerate(self.points):
            if self.exact_points is not None:
                hit = self.exact_points[i] in roots
            else:
                hit = any(box.overlaps(ComplexBox.from_gaussian(r)) for r in roots)
            hits += int(hit)
        if hits == 0:
            self.status = CycleStatus.FREE
        elif hits == self.period:
            self.status = CycleStatus.NAILED
        else:
            self.status = CycleStatus.MIXED
        return self.status

    def sort_key(self):
        c = self.points[0].center
        return (float(abs(c)), float(c.real), float(c.imag))

    def describe(self) -> str:
        pts = ", ".join(mpmath.nstr(p.center, 8) for p in self.points)
        mult = mpmath.nstr(abs(self.multiplier.center), 6) if self.multiplier else "?"
        return f"{self.period}-cycle [{pts}] |mult|={mult} {self.status.value}"

    def to_dict(self) -> Dict:
        data = {
            "period": self.period,
            "points": [box_to_dict(p) for p in self.points],
            "repelling": self.repelling,
            "status": self.status.value,
        }
        if self.multiplier is not None:
            data["multiplier"] = box_to_dict(self.multiplier)
        if self.exact_points is not None:
            data["exact_points"] = [gaussian_to_text(q) for q in self.exact_points]
        return data


@dataclass
class CycleCensus:
    """Cycles found per period inside one disk."""
    cycles: Dict[int, List[CycleRecord]] = field(default_factory=dict)

    def add(self, record: CycleRecord) -> None:
        self.cycles.setdefault(record.period, []).append(record)

    def orb_count(self, k: int) -> int:
        return len(self.cycles.get(k, []))

    def per_count(self, k: int) -> int:
        """Distinct certified k-periodic points."""
        return sum(len(c.points) for c in self.cycles.get(k, []))

    def count_by_status(self, k: int, status: CycleStatus) -> int:
        return sum(1 for c in self.cycles.get(k, []) if c.status is status)

    def periods(self) -> List[int]:
        return sorted(self.cycles)

    def consistent(self) -> bool:
        """#Orb(k) = #Per(k) / k for every period."""
        return all(self.per_count(k) == k * self.orb_count(k) for k in self.cycles)

    def rows(self) -> List[Dict]:
        return [
            {
                "k": k,
                "per": self.per_count(k),
                "orb": self.orb_count(k),
                "nailed": self.count_by_status(k, CycleStatus.NAILED),
                "free": self.count_by_status(k, CycleStatus.FREE),
                "mixed": self.count_by_status(k, CycleStatus.MIXED),
            }
            for k in self.periods()
        ]
