"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Stage State - Everything a completed stage m carries forward.

Provides:
- ExactFact, a recorded identity f(point) = value with both sides in K
- NailGraph, the graph point -> value over nailed points
- PreimageEntry, one registered preimage with its isolating ball
- GraftedOrbit, an algebraic cycle nailed into the function
- RouchePredicate, one count-preservation condition with its spent budget
- LedgerEntry, StepRecord, StageBudget: per-stage bookkeeping
- StageState itself
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Set

from ..core.balls import ComplexBox
from ..core.disk import Disk
from ..core.gaussian import GaussianRational
from ..core.serialization import (
    box_from_dict,
    fraction_from_text,
    fraction_to_text,
    gaussian_from_text,
)
from ..entire.staged import StagedFunction
from ..models.base import BaseModel
from .config import ConstructionConfig
from .nail import NailPolynomial

FACT_KINDS = ("target", "preimage", "link")
PREIMAGE_STATUS = ("registered", "algebraized", "inherited", "origin")


def _q(text: Optional[str]) -> Optional[GaussianRational]:
    return None if text is None else gaussian_from_text(text)


def _f(text: Optional[str]) -> Optional[Fraction]:
    return None if text is None else fraction_from_text(text)


@dataclass
class ExactFact(BaseModel):
    point: GaussianRational
    value: GaussianRational
    kind: str
    stage: int

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExactFact":
        return cls(_q(data["point"]), _q(data["value"]), data["kind"], int(data["stage"]))


class NailGraph:
    """point -> value edges of the exact facts; out-degree is at most one."""

    def __init__(self, facts: List[ExactFact] = ()):
        self.edges: Dict[GaussianRational, GaussianRational] = {}
        for fact in facts:
            self.add(fact.point, fact.value)

    def add(self, point: GaussianRational, value: GaussianRational) -> None:
        known = self.edges.get(point)
        if known is not None and known != value:
            raise ValueError(f"{point.canonical()} already maps to {known.canonical()}")
        self.edges[point] = value

    def closes_cycle(self, point: GaussianRational, value: GaussianRational) -> bool:
        """Would the edge point -> value close a cycle?"""
        seen: Set[GaussianRational] = set()
        current = value
        while current is not None and current not in seen:
            if current == point:
                return True
            seen.add(current)
            current = self.edges.get(current)
        return False

    def cycles(self) -> List[List[GaussianRational]]:
        """Every cycle, each rotated to start at its smallest point."""
        found: List[List[GaussianRational]] = []
        done: Set[GaussianRational] = set()
        for start in sorted(self.edges, key=lambda q: q.sort_key()):
            path: List[GaussianRational] = []
            where: Dict[GaussianRational, int] = {}
            current = start
            while current is not None and current not in done and current not in where:
                where[current] = len(path)
                path.append(current)
                current = self.edges.get(current)
            if current is not None and current in where:
                cycle = path[where[current]:]
                pivot = min(range(len(cycle)), key=lambda i: cycle[i].sort_key())
                found.append(cycle[pivot:] + cycle[:pivot])
            done.update(path)
        return found


@dataclass
class PreimageEntry(BaseModel):
    """
    A zero of f - target found for f_{n,0} in B(0, r_{n+1}). `box` isolates
    it, B(center, eta) is the ball in which it stays unique, and `point` is
    the exact K-point it became.
    """
    target: GaussianRational
    target_index: int
    box: ComplexBox
    center: GaussianRational
    eta: Fraction
    stage: int
    point: Optional[GaussianRational] = None
    status: str = "registered"

    @property
    def ball(self) -> Disk:
        return Disk(self.center, self.eta)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PreimageEntry":
        return cls(
            target=_q(data["target"]),
            target_index=int(data["target_index"]),
            box=box_from_dict(data["box"]),
            center=_q(data["center"]),
            eta=_f(data["eta"]),
            stage=int(data["stage"]),
            point=_q(data.get("point")),
            status=data.get("status", "registered"),
        )


@dataclass
class GraftedOrbit(BaseModel):
    period: int
    points: List[GaussianRational]
    stage: int
    multiplier: Optional[ComplexBox] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GraftedOrbit":
        mult = data.get("multiplier")
        return cls(
            period=int(data["period"]),
            points=[_q(t) for t in data["points"]],
            stage=int(data["stage"]),
            multiplier=None if mult is None else box_from_dict(mult),
        )


@dataclass
class RouchePredicate(BaseModel):
    """
    Count preservation of f - target on B(center, radius): every later term
    eps z^e P is charged |eps| sup_{|z| <= |center| + radius} |z^e P|, and the
    charges must stay below margin / 2. `since` is the number of terms f had
    when the margin was measured.
    """
    center: GaussianRational
    radius: Fraction
    target: GaussianRational
    margin: Fraction
    spent: Fraction
    count: int
    label: str
    stage: int
    since: int = 0

    @property
    def disk(self) -> Disk:
        return Disk(self.center, self.radius)

    @property
    def reach(self) -> Fraction:
        return self.center.abs_upper() + self.radius

    @property
    def room(self) -> Fraction:
        return self.margin / 2 - self.spent

    def admits(self, charge: Fraction) -> bool:
        return self.spent + charge < self.margin / 2

    def charged(self, charge: Fraction) -> "RouchePredicate":
        return replace(self, spent=self.spent + charge)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RouchePredicate":
        return cls(
            center=_q(data["center"]),
            radius=_f(data["radius"]),
            target=_q(data["target"]),
            margin=_f(data["margin"]),
            spent=_f(data["spent"]),
            count=int(data["count"]),
            label=data["label"],
            stage=int(data["stage"]),
            since=int(data.get("since", 0)),
        )


@dataclass
class LedgerEntry(BaseModel):
    """Coefficient k after some stage: a_k, b_k and the certified shift."""
    k: int
    b: GaussianRational
    shift_upper: Fraction
    theta: Fraction
    a: Optional[GaussianRational] = None

    @property
    def within_theta(self) -> bool:
        return self.shift_upper < self.theta

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LedgerEntry":
        return cls(
            k=int(data["k"]),
            b=_q(data["b"]),
            shift_upper=_f(data["shift_upper"]),
            theta=_f(data["theta"]),
            a=_q(data.get("a")),
        )


@dataclass
class StepRecord(BaseModel):
    stage: int
    index: int
    kind: str
    note: str
    epsilon_upper: Fraction
    nu: Fraction

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StepRecord":
        return cls(
            stage=int(data["stage"]),
            index=int(data["index"]),
            kind=data["kind"],
            note=data["note"],
            epsilon_upper=_f(data["epsilon_upper"]),
            nu=_f(data["nu"]),
        )


@dataclass
class StageBudget(BaseModel):
    """s-hat, l-hat and the final budget B of the transition n -> n+1."""
    stage: int
    s_hat: int
    l_hat: int
    budget: int
    used: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StageBudget":
        return cls(**{k: int(data[k]) for k in ("stage", "s_hat", "l_hat", "budget", "used")})


@dataclass
class StageState:
    config: ConstructionConfig
    m: int
    f: StagedFunction
    radii: Dict[int, Fraction]
    X: List[GaussianRational] = field(default_factory=list)
    preimages: List[PreimageEntry] = field(default_factory=list)
    orbits: Dict[int, List[GraftedOrbit]] = field(default_factory=dict)
    nail: NailPolynomial = field(default_factory=NailPolynomial)
    nail_sizes: Dict[int, int] = field(default_factory=dict)
    facts: List[ExactFact] = field(default_factory=list)
    predicates: List[RouchePredicate] = field(default_factory=list)
    ledger: List[LedgerEntry] = field(default_factory=list)
    steps: List[StepRecord] = field(default_factory=list)
    budgets: List[StageBudget] = field(default_factory=list)
    certificates: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def r(self) -> Fraction:
        return self.radii[self.m]

    @property
    def X_tilde(self) -> List[GaussianRational]:
        return [e.point for e in self.preimages if e.point is not None and e.status != "origin"]

    @property
    def Y(self) -> List[GaussianRational]:
        return [q for k in sorted(self.orbits) for orbit in self.orbits[k] for q in orbit.points]

    def orbit_count(self, k: int) -> int:
        return len(self.orbits.get(k, []))

    def expected_roots(self) -> Set[GaussianRational]:
        return set(self.X) | set(self.X_tilde) | set(self.Y)

    def nail_at(self, stage: int) -> NailPolynomial:
        """P_stage, rebuilt from the nailing order."""
        return NailPolynomial(self.nail.roots[: self.nail_sizes[stage]])

    def graph(self) -> NailGraph:
        return NailGraph(self.facts)

    def fact_for(self, point: GaussianRational) -> Optional[ExactFact]:
        for fact in self.facts:
            if fact.point == point:
                return fact
        return None

    def values(self) -> Set[GaussianRational]:
        return {fact.value for fact in self.facts}

    def copy(self) -> "StageState":
        """Working copy; records that get mutated are copied too."""
        return replace(
            self,
            radii=dict(self.radii),
            X=list(self.X),
            preimages=[replace(e) for e in self.preimages],
            orbits={k: list(v) for k, v in self.orbits.items()},
            nail_sizes=dict(self.nail_sizes),
            facts=list(self.facts),
            predicates=list(self.predicates),
            ledger=list(self.ledger),
            steps=list(self.steps),
            budgets=[replace(b) for b in self.budgets],
            certificates=list(self.certificates),
        )

    def summary(self) -> Dict[str, Any]:
        return {
            "stage": self.m,
            "radius": fraction_to_text(self.r),
            "terms": len(self.f.terms),
            "nail_roots": self.nail.D,
            "orbits": {str(k): len(v) for k, v in sorted(self.orbits.items())},
        }
