"""
Theta Sequences - Per-coefficient perturbation budgets.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

A function is within the theta-neighborhood of g when |a_k - b_k| < theta_k
for every k. Defaults are theta_k = 1/(2 k!); Theta_k is the running minimum
of theta_1 .. theta_k.
"""

import math
from fractions import Fraction
from typing import Dict, List, Mapping, Optional


class ThetaSequence:
    """theta_k with optional per-index overrides."""

    def __init__(self, overrides: Optional[Mapping[int, Fraction]] = None):
        self._overrides: Dict[int, Fraction] = {
            int(k): Fraction(v) for k, v in (overrides or {}).items()
        }
        self._prefix_min: List[Fraction] = []

    @staticmethod
    def default(k: int) -> Fraction:
        return Fraction(1, 2 * math.factorial(k))

    @property
    def overrides(self) -> Dict[int, Fraction]:
        return dict(self._overrides)

    def theta(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError(f"theta index must be non-negative, got {k}")
        return self._overrides.get(k, self.default(k))

    def __getitem__(self, k: int) -> Fraction:
        return self.theta(k)

    def big_theta(self, k: int) -> Fraction:
        """min(theta_1, ..., theta_k), k >= 1."""
        if k < 1:
            raise ValueError(f"Theta_k is defined for k >= 1, got {k}")
        while len(self._prefix_min) < k:
            j = len(self._prefix_min) + 1
            current = self.theta(j)
            if self._prefix_min:
                current = min(current, self._prefix_min[-1])
            self._prefix_min.append(current)
        return self._prefix_min[k - 1]

    def violations(self, upto: int) -> List[str]:
        """Messages for every theta_k (k <= upto or overridden) outside (0, 1/k!)."""
        problems = []
        indices = sorted(set(range(upto + 1)) | set(self._overrides))
        for k in indices:
            value = self.theta(k)
            limit = Fraction(1, math.factorial(k))
            if value <= 0:
                problems.append(f"theta.{k} = {value} must be positive")
            elif value >= limit:
                problems.append(f"theta.{k} = {value} must be below 1/{k}! = {limit}")
        return problems

    def to_dict(self) -> Dict[str, str]:
        return {str(k): f"{v.numerator}/{v.denominator}" for k, v in sorted(self._overrides.items())}

    @classmethod
    def from_dict(cls, data: Mapping[str, str]) -> "ThetaSequence":
        return cls({int(k): Fraction(v) for k, v in data.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ThetaSequence) and self._overrides == other._overrides

    def __repr__(self) -> str:
        return f"ThetaSequence({self.to_dict()})"
