"""
Algebraic Enumeration - The target stream alpha_1, alpha_2, ... over Q(i).

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

alpha_1 = 0; after it every element of K appears once, ordered by height
and then by (real, imaginary) part. The height of p/q + (r/s)i is the
largest of |p|, q, |r|, s in lowest terms.
"""

import math
from fractions import Fraction
from typing import Dict, Iterator, List

from ..core.gaussian import ZERO, GaussianRational


def rationals_of_height(h: int) -> List[Fraction]:
    """All rationals with height <= h, sorted."""
    values = {Fraction(0)}
    for q in range(1, h + 1):
        for p in range(-h, h + 1):
            if math.gcd(p, q) == 1:
                values.add(Fraction(p, q))
    return sorted(values)


def _height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)


class AlgebraicEnumeration:
    """Height-lex enumeration of Q(i) with alpha_1 = 0."""

    id = "height-lex"

    def __init__(self):
        self._items: List[GaussianRational] = [ZERO]
        self._index: Dict[GaussianRational, int] = {ZERO: 1}
        self._height = 0

    def _extend(self) -> None:
        self._height += 1
        h = self._height
        parts = rationals_of_height(h)
        for re in parts:
            for im in parts:
                if max(_height(re), _height(im)) != h:
                    continue
                q = GaussianRational(re, im)
                if q in self._index:
                    continue
                self._items.append(q)
                self._index[q] = len(self._items)

    def alpha(self, i: int) -> GaussianRational:
        """alpha_i, 1-based."""
        if i < 1:
            raise IndexError(f"Enumeration index starts at 1, got {i}")
        while len(self._items) < i:
            self._extend()
        return self._items[i - 1]

    __getitem__ = alpha

    def prefix(self, n: int) -> List[GaussianRational]:
        """[alpha_1, ..., alpha_n]."""
        if n <= 0:
            return []
        self.alpha(n)
        return list(self._items[:n])

    def index_of(self, q: GaussianRational, limit: int = 100000) -> int:
        """
        Raises:
            ValueError: if q is not reached within `limit` entries
        """
        while q not in self._index:
            if len(self._items) >= limit:
                raise ValueError(f"{q.canonical()} is not among the first {limit} targets")
            self._extend()
        return self._index[q]

    def __iter__(self) -> Iterator[GaussianRational]:
        i = 1
        while True:
            yield self.alpha(i)
            i += 1


_ENUMERATIONS = {"height-lex": AlgebraicEnumeration}


def get_enumeration(name: str) -> AlgebraicEnumeration:
    try:
        return _ENUMERATIONS[name]()
    except KeyError:
        raise ValueError(f"Unknown enumeration '{name}'")
