"""
Quadrature - Certified Gauss-Legendre integration over [0, 1].

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

The integrand is a box map t -> h(t), holomorphic near [0, 1]. Nodes are
roots of the exact Legendre polynomial, each isolated by the Krawczyk
test, so node and weight errors are inside the boxes. The truncation error
for h bounded by M on the Bernstein ellipse E_rho is at most
(64/15) M rho^(-2n) / (rho^2 - 1), halved for the unit interval.
"""

import logging
import threading
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import mpmath

from ..core.balls import ComplexBox
from ..core.errors import MahlerError
from ..entire.polynomial import Polynomial
from ..rootcount.newton import krawczyk, newton_refine

logger = logging.getLogger(__name__)

ELLIPSE_RHO = 4
START_NODES = 8
MAX_NODES = 64

Integrand = Callable[[ComplexBox], ComplexBox]

_legendre_cache: Dict[int, Polynomial] = {}
_node_cache: Dict[Tuple[int, int], List[Tuple[ComplexBox, ComplexBox]]] = {}
_cache_lock = threading.Lock()


class QuadratureFailure(MahlerError):
    """The rule could not meet the tolerance within MAX_NODES nodes."""
    pass


def legendre(n: int) -> Polynomial:
    """Exact P_n from (k+1) P_{k+1} = (2k+1) z P_k - k P_{k-1}."""
    if n < 0:
        raise ValueError(f"Legendre degree must be non-negative, got {n}")
    cached = _legendre_cache.get(n)
    if cached is not None:
        return cached
    prev, cur = Polynomial.constant(1), Polynomial.monomial(1)
    if n == 0:
        return prev
    for k in range(1, n):
        nxt = (cur.shift(1) * Fraction(2 * k + 1, k + 1)) - (prev * Fraction(k, k + 1))
        prev, cur = cur, nxt
    with _cache_lock:
        _legendre_cache.setdefault(n, cur)
    return cur


def gauss_nodes(n: int) -> List[Tuple[ComplexBox, ComplexBox]]:
    """(node, weight) boxes on [-1, 1] at the working precision."""
    key = (n, mpmath.mp.prec)
    cached = _node_cache.get(key)
    if cached is not None:
        return cached
    p = legendre(n)
    dp = p.derivative()
    rho = mpmath.ldexp(mpmath.mpf(1), -(mpmath.mp.prec // 3))
    nodes = []
    for i in range(1, n + 1):
        guess = mpmath.cos(mpmath.pi * (i - mpmath.mpf(1) / 4) / (n + mpmath.mpf(1) / 2))
        x = newton_refine(p, guess)
        iso = krawczyk(p, mpmath.mpc(x.real, 0), rho) if x is not None else None
        if iso is None:
            raise QuadratureFailure(f"Could not isolate Legendre node {i} of {n}")
        box = iso.box
        slope = dp.eval_box(box)
        weight = ComplexBox.exact(2) / ((ComplexBox.exact(1) - box * box) * slope * slope)
        nodes.append((box, weight))
    with _cache_lock:
        _node_cache.setdefault(key, nodes)
    return nodes


def ellipse_bound(h: Integrand, rho=ELLIPSE_RHO) -> "mpmath.mpf":
    """Upper bound of |h| on E_rho mapped onto [0, 1]."""
    r = ComplexBox.exact(mpmath.mpf(rho))
    cover = ComplexBox.exact(Fraction(1, 2)).widen((r + 1 / r) * Fraction(1, 4))
    return h(cover).abs_upper()


def remainder_bound(n: int, M, rho=ELLIPSE_RHO) -> "mpmath.mpf":
    r = ComplexBox.exact(mpmath.mpf(rho))
    bound = ComplexBox.exact(32) * M / 15 / r ** (2 * n) / (r * r - 1)
    return bound.abs_upper()


def gauss_legendre(
    h: Integrand,
    tolerance: Fraction = Fraction(1, 10 ** 12),
    rho=ELLIPSE_RHO,
) -> ComplexBox:
    """
    Box containing the integral of h over [0, 1].

    Raises:
        QuadratureFailure: if the truncation bound stays above the tolerance
    """
    tol = mpmath.mpf(tolerance.numerator) / tolerance.denominator
    M = ellipse_bound(h, rho)
    n = START_NODES
    while remainder_bound(n, M, rho) > tol:
        n *= 2
        if n > MAX_NODES:
            raise QuadratureFailure(
                f"Quadrature bound {mpmath.nstr(remainder_bound(MAX_NODES, M, rho), 5)} "
                f"exceeds tolerance {tolerance} (M = {mpmath.nstr(M, 5)})"
            )
    total = ComplexBox.exact(0)
    half = ComplexBox.exact(mpmath.mpf(1) / 2)
    for node, weight in gauss_nodes(n):
        t = (node + 1) * half
        total = total + weight * h(t)
    total = total * half
    logger.debug("gauss_legendre: n=%s, M=%s", n, mpmath.nstr(M, 5))
    return total.widen(remainder_bound(n, M, rho))
