"""
Mahler Certificate - The finite-stage form of f(K-prefix) in K and back.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

Relative to the enumerated prefix alpha_1..alpha_m and the nailed points:

- forward: f(alpha_i) reduces exactly in K for 2 <= i <= m
- persistence: each recorded fact holds for every f_{m'} from its stage on
- backward: the zeros of f - alpha_i in B(0, r_m) are the registry points
- tail: no later stage can move f by the smallest recorded margin on B(0, r_m)
"""

import logging
from fractions import Fraction

import mpmath

from ..construct.enumeration import get_enumeration
from ..construct.state import StageState
from ..core.disk import Disk
from ..core.errors import MahlerError
from ..core.gaussian import dyadic_lower
from ..core.precision import using_policy
from ..entire.staged import tail_certificate
from ..rootcount.winding import count_zeros
from .checker import exact_value, stage_function
from .report import InvariantReport, ReportEntry

logger = logging.getLogger(__name__)


def _forward(state: StageState, entry: ReportEntry) -> None:
    if state.m < 2:
        entry.not_applicable("no nailed target at stage 1")
        return
    targets = get_enumeration(state.config.enumeration).prefix(state.m)
    for i, alpha in enumerate(targets[1:], start=2):
        value = exact_value(state.f, alpha)
        if entry.require(value is not None, f"f(alpha_{i}) = f({alpha.canonical()}) is not in K"):
            entry.note(f"f(alpha_{i}) = f({alpha.canonical()}) = {value.canonical()}")


def _persistence(state: StageState, entry: ReportEntry) -> None:
    stages = {m: stage_function(state.f, m) for m in range(2, state.m + 1)}
    for fact in state.facts:
        for m in range(fact.stage + 1, state.m + 1):
            value = exact_value(stages[m], fact.point)
            entry.require(value == fact.value,
                          f"f_{m}({fact.point.canonical()}) != {fact.value.canonical()}")
    entry.note(f"{len(state.facts)} facts re-reduced at every later stage")


def _backward(state: StageState, entry: ReportEntry) -> None:
    if state.m < 2:
        entry.not_applicable("X~_1 is empty")
        return
    disk = Disk.origin(state.r)
    targets = get_enumeration(state.config.enumeration).prefix(state.m)
    for i, alpha in enumerate(targets, start=1):
        zc = count_zeros(state.f, disk, alpha)
        points = [e.point for e in state.preimages if e.target_index == i]
        entry.require(zc.count == len(points),
                      f"alpha_{i}: {zc.count} zeros in {disk.describe()}, {len(points)} registered")
        for p in points:
            entry.require(p is not None and exact_value(state.f, p) == alpha,
                          f"alpha_{i}: a registered preimage does not reduce exactly")
        entry.note(f"alpha_{i}: {zc.count} preimages, all exact")


def _tail(state: StageState, entry: ReportEntry, sample_budget: int) -> None:
    radius = state.r
    tail = tail_certificate(state.f, radius, state.m - 1, state.config.theta)
    big = [p for p in state.predicates if p.reach <= radius]
    if not big:
        entry.not_applicable("no recorded margin inside B(0, r_m)")
        return
    smallest = min(p.margin - p.spent for p in big)
    entry.note(f"tail({radius}) <= {float(tail):.6e}, smallest remaining margin {float(smallest):.6e}")
    entry.require(tail < smallest, "tail bound reaches a recorded margin")
    entry.data["tail"] = f"{float(tail):.6e}"

    # sampled |f - alpha| on the outer circles never undercuts a certified margin
    outer = [p for p in big if p.radius == radius]
    with mpmath.workprec(state.config.precision_bits):
        for p in outer:
            lowest = None
            for j in range(sample_budget):
                z = mpmath.mpf(radius.numerator) / radius.denominator * mpmath.expjpi(
                    mpmath.mpf(2 * j) / sample_budget)
                value = abs(state.f(z) - p.target.to_mpc())
                lowest = value if lowest is None else min(lowest, value)
            if lowest is not None:
                entry.require(dyadic_lower(lowest) >= p.margin * Fraction(1, 2),
                              f"{p.label}: sampled |f - alpha| {mpmath.nstr(lowest, 6)} below margin")


def mahler_certificate(state: StageState, sample_budget: int = 32) -> InvariantReport:
    """Forward, persistence, backward and tail entries. Never raises on a failed check."""
    report = InvariantReport(state.m)
    sections = (
        ("forward", "f(alpha_i) in K for 2 <= i <= m", lambda e: _forward(state, e)),
        ("persistence", "recorded facts hold at every later stage", lambda e: _persistence(state, e)),
        ("backward", "preimages in B(0, r_m) are exactly the registry", lambda e: _backward(state, e)),
        ("tail", "later stages stay below the recorded margins",
         lambda e: _tail(state, e, sample_budget)),
    )
    with using_policy(state.config.policy):
        for key, title, run in sections:
            entry = report.entry(key, title)
            try:
                run(entry)
            except (MahlerError, ValueError, ZeroDivisionError) as e:
                entry.fail(f"{type(e).__name__}: {e}")
    logger.info("mahler certificate for stage %s: %s", state.m,
                "accepted" if report.accepted else "rejected")
    return report
