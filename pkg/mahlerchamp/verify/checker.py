"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Stage Checker - Recomputes every invariant of a completed stage.

Entries (i)-(vii) follow the stage properties; "orbits", "graph" and
"census" cover the grafted cycles, "theta-chain" is added by theta_chain.
Only the state and fresh computations are used: exact facts are
re-reduced from f, counts are re-wound, margins re-measured. A failed
check is a report entry, never an exception.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import mpmath

from ..construct.admissibility import recompute_spent
from ..construct.engine import cycle_filter, derivative_lower
from ..construct.enumeration import get_enumeration
from ..construct.state import NailGraph, StageState
from ..core.balls import ComplexBox
from ..core.disk import Disk
from ..core.errors import MahlerError, SearchExhausted
from ..core.gaussian import ZERO, GaussianRational
from ..core.precision import using_policy
from ..core.symbolic import NOT_EXACT, enclose_relative, reduce_exact
from ..cycles.finder import find_cycles, multiplier_of
from ..entire.polynomial import Polynomial
from ..entire.staged import StagedFunction, term_exponent
from ..rootcount.winding import count_zeros
from .report import EntryStatus, InvariantReport, ReportEntry
from .theta_chain import nu_links, theta_chain

logger = logging.getLogger(__name__)


def _guarded(entry: ReportEntry, check: Callable[[], None]) -> None:
    try:
        check()
    except (MahlerError, ValueError, ZeroDivisionError) as e:
        entry.fail(f"{type(e).__name__}: {e}")


def exact_value(f: StagedFunction, point: GaussianRational) -> Optional[GaussianRational]:
    value = reduce_exact(f.eval_symbolic(point))
    return None if value is NOT_EXACT else value


def truncated(f: StagedFunction, terms: int) -> StagedFunction:
    return StagedFunction(f.base, f.epsilon0, f.terms[:terms])


def stage_function(f: StagedFunction, stage: int) -> StagedFunction:
    """f_stage: the terms of the stages before `stage`."""
    return StagedFunction(f.base, f.epsilon0, [t for t in f.terms if t.stage < stage])


class StageChecker:
    """Runs the checks of one state; `check()` returns the full report."""

    def __init__(self, state: StageState):
        self.state = state
        self.f = state.f
        self.m = state.m
        self.roots = list(state.nail.roots)
        self.nail_poly = Polynomial.squared_from_roots(self.roots)
        self.report = InvariantReport(state.m)

    # (i) ----------------------------------------------------------------

    def check_form(self, entry: ReportEntry) -> None:
        seen = set()
        for t in self.f.terms:
            key = (t.stage, t.index)
            entry.require(key not in seen, f"term {key} appears twice")
            seen.add(key)
            entry.require(1 <= t.stage < self.m, f"term {key} belongs to no completed transition")
            entry.require(t.exponent == term_exponent(t.stage, t.index),
                          f"term {key} has exponent {t.exponent}")
            entry.require(not t.poly.is_zero(), f"term {key} has a zero polynomial")
        entry.note(f"{len(self.f.terms)} terms, perturbation degree {self.f.perturbation_degree()}")
        # every term of stage n must carry the nail polynomial of stage n
        for t in self.f.terms:
            if t.stage not in self.state.nail_sizes:
                entry.fail(f"no nail size recorded for stage {t.stage}")
                continue
            base = Polynomial.squared_from_roots(self.roots[: self.state.nail_sizes[t.stage]])
            entry.require(base.divides(t.poly),
                          f"term ({t.stage}, {t.index}) is not divisible by P_{t.stage}")

    # (ii) ---------------------------------------------------------------

    def check_nail(self, entry: ReportEntry) -> None:
        s = self.state
        previous = Fraction(1)
        for stage in sorted(s.radii):
            r = s.radii[stage]
            floor = max(Fraction(stage), previous) if stage > 1 else Fraction(1)
            entry.require(r > floor, f"r_{stage} = {r} is not above {floor}")
            previous = r
        entry.require(self.m in s.radii, f"no radius recorded for stage {self.m}")
        expected = set(s.X) | set(s.X_tilde) | set(s.Y)
        actual = set(self.roots)
        for q in sorted(expected - actual, key=lambda q: q.sort_key()):
            entry.fail(f"{q.canonical()} belongs to X, X~ or Y but is not a nail root")
        for q in sorted(actual - expected, key=lambda q: q.sort_key()):
            entry.fail(f"nail root {q.canonical()} is not in X, X~ or Y")
        for q in self.roots:
            entry.require(self.nail_poly.evaluate(q).is_zero(), f"P_m({q.canonical()}) != 0")
        sizes = [s.nail_sizes[k] for k in sorted(s.nail_sizes)]
        entry.require(sizes == sorted(sizes), "nail sizes decrease between stages")
        entry.require(s.nail_sizes.get(self.m) == len(self.roots),
                      f"P_{self.m} has {len(self.roots)} roots, recorded {s.nail_sizes.get(self.m)}")
        stages = sorted(k for k in s.nail_sizes if k <= self.m)
        for a, b in zip(stages, stages[1:]):
            pa = Polynomial.squared_from_roots(self.roots[: s.nail_sizes[a]])
            pb = Polynomial.squared_from_roots(self.roots[: s.nail_sizes[b]])
            entry.require(pa.divides(pb), f"P_{a} does not divide P_{b}")
        entry.data["D"] = len(self.roots)
        entry.note(f"D_{self.m} = {len(self.roots)}, |X| = {len(s.X)}, |X~| = {len(s.X_tilde)}, "
                   f"|Y| = {len(s.Y)}")

    # (iii) --------------------------------------------------------------

    def check_targets(self, entry: ReportEntry) -> None:
        s = self.state
        if self.m < 2:
            entry.not_applicable("X_1 and X~_1 are empty")
            return
        for tau in s.X:
            value = exact_value(self.f, tau)
            if entry.require(value is not None, f"f({tau.canonical()}) is not in K"):
                entry.note(f"f({tau.canonical()}) = {value.canonical()}")
            entry.require(derivative_lower(self.f, tau) is not None,
                          f"f'({tau.canonical()}) not certified nonzero")
        targets = get_enumeration(s.config.enumeration).prefix(self.m)
        for j, alpha in enumerate(targets, start=1):
            hits = [tau for tau in s.X_tilde if exact_value(self.f, tau) == alpha]
            entry.require(bool(hits), f"no tau in X~ with f(tau) = alpha_{j} = {alpha.canonical()}")

    # (iv) ---------------------------------------------------------------

    def check_epsilon(self, entry: ReportEntry) -> None:
        for t in self.f.terms:
            entry.require(t.within_nu(),
                          f"term ({t.stage}, {t.index}): |eps| not certified in (0, nu = {t.nu})")
        nu_links(self.state, entry)
        entry.note(f"{len(self.f.terms)} terms within their nu bounds")

    # (v) ----------------------------------------------------------------

    def check_coefficients(self, entry: ReportEntry) -> None:
        theta = self.state.config.theta
        for k in range(0, self.m + 1):
            a = reduce_exact(self.f.taylor_coefficient(k))
            if entry.require(a is not NOT_EXACT, f"a_{k} is not in K"):
                entry.note(f"a_{k} = {a.canonical()}")
                if k == 0:
                    entry.require(not a.is_zero(), "a_0 = b_0 + eps_0 is zero")
        rows = []
        for k in self.f.touched_indices():
            shift = self.f.coefficient_shift(k)
            exact = reduce_exact(shift)
            if exact is not NOT_EXACT:
                ok = exact.norm() < theta[k] * theta[k]
                upper = exact.abs_upper()
            else:
                upper = enclose_relative(shift, 64).abs_upper_fraction()
                ok = upper < theta[k]
            rows.append({"k": k, "shift_upper": f"{float(upper):.6e}", "theta": str(theta[k])})
            entry.require(ok, f"|a_{k} - b_{k}| not certified below theta_{k} = {theta[k]}")
        entry.data["ledger"] = rows

    # (vi) ---------------------------------------------------------------

    def check_counts(self, entry: ReportEntry) -> None:
        s = self.state
        for p in s.predicates:
            zc = count_zeros(self.f, p.disk, p.target)
            entry.require(zc.count == p.count, f"{p.label}: {zc.count} zeros, recorded {p.count}")
            spent = recompute_spent(p, self.f)
            fresh = count_zeros(truncated(self.f, p.since), p.disk, p.target)
            entry.require(spent < fresh.margin,
                          f"{p.label}: spent {float(spent):.3e} reaches the re-measured margin")
            # margins differ between precisions, not by more than a factor 2
            entry.require(p.margin <= 2 * fresh.margin,
                          f"{p.label}: recorded margin {float(p.margin):.3e} above "
                          f"re-measured {float(fresh.margin):.3e}")
        entry.note(f"{len(s.predicates)} count predicates re-wound")
        if self.m < 2:
            return
        disk = Disk.origin(s.r)
        by_target: Dict[int, int] = {}
        for e in s.preimages:
            by_target[e.target_index] = by_target.get(e.target_index, 0) + 1
            if e.point is None:
                entry.fail(f"preimage of alpha_{e.target_index} near {e.center.canonical()} "
                           f"was never made exact")
                continue
            entry.require(exact_value(self.f, e.point) == e.target,
                          f"f({e.point.canonical()}) != {e.target.canonical()}")
            entry.require(disk.contains_exact(e.point),
                          f"{e.point.canonical()} lies outside B(0, {s.r})")
        for p in s.predicates:
            if p.center == ZERO and p.radius == s.r and p.stage == self.m - 1:
                i = int(p.label.split("alpha_")[1].rstrip("]"))
                entry.require(by_target.get(i, 0) == p.count,
                              f"{p.label}: {p.count} zeros but {by_target.get(i, 0)} registered")

    # (vii) --------------------------------------------------------------

    def check_separation(self, entry: ReportEntry) -> None:
        s = self.state
        if self.m < 2:
            entry.not_applicable("no nailed target at stage 1")
            return
        before = Polynomial.squared_from_roots(self.roots[: s.nail_sizes.get(self.m - 1, 0)])
        alpha = s.X[-1] if s.X else None
        if alpha is not None and not before.evaluate(alpha).is_zero():
            value = exact_value(self.f, alpha)
            if entry.require(value is not None, f"f(alpha_{self.m}) is not in K"):
                entry.require(not self.nail_poly.evaluate(value).is_zero(),
                              f"P_{self.m}(f(alpha_{self.m})) = 0")
        images = set()
        for w in self.roots:
            v = exact_value(self.f, w)
            if v is not None:
                images.add(v)
        for tau in s.X_tilde:
            if before.evaluate(tau).is_zero():
                continue
            entry.require(tau not in images, f"{tau.canonical()} is the image of a nail root")

    # orbits -------------------------------------------------------------

    def check_orbits(self, entry: ReportEntry) -> None:
        s = self.state
        disk = Disk.origin(s.r)
        roots = set(self.roots)
        for k in sorted(s.orbits):
            for orbit in s.orbits[k]:
                pts = orbit.points
                label = f"{k}-cycle at {pts[0].canonical()}"
                entry.require(len(pts) == k and len(set(pts)) == k, f"{label}: malformed")
                for j, g in enumerate(pts):
                    entry.require(g in roots, f"{label}: gamma_{j} is not nailed")
                    entry.require(disk.contains_exact(g), f"{label}: gamma_{j} outside B(0, {s.r})")
                    entry.require(exact_value(self.f, g) == pts[(j + 1) % k],
                                  f"{label}: f(gamma_{j}) != gamma_{(j + 1) % k}")
                with mpmath.workprec(self.state.config.precision_bits):
                    mult = multiplier_of(self.f, [ComplexBox.from_gaussian(g) for g in pts])
                if k == 1:
                    ok = not mult.contains_zero() and not (mult - 1).contains_zero()
                else:
                    ok = mult.abs_lower() > 1
                entry.require(ok, f"{label}: multiplier {mpmath.nstr(mult.center, 8)} not certified")
        entry.note(f"{len(s.Y)} orbit points re-checked")

    def check_graph(self, entry: ReportEntry) -> None:
        """Cycles of tau -> f(tau) on nail roots must be exactly the grafted orbits."""
        graph = NailGraph()
        for w in self.roots:
            v = exact_value(self.f, w)
            if not entry.require(v is not None, f"f({w.canonical()}) at a nail root is not in K"):
                continue
            graph.add(w, v)
        found = {tuple(c) for c in graph.cycles()}
        grafted = set()
        for orbit in (o for k in sorted(self.state.orbits) for o in self.state.orbits[k]):
            pts = list(orbit.points)
            pivot = min(range(len(pts)), key=lambda i: pts[i].sort_key())
            grafted.add(tuple(pts[pivot:] + pts[:pivot]))
        for cycle in sorted(found - grafted, key=lambda c: c[0].sort_key()):
            entry.fail(f"accidental nailed {len(cycle)}-cycle through {cycle[0].canonical()}")
        for cycle in sorted(grafted - found, key=lambda c: c[0].sort_key()):
            entry.fail(f"grafted {len(cycle)}-cycle through {cycle[0].canonical()} is not closed")
        entry.data["cycles"] = len(found)

    def check_supply(self, entry: ReportEntry) -> None:
        """With cycle_supply = full, B(0, r_m) held n + 1 + D_n cycles of every period up to m."""
        s = self.state
        if s.config.cycle_supply != "full":
            entry.not_applicable(f"cycle_supply = {s.config.cycle_supply}")
            return
        if self.m < 2:
            entry.not_applicable("no radius was selected at stage 1")
            return
        n = self.m - 1
        # f at radius selection: the earlier stages plus the stabilizing term (n, 0)
        f = StagedFunction(self.f.base, self.f.epsilon0,
                           [t for t in self.f.terms if t.stage < n or (t.stage == n and t.index == 0)])
        disk = Disk.origin(s.radii[self.m])
        want = n + 1 + s.nail_sizes.get(n, 0)
        rows = []
        for k in range(1, self.m + 1):
            try:
                found = find_cycles(f, k, disk, want=want, seed_density=s.config.seed_density,
                                    exhaustive=False, accept=cycle_filter(k))
            except SearchExhausted as e:
                entry.fail(e.message)
                continue
            rows.append({"k": k, "found": len(found), "want": want})
        entry.data["supply"] = rows

    def check_census(self, entry: ReportEntry) -> None:
        config = self.state.config
        rows = []
        for k in range(1, self.m + 1):
            want = 0 if self.m == 1 else config.orbit_target(k, self.m)
            have = self.state.orbit_count(k)
            rows.append({"k": k, "orb": have, "target": want})
            entry.require(have == want, f"#Orb({k}) = {have}, expected {want}")
        for k in self.state.orbits:
            if k > self.m:
                entry.fail(f"{k}-cycles grafted before stage {k}")
        entry.data["census"] = rows

    # --------------------------------------------------------------------

    CHECKS = (
        ("i", "f = g + eps_0 + finite staged polynomial", "check_form"),
        ("ii", "nail polynomial, radii and divisibility", "check_nail"),
        ("iii", "exact values at X and surjectivity onto alpha_1..alpha_m", "check_targets"),
        ("iv", "0 < |eps| < nu for every term", "check_epsilon"),
        ("v", "coefficients in K and within theta", "check_coefficients"),
        ("vi", "preimage counts and registry", "check_counts"),
        ("vii", "nailed values avoid nail roots", "check_separation"),
        ("orbits", "grafted orbits exact and repelling", "check_orbits"),
        ("graph", "no accidental nailed cycle", "check_graph"),
        ("census", "#Orb(k) = min(m, s_k)", "check_census"),
        ("supply", "n + 1 + D_n cycles per period in B(0, r_m)", "check_supply"),
    )

    def check(self) -> InvariantReport:
        with using_policy(self.state.config.policy):
            for key, title, method in self.CHECKS:
                entry = self.report.entry(key, title)
                _guarded(entry, lambda: getattr(self, method)(entry))
                logger.debug("check %s: %s", key, entry.status.value)
            chain = InvariantReport(self.m)
            try:
                chain = theta_chain(self.state)
            except (MahlerError, ValueError, ZeroDivisionError) as e:
                chain.entry("theta-chain", "coefficient bound chain per transition").fail(str(e))
            self.report.merge(chain)
        return self.report


def check_stage(state: StageState) -> InvariantReport:
    """Every invariant of the state, recomputed. Never raises on a failed check."""
    report = StageChecker(state).check()
    logger.info("stage %s verified: %s", state.m, "accepted" if report.accepted else "rejected")
    return report


def failing_keys(report: InvariantReport) -> List[str]:
    return [e.key for e in report.entries if e.status is EntryStatus.FAILED]
