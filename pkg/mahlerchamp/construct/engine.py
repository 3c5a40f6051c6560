"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Stage Engine - The transition from stage n to stage n+1.

A transition is a sequence of micro-steps, each adding one term
eps_{n,j} z^e P_{n,j} to f:

1. stabilize_preimages: j = 0, steers a_{n+1} into K \\ {0}
2. select_radius: r_{n+1} with a clear boundary and enough free cycles
3. register_preimages: isolates every preimage of alpha_1..alpha_{n+1}
4. nail_value / pin_derivative: f(alpha_{n+1}) exact, then frozen
5. algebraize_preimage: each new preimage moved onto an exact point
6. graft_cycle: k links and a pin per algebraic k-cycle

Every eps is admissible (below nu and below every recorded Rouche
margin) and is resampled when a post-condition fails. The transition runs
on a private copy of the state, so a failing step leaves the input stage
untouched.
"""

import logging
import math
import random
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath

from ..core.balls import ComplexBox
from ..core.disk import Disk
from ..core.errors import MahlerError, RetryExhausted, SearchExhausted
from ..core.gaussian import I, ONE, ZERO, GaussianRational, dyadic_lower
from ..core.precision import default_policy, using_policy
from ..core.symbolic import (
    NOT_EXACT,
    SymbolicValue,
    enclose,
    enclose_relative,
    is_exactly,
    reduce_exact,
)
from ..cycles.finder import (
    PeriodPreconditionError,
    certify_cycle,
    find_cycles,
    grid_seeds,
    multiplier_of,
)
from ..cycles.lemmas import avoids_zero_and_one
from ..cycles.records import CycleRecord, CycleStatus
from ..entire.evaluable import PeriodicEquation, Shifted
from ..entire.polynomial import Polynomial
from ..entire.registry import get_base
from ..entire.staged import PerturbationTerm, StagedFunction, term_exponent
from ..rootcount.newton import Isolation, certify_zero, newton_refine
from ..rootcount.winding import boundary_clear, count_zeros
from . import admissibility
from .config import ConstructionConfig
from .enumeration import get_enumeration
from .nail import NailPolynomial, nu_bound, step_budget
from .state import (
    ExactFact,
    GraftedOrbit,
    LedgerEntry,
    PreimageEntry,
    StageBudget,
    StageState,
    StepRecord,
)

logger = logging.getLogger(__name__)

UNITS = (ONE, I, -ONE, -I)
EPSILON0_SHIFTS = range(3, 64)
NUDGES_PER_STEP = 4
ETA_CAP = Fraction(1, 2)
GUARD_BITS = 64


class NonSimpleZero(MahlerError):
    """A preimage ball holds more or fewer than one zero."""
    pass


class PersistenceLost(MahlerError):
    """The true cycle near a graft could not be re-certified."""
    pass


class DegenerateArgument(MahlerError):
    """An exactness-forcing term would divide by zero."""
    pass


class BudgetOverflow(MahlerError):
    """A transition needs more micro-steps than its budget allows."""
    pass


class PreconditionError(MahlerError):
    """A micro-step was called on a state that does not satisfy its precondition."""
    pass


class _Rejected(Exception):
    """A candidate eps failed a filter; the caller resamples."""
    pass


class _Replan(Exception):
    def __init__(self, planned: int, radius: Fraction):
        self.planned = planned
        self.radius = radius
        super().__init__(f"replan with budget {planned}")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def grid_bits(bound: Fraction) -> int:
    """Smallest G >= 0 with 2^-G <= bound."""
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError(f"Grid bound must be positive, got {bound}")
    G = max(0, bound.denominator.bit_length() - bound.numerator.bit_length())
    if bound.numerator << G < bound.denominator:
        G += 1
    return G


def dyadic(G: int) -> Fraction:
    return Fraction(1, 2 ** G)


def round_near(value: SymbolicValue, G: int) -> GaussianRational:
    """A point of the 2^-G grid within 2^-G of the value."""
    box = enclose(value, dyadic(G + 4))
    magnitude = max(0, int(mpmath.mag(box.center)))
    with mpmath.workprec(G + GUARD_BITS + magnitude):
        return GaussianRational.from_mpc(box.center, G)


def derivative_lower(f: StagedFunction, point: GaussianRational, levels: int = 3) -> Optional[Fraction]:
    """Certified lower bound of |f'(point)|, or None if 0 is not excluded."""
    df = f.derivative()
    for i, bits in enumerate(default_policy().levels()):
        if i >= levels:
            break
        with mpmath.workprec(bits):
            box = df.eval_box(ComplexBox.from_gaussian(point))
            if not box.contains_zero():
                return box.abs_lower_fraction()
    return None


def choose_epsilon0(base, theta0: Fraction, targets: List[GaussianRational]) -> GaussianRational:
    """
    First of 1/8, i/8, -1/8, -i/8, 1/16, ... with |eps| < theta_0,
    b_0 + eps != 0, and the omitted value of g + eps outside the targets.
    """
    b0 = base.taylor_coefficient(0)
    omitted = base.omitted_value
    for shift in EPSILON0_SHIFTS:
        for unit in UNITS:
            eps = unit * dyadic(shift)
            if eps.norm() >= theta0 * theta0:
                continue
            if (b0 + eps).is_zero():
                continue
            if omitted is not None and (omitted + eps) in targets:
                continue
            return eps
    raise SearchExhausted(f"No eps_0 found below theta_0 = {theta0}")


def coefficient_ledger(f: StagedFunction, config: ConstructionConfig) -> List[LedgerEntry]:
    entries = []
    for k in f.touched_indices():
        shift = f.coefficient_shift(k)
        exact_shift = reduce_exact(shift)
        if exact_shift is not NOT_EXACT:
            upper = exact_shift.abs_upper()
        else:
            upper = enclose_relative(shift, 64).abs_upper_fraction()
        total = reduce_exact(f.taylor_coefficient(k))
        entries.append(LedgerEntry(
            k=k,
            b=f.base.taylor_coefficient(k),
            shift_upper=upper,
            theta=config.theta[k],
            a=None if total is NOT_EXACT else total,
        ))
    return entries


def cycle_filter(k: int):
    if k == 1:
        return avoids_zero_and_one
    return lambda record: record.repelling


# ---------------------------------------------------------------------------
# stage 1
# ---------------------------------------------------------------------------

def init_stage(config: ConstructionConfig) -> StageState:
    """
    f_1 = g + eps_0 with eps_0 exact, r_1 the first radius above 1 whose
    circle misses the zeros of f_1 - alpha_1.

    Raises:
        ConfigError: invalid configuration
        SearchExhausted: no radius up to radius_cap is clear
    """
    config.check()
    with using_policy(config.policy):
        base = get_base(config.base)
        targets = get_enumeration(config.enumeration).prefix(config.max_stage + 1)
        eps0 = choose_epsilon0(base, config.theta[0], targets)
        f = StagedFunction(base, SymbolicValue.exact(eps0))
        radius = config.initial_radius or 1 + config.radius_step
        tried = []
        while radius <= config.radius_cap:
            disk = Disk.origin(radius)
            if boundary_clear(f, targets[:1], disk):
                break
            tried.append(str(radius))
            radius += config.radius_step / 8
        else:
            raise SearchExhausted(
                "No clear radius for stage 1", diagnostics={"tried": tried}
            )
        predicate = admissibility.register(f, Disk.origin(radius), targets[0], "B_1[alpha_1]", 1)
        state = StageState(
            config=config,
            m=1,
            f=f,
            radii={1: radius},
            nail_sizes={1: 0},
            predicates=[predicate],
        )
        state.ledger = coefficient_ledger(f, config)
    logger.info("stage 1: eps_0 = %s, r_1 = %s", eps0.canonical(), radius)
    return state


# ---------------------------------------------------------------------------
# transition n -> n+1
# ---------------------------------------------------------------------------

class StageWork:
    """One transition in progress, on a private copy of the state."""

    def __init__(self, state: StageState, budget: int, radius_hint: Optional[Fraction] = None):
        self.state = state.copy()
        self.config = state.config
        self.n = state.m
        self.budget = budget
        self.radius_hint = radius_hint
        self.rng = random.Random(f"{self.config.seed}:{self.n}")
        self.index = 0
        self.targets = get_enumeration(self.config.enumeration).prefix(self.n + 1)
        self.graph = state.graph()
        self.radius: Optional[Fraction] = None
        self.registry: List[PreimageEntry] = []
        self.census: Dict[int, List[CycleRecord]] = {}

    @property
    def f(self) -> StagedFunction:
        return self.state.f

    @property
    def nail(self) -> NailPolynomial:
        return self.state.nail

    # bookkeeping --------------------------------------------------------

    def needs(self) -> Dict[int, int]:
        """Orbits still missing per period for stage n+1."""
        out = {}
        for k in range(1, self.n + 2):
            missing = self.config.orbit_target(k, self.n + 1) - self.state.orbit_count(k)
            if missing > 0:
                out[k] = missing
        return out

    def graft_steps(self) -> int:
        return sum(missing * (k + 1) for k, missing in self.needs().items())

    def allowance(self, poly: Polynomial) -> Fraction:
        """Exclusive bound on |eps| for the next term with polynomial `poly`."""
        nu = nu_bound(self.n, self.index, poly, self.config.theta, self.budget)
        full = poly.shift(term_exponent(self.n, self.index))
        return min(nu, admissibility.ceiling(self.state.predicates, full))

    def checkpoint(self) -> Tuple:
        s = self.state
        return (s.f, list(s.predicates), self.index, len(s.steps), s.nail, len(s.facts),
                dict(self.graph.edges), len(s.X))

    def restore(self, cp: Tuple) -> None:
        s = self.state
        s.f, s.predicates, self.index, steps, s.nail, facts, edges, xs = cp
        del s.steps[steps:]
        del s.facts[facts:]
        del s.X[xs:]
        self.graph.edges = edges

    def commit(self, epsilon: SymbolicValue, poly: Polynomial, kind: str, note: str) -> PerturbationTerm:
        """
        Add eps z^e P as term (n, index).

        Raises:
            BudgetOverflow: the budget is used up
            _Rejected: eps is not admissible
        """
        if self.index >= self.budget:
            raise BudgetOverflow(
                f"Stage {self.n} needs more than {self.budget} micro-steps ({kind} {note})"
            )
        nu = nu_bound(self.n, self.index, poly, self.config.theta, self.budget)
        term = PerturbationTerm(self.n, self.index, epsilon, poly, nu, kind)
        if not term.within_nu():
            raise _Rejected(f"{kind} {note}: |eps| not certified in (0, nu)")
        upper = term.epsilon_upper()
        amounts = admissibility.charges(self.state.predicates, term.full_poly, upper)
        bad = admissibility.first_violation(self.state.predicates, amounts)
        if bad is not None:
            raise _Rejected(f"{kind} {note}: breaks the margin of {bad.label}")
        s = self.state
        s.f = s.f.with_term(term)
        s.predicates = admissibility.charge_all(s.predicates, amounts)
        s.steps.append(StepRecord(self.n, self.index, kind, note, upper, nu))
        self.index += 1
        logger.info("term (%s, %s) %s %s: |eps| <= %.3e", self.n, term.index, kind, note, float(upper))
        return term

    def record_fact(self, point: GaussianRational, value: GaussianRational, kind: str) -> None:
        if not is_exactly(self.f.eval_symbolic(point), value):
            raise MahlerError(f"f({point.canonical()}) does not reduce to {value.canonical()}")
        self.state.facts.append(ExactFact(point, value, kind, self.n))
        self.graph.add(point, value)

    def resample_unit(self) -> GaussianRational:
        return UNITS[self.rng.randrange(len(UNITS))]

    def exhausted(self, step: str, attempts: int, last: Optional[str]) -> RetryExhausted:
        return RetryExhausted(
            f"{step} at stage {self.n} failed after {attempts} attempts: {last}",
            step=step,
            attempts=attempts,
        )

    # micro-steps --------------------------------------------------------

    def stabilize_preimages(self) -> PerturbationTerm:
        """eps_{n,0} z^{n+1} P_n with a_{n+1} moved onto the dyadic grid."""
        n = self.n
        P = self.nail.poly
        p0 = P.evaluate(ZERO)
        if p0.is_zero():
            raise PreconditionError("0 is a nail root")
        a = self.f.taylor_coefficient(n + 1)
        exact = reduce_exact(a)
        b = self.f.base.taylor_coefficient(n + 1)
        theta = self.config.theta[n + 1]
        bound = self.allowance(P)
        p0_low = p0.abs_bounds()[0]
        last = None
        for attempt in range(self.config.max_resamples):
            G = grid_bits(bound * p0_low / 4) + attempt
            step = GaussianRational(dyadic(G))
            q = exact + self.resample_unit() * step if exact is not NOT_EXACT else round_near(a, G)
            if attempt and exact is NOT_EXACT:
                q = q + self.resample_unit() * step
            if q.is_zero() or (q - b).norm() >= theta * theta:
                last = f"a_{n + 1} candidate {q.canonical()} rejected"
                continue
            eps = (SymbolicValue.exact(q) - a) / SymbolicValue.exact(p0)
            cp = self.checkpoint()
            try:
                term = self.commit(eps, P, "stabilize", f"a_{n + 1}")
                self.recertify_derivatives()
            except _Rejected as e:
                self.restore(cp)
                last = str(e)
                logger.warning("stabilize resample %s: %s", attempt, e)
                continue
            return term
        raise self.exhausted("stabilize_preimages", self.config.max_resamples, last)

    def recertify_derivatives(self) -> None:
        for fact in self.state.facts:
            if fact.kind == "preimage" and derivative_lower(self.f, fact.point) is None:
                raise _Rejected(f"f' at {fact.point.canonical()} not certified nonzero")

    def select_radius(self) -> Fraction:
        """
        Raises:
            SearchExhausted: no radius up to radius_cap qualifies
        """
        n = self.n
        step = self.config.radius_step
        floor = max(Fraction(n + 1), self.state.r)
        radius = floor + step
        if self.radius_hint is not None and self.radius_hint > floor:
            radius = self.radius_hint
        tried: List[str] = []
        nudges = 0
        while radius <= self.config.radius_cap:
            disk = Disk.origin(radius)
            if not boundary_clear(self.f, self.targets, disk):
                tried.append(f"{radius}: boundary")
                nudges += 1
                radius += step / 8 if nudges % NUDGES_PER_STEP else step
                continue
            empty = self.missing_preimage(disk)
            if empty is not None:
                tried.append(f"{radius}: no preimage of alpha_{empty}")
                radius += step
                continue
            try:
                self.census = self.cycle_supply(disk)
            except PeriodPreconditionError:
                tried.append(f"{radius}: fixed point on boundary")
                radius += step / 8
                continue
            except SearchExhausted as e:
                tried.append(f"{radius}: {e.message}")
                radius += step
                continue
            self.radius = radius
            logger.info("stage %s: r_%s = %s", n, n + 1, radius)
            return radius
        raise SearchExhausted(
            f"No radius up to {self.config.radius_cap} qualifies for stage {n + 1}",
            diagnostics={"stage": n + 1, "tried": tried},
        )

    def missing_preimage(self, disk: Disk) -> Optional[int]:
        """Index of the first target with no zero of f - alpha in the disk."""
        for i, alpha in enumerate(self.targets, start=1):
            if count_zeros(self.f, disk, alpha).count == 0:
                return i
        return None

    def cycle_supply(self, disk: Disk) -> Dict[int, List[CycleRecord]]:
        census: Dict[int, List[CycleRecord]] = {}
        needs = self.needs()
        full = self.config.cycle_supply == "full"
        for k in range(1, self.n + 2):
            missing = needs.get(k, 0)
            if not missing and not full:
                continue
            have = self.state.orbit_count(k)
            want = self.n + 1 + self.nail.D if full else missing + have
            records = find_cycles(
                self.f, k, disk,
                want=want,
                seed_density=self.config.seed_density,
                exhaustive=False,
                accept=cycle_filter(k),
            )
            free = [r for r in records if r.classify(self.nail.roots) is CycleStatus.FREE]
            if len(free) < missing:
                raise SearchExhausted(
                    f"{len(free)} free {k}-cycles in {disk.describe()}, {missing} needed",
                    diagnostics={"period": k, "free": len(free), "needed": missing},
                )
            census[k] = free
        return census

    def register_preimages(self) -> List[PreimageEntry]:
        """
        Isolate every preimage of alpha_1..alpha_{n+1} in B(0, r_{n+1}) and
        register the count-preservation predicates.

        Raises:
            SearchExhausted: fewer isolated preimages than the winding count
            NonSimpleZero: a preimage ball does not count exactly one zero
        """
        n = self.n
        disk = Disk.origin(self.radius)
        entries: List[PreimageEntry] = []
        for i, alpha in enumerate(self.targets, start=1):
            predicate = admissibility.register(self.f, disk, alpha, f"B_{n + 1}[alpha_{i}]", n)
            self.state.predicates.append(predicate)
            for iso in self.locate_preimages(alpha, disk, predicate.count):
                entries.append(self.classify_preimage(alpha, i, iso))
        self.assign_balls(entries, disk)
        for e in entries:
            if e.status != "registered":
                continue
            label = f"B({e.center.canonical()}, {e.eta})[alpha_{e.target_index}]"
            predicate = admissibility.register(self.f, e.ball, e.target, label, n)
            if predicate.count != 1:
                raise NonSimpleZero(f"{label} holds {predicate.count} zeros")
            self.state.predicates.append(predicate)
        self.registry = entries
        logger.info("stage %s: %s preimages registered, %s new", n, len(entries),
                    sum(1 for e in entries if e.status == "registered"))
        return entries

    def locate_preimages(self, alpha: GaussianRational, disk: Disk, count: int) -> List[Isolation]:
        F = Shifted(self.f, alpha)
        found: List[Isolation] = []
        if count == 0:
            return found
        branches = max(1, math.ceil(float(disk.radius) / (2 * math.pi)) + 1)
        with mpmath.workprec(self.config.precision_bits):
            known = [fact.point.to_mpc() for fact in self.state.facts if fact.value == alpha]
            seeds = known + self.f.inverse_branches(alpha.to_mpc(), branches)
            sources = [iter(seeds), grid_seeds(disk, 1, self.config.seed_density)]
            for source in sources:
                for seed in source:
                    iso = certify_zero(F, seed)
                    if iso is None or not disk.contains_box(iso.box):
                        continue
                    if any(iso.box.overlaps(o.unique_region()) or o.box.overlaps(iso.unique_region())
                           for o in found):
                        continue
                    found.append(iso)
                    if len(found) == count:
                        return found
        raise SearchExhausted(
            f"Isolated {len(found)} of {count} preimages of {alpha.canonical()} in {disk.describe()}",
            diagnostics={"target": alpha.canonical(), "found": len(found), "count": count},
        )

    def classify_preimage(self, alpha: GaussianRational, index: int, iso: Isolation) -> PreimageEntry:
        for root in self.nail.roots:
            if iso.box.overlaps(ComplexBox.from_gaussian(root)):
                fact = self.state.fact_for(root)
                if fact is None or fact.value != alpha:
                    raise PreconditionError(
                        f"Preimage of {alpha.canonical()} meets nail root {root.canonical()}"
                    )
                previous = next((e for e in self.state.preimages if e.point == root), None)
                return PreimageEntry(alpha, index, iso.box, root, Fraction(0),
                                     previous.stage if previous else self.n, root, "inherited")
        if iso.box.contains(0) and is_exactly(self.f.eval_symbolic(ZERO), alpha):
            return PreimageEntry(alpha, index, iso.box, ZERO, Fraction(0), self.n, ZERO, "origin")
        with mpmath.workprec(self.config.precision_bits):
            center = GaussianRational.from_mpc(iso.box.center, 64)
        return PreimageEntry(alpha, index, iso.box, center, Fraction(0), self.n)

    def assign_balls(self, entries: List[PreimageEntry], disk: Disk) -> None:
        """eta: half the distance to the other preimages and to the boundary."""
        with mpmath.workprec(self.config.precision_bits):
            for e in entries:
                if e.status != "registered":
                    continue
                c = e.center.to_mpc()
                gaps = [disk.radius_mpf() - abs(c) - e.box.radius]
                for o in entries:
                    if o is not e:
                        gaps.append(abs(c - o.box.center) - o.box.radius)
                gap = min(gaps)
                # the ball must contain the isolation box with room to spare
                if gap <= 4 * (e.box.radius + abs(c - e.box.center)):
                    raise PreconditionError(f"Preimage near {e.center.canonical()} is not separated")
                e.eta = min(ETA_CAP, dyadic_lower(gap / 2, 32))

    def nail_value(self) -> Optional[PerturbationTerm]:
        """f(alpha_{n+1}) onto a K-point; no-op when alpha_{n+1} is nailed."""
        n = self.n
        alpha = self.targets[n]
        self.state.X.append(alpha)
        if self.nail.contains(alpha):
            logger.info("alpha_%s = %s already nailed", n + 1, alpha.canonical())
            return None
        if alpha.is_zero():
            raise DegenerateArgument("alpha = 0 cannot be nailed by a z^(n+2) term")
        P = self.nail.poly
        den = alpha ** (n + 2) * P.evaluate(alpha)
        value = self.f.eval_symbolic(alpha)
        exact = reduce_exact(value)
        bound = self.allowance(P)
        den_low = den.abs_bounds()[0]
        last = None
        for attempt in range(self.config.max_resamples):
            G = grid_bits(bound * den_low / 4) + attempt
            step = GaussianRational(dyadic(G))
            target = exact + self.resample_unit() * step if exact is not NOT_EXACT else round_near(value, G)
            if attempt and exact is NOT_EXACT:
                target = target + self.resample_unit() * step
            if target == alpha or self.nail.vanishes_at(target) or self.graph.closes_cycle(alpha, target):
                last = f"target {target.canonical()} rejected"
                continue
            eps = (SymbolicValue.exact(target) - value) / SymbolicValue.exact(den)
            cp = self.checkpoint()
            try:
                term = self.commit(eps, P, "nail", f"alpha_{n + 1}")
                if derivative_lower(self.f, alpha) is None:
                    raise _Rejected(f"f'(alpha_{n + 1}) not certified nonzero")
            except _Rejected as e:
                self.restore(cp)
                last = str(e)
                logger.warning("nail_value resample %s: %s", attempt, e)
                continue
            self.record_fact(alpha, target, "target")
            return term
        raise self.exhausted("nail_value", self.config.max_resamples, last)

    def pin_epsilon(self, poly: Polynomial, attempt: int) -> GaussianRational:
        """
        A unit times a power of two, at most half of what every predicate
        still allows for the next term with polynomial `poly`.

        Raises:
            _Rejected: no predicate room is left
        """
        bound = self.allowance(poly)
        if bound <= 0:
            raise _Rejected(f"no room left for a pin term (allowance {bound})")
        return self.resample_unit() * dyadic(grid_bits(bound) + 1 + attempt)

    def pin_derivative(self, point: GaussianRational) -> Optional[PerturbationTerm]:
        """Add (z - point)^2 to the nail polynomial with a small exact eps."""
        if self.state.fact_for(point) is None:
            raise PreconditionError(f"No exact value recorded at {point.canonical()}")
        if self.nail.contains(point):
            return None
        if derivative_lower(self.f, point) is None:
            raise PreconditionError(f"f' at {point.canonical()} not certified nonzero")
        nail = self.nail.with_root(point)
        P = nail.poly
        last = None
        for attempt in range(self.config.max_resamples):
            try:
                eps = self.pin_epsilon(P, attempt)
                term = self.commit(SymbolicValue.exact(eps), P, "pin", point.canonical())
            except _Rejected as e:
                last = str(e)
                logger.warning("pin resample %s: %s", attempt, e)
                continue
            self.state.nail = nail
            return term
        raise self.exhausted("pin_derivative", self.config.max_resamples, last)

    def algebraize_preimage(self, entry: PreimageEntry) -> Optional[PerturbationTerm]:
        """
        Move a registered preimage onto an exact tau in K with f(tau) = w.

        Raises:
            NonSimpleZero: the ball stops counting exactly one zero
            RetryExhausted: no admissible tau was found
        """
        if entry.status != "registered":
            return None
        n = self.n
        w = entry.target
        P = self.nail.poly
        F = Shifted(self.f, w)
        bound = self.allowance(P)
        with mpmath.workprec(self.config.precision_bits):
            z = entry.box.center
            slope = abs(self.f.derivative()(z)) + 1
            den = abs(z) ** (n + 2) * abs(P(z))
            scale = dyadic_lower(den / (8 * slope), 32) if den > 0 else Fraction(0)
        if scale <= 0:
            raise DegenerateArgument(f"Preimage near {entry.center.canonical()} sits on a nail root")
        last = None
        for attempt in range(self.config.max_resamples):
            G = grid_bits(bound * scale) + attempt
            with mpmath.workprec(G + GUARD_BITS + max(0, int(mpmath.mag(z)))):
                refined = newton_refine(F, entry.box.center)
                if refined is None:
                    last = "Newton lost the preimage"
                    continue
                tau = GaussianRational.from_mpc(refined, G)
            if attempt:
                tau = tau + self.resample_unit() * dyadic(G)
            problem = self.point_problem(tau, w)
            if problem is None and not entry.ball.contains_exact(tau):
                problem = "outside its ball"
            if problem is not None:
                last = f"tau {tau.canonical()} {problem}"
                continue
            den_q = tau ** (n + 2) * P.evaluate(tau)
            eps = (SymbolicValue.exact(w) - self.f.eval_symbolic(tau)) / SymbolicValue.exact(den_q)
            cp = self.checkpoint()
            try:
                term = self.commit(eps, P, "preimage", tau.canonical())
                if derivative_lower(self.f, tau) is None:
                    raise _Rejected(f"f'({tau.canonical()}) not certified nonzero")
            except _Rejected as e:
                self.restore(cp)
                last = str(e)
                logger.warning("algebraize resample %s: %s", attempt, e)
                continue
            zc = count_zeros(self.f, entry.ball, w)
            if zc.count != 1:
                raise NonSimpleZero(f"{entry.ball.describe()} holds {zc.count} zeros of f - {w}")
            self.record_fact(tau, w, "preimage")
            self.state.nail = self.nail.with_root(tau)
            entry.point = tau
            entry.status = "algebraized"
            return term
        raise self.exhausted("algebraize_preimage", self.config.max_resamples, last)

    def point_problem(self, tau: GaussianRational, value: GaussianRational) -> Optional[str]:
        """Why tau cannot be nailed to value, or None."""
        if tau.is_zero():
            return "is 0"
        if tau == value:
            return "is its own value"
        if self.nail.vanishes_at(tau):
            return "is a nail root"
        if tau in self.state.values():
            return "is the value of a nail root"
        if self.graph.closes_cycle(tau, value):
            return "would close a cycle"
        return None

    def graft_cycle(self, record: CycleRecord, k: int) -> GraftedOrbit:
        """
        Nail an algebraic k-cycle next to a free certified one.

        Raises:
            PreconditionError: the cycle is not free
            PersistenceLost: the cycle cannot be re-certified
            RetryExhausted: no admissible gammas were found
        """
        if record.period != k:
            raise PreconditionError(f"Record has period {record.period}, not {k}")
        if record.classify(self.nail.roots) is not CycleStatus.FREE:
            raise PreconditionError(f"{record.describe()} is not free")
        disk = Disk.origin(self.radius)
        current = self.recertify_cycle(record, k, disk)
        last: Optional[Exception] = None
        for attempt in range(self.config.max_resamples):
            cp = self.checkpoint()
            try:
                return self.graft_once(current, k, attempt)
            except (_Rejected, PersistenceLost) as e:
                self.restore(cp)
                last = e
                logger.warning("graft resample %s: %s", attempt, e)
        if isinstance(last, PersistenceLost):
            raise last
        raise self.exhausted("graft_cycle", self.config.max_resamples, str(last))

    def recertify_cycle(self, record: CycleRecord, k: int, disk: Disk) -> CycleRecord:
        with mpmath.workprec(self.config.precision_bits):
            first = certify_zero(PeriodicEquation(self.f, k), record.points[0].center)
            current = None if first is None else certify_cycle(self.f, k, first, disk)
        if current is None or not cycle_filter(k)(current):
            raise PersistenceLost(f"{record.describe()} no longer certified")
        return current

    def graft_once(self, cycle: CycleRecord, k: int, attempt: int) -> GraftedOrbit:
        n = self.n
        P0 = self.nail.poly
        bound = self.allowance(P0)
        with mpmath.workprec(self.config.precision_bits):
            centers = [p.center for p in cycle.points]
            spread = min((abs(a - b) for i, a in enumerate(centers) for b in centers[i + 1:]),
                         default=mpmath.mpf(1))
            slope = max(abs(self.f.derivative()(c)) for c in centers) + 1
            den = min(abs(c) ** (n + 2) * abs(P0(c)) for c in centers)
            room = den * min(spread, 1) ** (2 * k) / (16 * slope * 4 ** k)
            scale = dyadic_lower(room, 32) if room > 0 else Fraction(0)
        if scale <= 0:
            raise PersistenceLost(f"{cycle.describe()} sits on a nail root")
        G = grid_bits(bound * scale) + 4 * attempt
        magnitude = max(0, max(int(mpmath.mag(c)) for c in centers))
        with mpmath.workprec(G + GUARD_BITS + magnitude):
            F = PeriodicEquation(self.f, k)
            z = newton_refine(F, centers[0])
            if z is None:
                raise PersistenceLost("Newton lost the cycle")
            betas = [z]
            for _ in range(k - 1):
                betas.append(self.f(betas[-1]))
            gammas = [GaussianRational.from_mpc(b, G) for b in betas]
        if attempt:
            gammas = [g + self.resample_unit() * dyadic(G) for g in gammas]
        if len(set(gammas)) != k:
            raise _Rejected("gammas collide")
        for j, g in enumerate(gammas):
            problem = self.point_problem(g, gammas[(j + 1) % k]) if j < k - 1 else None
            if problem is None and (g.is_zero() or self.nail.vanishes_at(g) or g in self.state.values()):
                problem = "is 0, a nail root or a nailed value"
            if problem is not None:
                raise _Rejected(f"gamma_{j} {g.canonical()} {problem}")

        for j, g in enumerate(gammas):
            nxt = gammas[(j + 1) % k]
            P = self.nail.poly
            den_q = g ** (n + 2) * P.evaluate(g)
            if den_q.is_zero():
                raise _Rejected(f"gamma_{j} is a nail root")
            closing = j == k - 1
            if self.graph.closes_cycle(g, nxt) != closing:
                raise _Rejected(f"link {j} would close a cycle early")
            eps = (SymbolicValue.exact(nxt) - self.f.eval_symbolic(g)) / SymbolicValue.exact(den_q)
            self.commit(eps, P, "graft", f"{k}-cycle link {j}")
            self.record_fact(g, nxt, "link")
            self.state.nail = self.nail.with_root(g)
            self.check_persistence(betas[0], gammas[0], k, closing)

        P = self.nail.poly
        self.commit(SymbolicValue.exact(self.pin_epsilon(P, attempt)), P, "pin", f"{k}-cycle")
        with mpmath.workprec(self.config.precision_bits):
            mult = multiplier_of(self.f, [ComplexBox.from_gaussian(g) for g in gammas])
        if k == 1:
            ok = not mult.contains_zero() and not (mult - 1).contains_zero()
        else:
            ok = mult.abs_lower() > 1
        if not ok:
            raise PersistenceLost(f"multiplier of the grafted {k}-cycle not certified")
        orbit = GraftedOrbit(k, gammas, n, mult)
        self.state.orbits.setdefault(k, []).append(orbit)
        logger.info("stage %s: grafted %s-cycle at %s", n, k, gammas[0].canonical())
        return orbit

    def check_persistence(self, beta, gamma0: GaussianRational, k: int, closed: bool) -> None:
        """A true k-cycle stays isolated next to beta; once closed it is the gammas."""
        with mpmath.workprec(self.config.precision_bits):
            iso = certify_zero(PeriodicEquation(self.f, k), beta)
            if iso is None:
                raise PersistenceLost(f"{k}-cycle near {mpmath.nstr(beta, 10)} not re-certified")
            if closed and not iso.holds(ComplexBox.from_gaussian(gamma0)):
                raise PersistenceLost("closed orbit is not the isolated cycle")

    # the whole transition -----------------------------------------------

    def run(self, l_hat: int) -> None:
        """
        Raises:
            _Replan: the budget is below the planned number of steps
        """
        self.stabilize_preimages()
        self.select_radius()
        self.register_preimages()
        alpha = self.targets[self.n]
        pending = [e for e in self.registry if e.status == "registered"]
        planned = 1 + (0 if self.nail.contains(alpha) else 2) + len(pending) + l_hat
        if planned > self.budget:
            raise _Replan(planned, self.radius)
        if self.nail_value() is not None:
            self.pin_derivative(alpha)
        for entry in pending:
            self.algebraize_preimage(entry)
        for k, missing in sorted(self.needs().items()):
            supply = list(self.census.get(k, []))
            for _ in range(missing):
                while supply and supply[0].classify(self.nail.roots) is not CycleStatus.FREE:
                    supply.pop(0)
                if not supply:
                    raise SearchExhausted(
                        f"Ran out of free {k}-cycles at stage {self.n}",
                        diagnostics={"period": k, "missing": missing},
                    )
                self.graft_cycle(supply.pop(0), k)

    def close(self, s_hat: int, l_hat: int) -> StageState:
        s = self.state
        m = self.n + 1
        s.m = m
        s.radii[m] = self.radius
        s.preimages = self.registry
        s.nail_sizes[m] = s.nail.D
        s.ledger = coefficient_ledger(s.f, self.config)
        s.budgets.append(StageBudget(self.n, s_hat, l_hat, self.budget, self.index))
        if s.expected_roots() != set(s.nail.roots):
            raise PreconditionError("Nail roots differ from X, X~ and Y")
        s.f.check_schedule()
        s.certificates.append({
            "stage": m,
            "counts": {p.label: p.count for p in s.predicates if p.stage == self.n},
        })
        return s


def run_stage(state: StageState) -> StageState:
    """
    Stage m -> m+1. The input state is never modified.

    Raises:
        PreconditionError: the state is already at max_stage
        BudgetOverflow: more micro-steps than the final budget
        SearchExhausted, RetryExhausted, NonSimpleZero, PersistenceLost:
            from the micro-steps
    """
    config = state.config
    n = state.m
    if n >= config.max_stage:
        raise PreconditionError(f"Stage {n} is already max_stage = {config.max_stage}")
    with using_policy(config.policy):
        s_hat = step_budget(n, state.f.perturbation_degree(), state.nail.degree)
        planner = StageWork(state, 1)
        l_hat = planner.graft_steps()
        budget = s_hat + l_hat
        hint = None
        for _ in range(3):
            work = StageWork(state, budget, hint)
            try:
                work.run(l_hat)
            except _Replan as e:
                logger.info("stage %s: budget %s below plan %s, replanning", n, budget, e.planned)
                budget, hint = e.planned, e.radius
                continue
            result = work.close(s_hat, l_hat)
            logger.info("stage %s -> %s: %s terms, %s nail roots", n, n + 1,
                        work.index, result.nail.D)
            return result
    raise BudgetOverflow(f"Stage {n} could not settle its step budget")
