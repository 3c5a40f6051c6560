"""
Theta Chain - Re-derives the coefficient bound of every stage transition.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

For the transition n -> n+1 and k = n+1 the chain is

    |c_k(F_n)| <= sum |eps| |coeff|        (S0)
               <= sum |eps| L(P)           (S1)
               <= sum nu L(P)              (S2)
               <= sum_{n'<n} a_{n'}^-(n'+3)  (S3, a = n' + 2/Theta_{n'+2})
               <  theta_k / 2

where F_n is the perturbation of the stages before n. Every link is checked
in exact rational arithmetic from the recorded terms; nothing is read from
the engine's ledger.
"""

from fractions import Fraction
from typing import Dict

from ..construct.nail import nu_formula, step_scale
from ..construct.state import StageState
from ..core.symbolic import NOT_EXACT, reduce_exact
from .report import InvariantReport, ReportEntry


def _f(q: Fraction) -> str:
    return f"{float(q):.6e}"


def geometric_half(theta: Fraction) -> Fraction:
    """sum_{j>=1} r^j with r = 1/(1 + 2/theta); equals theta / 2 exactly."""
    r = 1 / (1 + 2 / Fraction(theta))
    return r / (1 - r)


def _budgets(state: StageState) -> Dict[int, int]:
    return {b.stage: b.budget for b in state.budgets}


def chain_for(state: StageState, n: int, entry: ReportEntry) -> None:
    """Links of the transition n -> n+1, appended to `entry`."""
    theta = state.config.theta
    k = n + 1
    f = state.f
    earlier = [t for t in f.terms if t.stage < n]

    s0 = sum((t.epsilon_upper() * t.poly.coefficient(k - t.exponent).abs_upper()
              for t in earlier), Fraction(0))
    s1 = sum((t.epsilon_upper() * t.poly.length_upper() for t in earlier), Fraction(0))
    s2 = sum((t.nu * t.poly.length_upper() for t in earlier), Fraction(0))
    s3 = sum((step_scale(m, theta) ** -(m + 3) for m in sorted({t.stage for t in earlier})),
             Fraction(0))
    half = theta[k] / 2

    entry.note(f"n={n}: |c_{k}(F_{n})| <= {_f(s0)} <= {_f(s1)} <= {_f(s2)} <= {_f(s3)} < {_f(half)}")
    entry.require(s0 <= s1, f"n={n}: coefficient sum exceeds sum |eps| L(P)")
    entry.require(s1 <= s2, f"n={n}: sum |eps| L(P) exceeds sum nu L(P)")
    entry.require(s2 <= s3, f"n={n}: sum nu L(P) exceeds the geometric bound")
    entry.require(s3 < half, f"n={n}: geometric bound not below theta_{k}/2")

    steering = [t for t in f.terms if t.stage == n and t.index == 0]
    if steering:
        t = steering[0]
        push = t.epsilon_upper() * t.poly.length_upper()
        entry.note(f"n={n}: |eps_{n},0| L(P_{n},0) <= {_f(push)} < {_f(half)}")
        entry.require(push < half, f"n={n}: steering term not below theta_{k}/2")

    total = reduce_exact(f.taylor_coefficient(k))
    b = f.base.taylor_coefficient(k)
    if total is NOT_EXACT:
        entry.fail(f"a_{k} does not reduce to an element of K")
        return
    gap = (total - b).norm()
    entry.note(f"n={n}: a_{k} = {total.canonical()}, |a_{k} - b_{k}|^2 = {_f(gap)}")
    entry.require(gap < theta[k] * theta[k], f"|a_{k} - b_{k}| >= theta_{k}")


def nu_links(state: StageState, entry: ReportEntry) -> None:
    """Each recorded nu must not exceed the formula value for its stage budget."""
    theta = state.config.theta
    budgets = _budgets(state)
    for t in state.f.terms:
        budget = budgets.get(t.stage)
        if budget is None:
            entry.fail(f"term ({t.stage}, {t.index}) has no recorded stage budget")
            continue
        if t.index >= budget:
            entry.fail(f"term ({t.stage}, {t.index}) exceeds the stage budget {budget}")
        expected = nu_formula(t.poly.length_upper(), budget, t.stage, theta, t.poly.degree)
        if t.nu > expected:
            entry.fail(f"term ({t.stage}, {t.index}): nu {_f(t.nu)} above formula {_f(expected)}")


def theta_chain(state: StageState) -> InvariantReport:
    """Certified transcript of every completed transition of the state."""
    report = InvariantReport(state.m)
    entry = report.entry("theta-chain", "coefficient bound chain per transition")
    half = geometric_half(state.config.theta[state.m])
    entry.note(f"sum r^j = {half} = theta_{state.m}/2")
    entry.require(half == state.config.theta[state.m] / 2, "geometric identity does not hold")
    if state.m < 2:
        entry.not_applicable("no completed transition")
        return report
    for n in range(1, state.m):
        chain_for(state, n, entry)
    nu_links(state, entry)
    entry.data["transitions"] = state.m - 1
    return report

