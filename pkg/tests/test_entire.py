"""
MahlerChamp - Entire Function Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from fractions import Fraction

import mpmath
import pytest

from mahlerchamp.core import ONE, ZERO, ComplexBox, GaussianRational, SymbolicValue, reduce_exact
from mahlerchamp.entire import (
    BaseRegistry,
    BaseRegistryError,
    InvalidSchedule,
    PerturbationTerm,
    Polynomial,
    StagedFunction,
    ThetaSequence,
    get_base,
    poly_length,
    tail_certificate,
)
from mahlerchamp.entire.staged import term_exponent


EXP = get_base("exp")


def q(text):
    return GaussianRational.parse(text)


def term(stage, index, eps, coeffs, nu=Fraction(1)):
    return PerturbationTerm(stage, index, SymbolicValue.exact(eps), Polynomial(coeffs), nu)


# ---------------------------------------------------------------------------
# registry and base functions
# ---------------------------------------------------------------------------

def test_supplied_bases():
    """Test the bases registered by default."""
    registry = BaseRegistry()
    for name in ("exp", "exp_minus_1", "exp_plus_z", "sin", "cos"):
        assert registry.has(name)
        assert registry.get(name).is_transcendental
    assert registry.get("exp") is registry.get("exp")


def test_parametrised_bases():
    """Test exp_affine[...] and poly[...] ids."""
    g = get_base("exp_affine[1/2,i]")
    assert g.taylor_coefficient(0) == q("3/2")
    assert g.taylor_coefficient(1) == q("1+i")
    p = get_base("poly[-1,0,1]")
    assert not p.is_transcendental
    assert p.exact_value(q("2")) == q("3")


def test_unknown_base():
    """Test the error for an unknown id."""
    with pytest.raises(BaseRegistryError):
        get_base("gamma")
    with pytest.raises(BaseRegistryError):
        BaseRegistry().register("1bad", lambda: EXP)


def test_exp_coefficients_and_omitted_value():
    """Test Taylor coefficients and omitted values of the exponential family."""
    assert EXP.taylor_coefficient(3) == GaussianRational(Fraction(1, 6))
    assert EXP.omitted_value == ZERO
    shifted = get_base("exp_minus_1")
    assert shifted.taylor_coefficient(0) == ZERO
    assert shifted.omitted_value == -ONE
    assert get_base("exp_plus_z").omitted_value is None


def test_trig_coefficients():
    """Test sine and cosine coefficients."""
    sin = get_base("sin")
    assert sin.taylor_coefficient(0) == ZERO
    assert sin.taylor_coefficient(3) == GaussianRational(Fraction(-1, 6))
    assert get_base("cos").taylor_coefficient(2) == GaussianRational(Fraction(-1, 2))


def test_base_tail_bound_decreases():
    """Test that tail bounds shrink to zero with the order."""
    for radius in (Fraction(1), Fraction(2), Fraction(5)):
        bounds = [EXP.tail_bound(radius, n) for n in (5, 10, 20, 40)]
        assert bounds == sorted(bounds, reverse=True)
        assert bounds[-1] < Fraction(1, 10 ** 9)
    # the bound really bounds the tail of e^1
    bound = EXP.tail_bound(Fraction(1), 10)
    with mpmath.workprec(128):
        actual = mpmath.e - mpmath.fsum(1 / mpmath.factorial(n) for n in range(11))
        assert actual <= mpmath.mpf(bound.numerator) / bound.denominator


@pytest.mark.parametrize("name", ["exp", "sin", "cos", "exp_plus_z"])
def test_tail_bound_never_grows(name):
    """Test that the tail bound is non-increasing in the order at every radius."""
    base = get_base(name)
    for radius in (Fraction(0), Fraction(1, 3), Fraction(1), Fraction(5, 2), Fraction(7)):
        bounds = [base.tail_bound(radius, n) for n in range(0, 30)]
        assert all(a >= b for a, b in zip(bounds, bounds[1:])), (name, radius)


def test_sin_tail_bounds_the_tail():
    """Test the tail bound of sin against the remainder of its series at z = 3."""
    sin = get_base("sin")
    with mpmath.workprec(128):
        for order in (3, 4, 9, 10):
            partial = mpmath.fsum(mpmath.mpf(-1) ** k * mpmath.mpf(3) ** (2 * k + 1)
                                  / mpmath.factorial(2 * k + 1)
                                  for k in range(order // 2 + 1) if 2 * k + 1 <= order)
            bound = sin.tail_bound(Fraction(3), order)
            assert abs(mpmath.sin(3) - partial) <= mpmath.mpf(bound.numerator) / bound.denominator


def test_base_enclosure():
    """Test the box evaluation of exp."""
    with mpmath.workprec(128):
        box = EXP.eval_box(ComplexBox(mpmath.mpc(0, mpmath.pi), mpmath.mpf("1e-30")))
        assert box.contains(-1)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def test_poly_length():
    """Test L(P)."""
    assert poly_length(Polynomial([1, -4, 3])).hi == 8
    assert poly_length(Polynomial.monomial(7)).hi == 1
    expanded = Polynomial.squared_from_roots([ONE, q("i")])
    # (z - 1)^2 (z - i)^2 has length 6 + 4 sqrt(2)
    length = poly_length(expanded)
    assert (length.lo - 6) ** 2 <= 32 <= (length.hi - 6) ** 2
    assert length.hi - length.lo < Fraction(1, 1000)


def test_poly_arithmetic():
    """Test exact polynomial operations."""
    p = Polynomial.from_roots([ONE, -ONE])
    assert p == Polynomial([-1, 0, 1])
    assert p.evaluate(q("i")) == q("-2")
    assert p.derivative() == Polynomial([0, 2])
    assert Polynomial([-1, 1]).divides(p)
    assert not Polynomial([-2, 1]).divides(p)
    quotient, remainder = Polynomial([1, 0, 0, 1]).divmod(Polynomial([1, 1]))
    assert remainder.is_zero()
    assert quotient == Polynomial([1, -1, 1])
    assert p.shift(2) == Polynomial([0, 0, -1, 0, 1])
    assert Polynomial([0, 0]).degree == -1


def test_squared_roots_vanish_to_second_order():
    """Test that nail-style squares vanish with their derivative."""
    roots = [q("1/2"), q("-i"), q("1+i")]
    P = Polynomial.squared_from_roots(roots)
    assert P.degree == 6
    for r in roots:
        assert P.evaluate(r).is_zero()
        assert P.derivative().evaluate(r).is_zero()


def test_sup_bound():
    """Test the sup bound on a disk."""
    P = Polynomial([1, -4, 3])
    assert P.sup_bound(Fraction(2)) == 1 + 8 + 12
    with mpmath.workprec(64):
        assert abs(P(mpmath.mpc(-2, 0))) <= 21


def test_text_roundtrip():
    """Test the text form of a polynomial."""
    P = Polynomial([q("1/2"), q("-i"), q("3+2i")])
    assert Polynomial.from_text(P.to_text()) == P


# ---------------------------------------------------------------------------
# staged functions
# ---------------------------------------------------------------------------

def test_term_exponent():
    """Test the z^(n+1) / z^(n+2) layout."""
    assert term_exponent(3, 0) == 4
    assert term_exponent(3, 1) == 5
    assert term_exponent(3, 7) == 5
    with pytest.raises(ValueError):
        PerturbationTerm(1, 0, SymbolicValue.exact(1), Polynomial([1]), Fraction(1), exponent=5)
    with pytest.raises(ValueError):
        PerturbationTerm(1, 0, SymbolicValue.exact(1), Polynomial(), Fraction(1))


def test_eval_without_terms():
    """Test f = exp at 0."""
    f = StagedFunction(EXP)
    assert reduce_exact(f.eval_symbolic(ZERO)) == ONE


def test_eval_with_term():
    """Test f = exp + 1/4 z^2 at z = 2."""
    f = StagedFunction(EXP).with_term(term(1, 0, Fraction(1, 4), [1]))
    value = f.eval_symbolic(q("2"))
    rest = value - SymbolicValue.base_eval(EXP, 2)
    assert reduce_exact(rest) == ONE


def test_box_path_matches_sampling():
    """Test that the box enclosure covers dense samples of exp on the unit disk."""
    f = StagedFunction(EXP)
    with mpmath.workprec(64):
        box = f.eval_box(ComplexBox(mpmath.mpc(0), mpmath.mpf(1)))
        for j in range(16):
            z = mpmath.mpf("0.99") * mpmath.expjpi(mpmath.mpf(j) / 8)
            assert box.contains(mpmath.exp(z))


def test_taylor_coefficients():
    """Test a_k = b_k + eps coeff."""
    f = StagedFunction(EXP)
    assert reduce_exact(f.taylor_coefficient(3)) == GaussianRational(Fraction(1, 6))
    g = f.with_term(term(1, 0, Fraction(1, 4), [3, 1]))
    assert reduce_exact(g.taylor_coefficient(2)) == GaussianRational(Fraction(5, 4))
    assert reduce_exact(g.coefficient_shift(3)) == GaussianRational(Fraction(1, 4))
    assert g.touched_indices() == [0, 2, 3]
    with pytest.raises(ValueError):
        g.coefficient_shift(-1)


def test_epsilon0_moves_constant_term():
    """Test that eps_0 shifts only a_0."""
    f = StagedFunction(EXP, SymbolicValue.exact(Fraction(1, 8)))
    assert reduce_exact(f.taylor_coefficient(0)) == GaussianRational(Fraction(9, 8))
    assert reduce_exact(f.taylor_coefficient(1)) == ONE


def test_derivative():
    """Test f' for exp plus eps z^3."""
    f = StagedFunction(EXP).with_term(term(2, 0, Fraction(1, 4), [1]))
    d = f.derivative()
    value = d.eval_symbolic(ONE) - SymbolicValue.base_eval(EXP, 1)
    assert reduce_exact(value) == GaussianRational(Fraction(3, 4))
    with mpmath.workprec(64):
        assert d.eval_box(ComplexBox.exact(0)).contains(1)


def test_derivative_matches_central_differences():
    """Test f' against (f(z + h) - f(z - h)) / 2h for exp plus two terms."""
    f = (StagedFunction(EXP, SymbolicValue.exact(Fraction(1, 8)))
         .with_term(term(1, 0, Fraction(1, 16), [1, q("i")]))
         .with_term(term(2, 0, q("-1/32+1/64i"), [2, 0, 1])))
    d = f.derivative()
    with mpmath.workprec(256):
        h = mpmath.mpf(10) ** -25
        for z in (mpmath.mpc(0), mpmath.mpc("0.5", "-0.25"), mpmath.mpc(-1, 2), mpmath.mpc("1.5", 1)):
            numeric = (f(z + h) - f(z - h)) / (2 * h)
            assert abs(d(z) - numeric) < mpmath.mpf(10) ** -20


def test_coefficients_sum_to_the_function():
    """Test sum_{k <= 30} a_k z^k against f(z) within the base tail bound."""
    f = (StagedFunction(EXP, SymbolicValue.exact(Fraction(1, 8)))
         .with_term(term(1, 0, Fraction(1, 16), [1, q("i")]))
         .with_term(term(2, 0, q("-1/32+1/64i"), [2, 0, 1])))
    coefficients = [reduce_exact(f.taylor_coefficient(k)) for k in range(31)]
    tail = EXP.tail_bound(Fraction(1, 2), 30)
    with mpmath.workprec(256):
        for z in (q("1/2"), q("-1/4+1/4i"), q("1/3i"), ZERO):
            partial = sum((c.to_mpc() * z.to_mpc() ** k for k, c in enumerate(coefficients)), mpmath.mpc(0))
            assert abs(f(z.to_mpc()) - partial) <= mpmath.mpf(tail.numerator) / tail.denominator


def test_check_schedule():
    """Test the nu bound on every term."""
    ok = StagedFunction(EXP).with_term(term(1, 0, Fraction(1, 100), [1], nu=Fraction(1, 10)))
    ok.check_schedule()
    bad = ok.with_term(term(1, 1, Fraction(1, 2), [1], nu=Fraction(1, 10)))
    with pytest.raises(InvalidSchedule):
        bad.check_schedule()
    bad.check_schedule(through_stage=0)


def test_tail_certificate_decreases():
    """Test that the tail shrinks stage by stage at fixed radius."""
    f = StagedFunction(EXP)
    tails = [tail_certificate(f, 1, n) for n in range(1, 6)]
    assert all(a > b for a, b in zip(tails, tails[1:]))
    assert tails[0] < Fraction(1, 10 ** 6)
    coarse = [tail_certificate(f, 1, n, coarse=True) for n in range(1, 6)]
    assert all(a > b for a, b in zip(coarse, coarse[1:]))


def test_tail_certificate_at_radius_zero():
    """Test that R = 0 still gives a positive bound below the R = 1 bound."""
    f = StagedFunction(EXP)
    assert 0 < tail_certificate(f, 0, 2) <= tail_certificate(f, 1, 2)


def test_tail_certificate_rejects_bad_schedule():
    """Test that a term over its nu is reported."""
    f = StagedFunction(EXP).with_term(term(1, 0, Fraction(1, 2), [1], nu=Fraction(1, 10)))
    with pytest.raises(InvalidSchedule):
        tail_certificate(f, 1, 1)
    with pytest.raises(ValueError):
        tail_certificate(StagedFunction(EXP), -1, 1)


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------

def test_theta_default_and_prefix_minimum():
    """Test theta_k = 1/(2 k!) and Theta_k."""
    theta = ThetaSequence()
    assert theta[0] == Fraction(1, 2)
    assert theta[3] == Fraction(1, 12)
    assert theta.big_theta(3) == Fraction(1, 12)
    over = ThetaSequence({1: Fraction(1, 100)})
    assert over.big_theta(3) == Fraction(1, 100)
    with pytest.raises(ValueError):
        theta.big_theta(0)


def test_theta_violations():
    """Test that theta_k must lie in (0, 1/k!)."""
    assert ThetaSequence().violations(6) == []
    problems = ThetaSequence({3: Fraction(1)}).violations(4)
    assert len(problems) == 1
    assert "theta.3" in problems[0]
    assert ThetaSequence.from_dict(ThetaSequence({2: Fraction(1, 5)}).to_dict()) == ThetaSequence(
        {2: Fraction(1, 5)})
