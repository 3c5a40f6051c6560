"""
MahlerChamp - Core Arithmetic Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import random
from fractions import Fraction

import mpmath
import pytest

from mahlerchamp.core import (
    I,
    NOT_EXACT,
    ONE,
    ZERO,
    ComplexBox,
    Disk,
    DivisionByEnclosedZero,
    ExactnessTag,
    GaussianRational,
    PrecisionExhausted,
    PrecisionPolicy,
    SymbolicValue,
    default_policy,
    enclose,
    enclose_relative,
    is_exactly,
    reduce_exact,
    using_policy,
)
from mahlerchamp.core.gaussian import dyadic_lower, dyadic_upper, fraction_from_mpf
from mahlerchamp.core.serialization import (
    DagWriter,
    DagFormatError,
    box_from_dict,
    box_to_dict,
    fraction_from_text,
    fraction_to_text,
    read_dag,
)
from mahlerchamp.entire import get_base


EXP = get_base("exp")


# ---------------------------------------------------------------------------
# GaussianRational
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("text,re,im", [
    ("3", Fraction(3), Fraction(0)),
    ("-1/2", Fraction(-1, 2), Fraction(0)),
    ("i", Fraction(0), Fraction(1)),
    ("-i", Fraction(0), Fraction(-1)),
    ("2/3i", Fraction(0), Fraction(2, 3)),
    ("1/2+1/3i", Fraction(1, 2), Fraction(1, 3)),
    ("1-i", Fraction(1), Fraction(-1)),
])
def test_parse(text, re, im):
    """Test the accepted text forms."""
    q = GaussianRational.parse(text)
    assert q == GaussianRational(re, im)
    assert GaussianRational.parse(q.canonical()) == q


@pytest.mark.parametrize("text", ["", "0.5", "1+", "abc", "i2"])
def test_parse_rejects(text):
    """Test malformed and inexact input."""
    with pytest.raises(ValueError):
        GaussianRational.parse(text)


def test_floats_are_not_rationals():
    """Test that decimal strings never become exact values."""
    with pytest.raises(ValueError):
        GaussianRational("0.1", 0)
    with pytest.raises(TypeError):
        GaussianRational(0.5, 0)


def test_arithmetic():
    """Test field operations in Q(i)."""
    a = GaussianRational.parse("1+2i")
    b = GaussianRational.parse("3-i")
    assert a + b == GaussianRational(4, 1)
    assert a - b == GaussianRational(-2, 3)
    assert a * b == GaussianRational(5, 5)
    assert (a / b) * b == a
    assert I * I == -ONE
    assert I ** 4 == ONE
    assert (2 * I) ** -1 == GaussianRational(0, Fraction(-1, 2))
    assert 1 - I == GaussianRational(1, -1)
    assert a.conjugate() == GaussianRational(1, -2)
    assert a.norm() == 5


def test_zero_division():
    """Test that dividing by zero raises."""
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_height_and_order():
    """Test height and the height-lex sort key."""
    assert GaussianRational.parse("-1/2+3i").height() == 3
    assert ZERO.height() == 1
    items = [GaussianRational.parse(t) for t in ["1/2", "-1", "i", "0"]]
    ordered = sorted(items, key=lambda q: q.sort_key())
    assert ordered == [-ONE, ZERO, I, GaussianRational(Fraction(1, 2))]


def test_abs_bounds():
    """Test rational bounds on the modulus."""
    assert GaussianRational(3, 4).abs_bounds() == (Fraction(5), Fraction(5))
    lo, hi = GaussianRational(1, 1).abs_bounds(32)
    assert lo * lo <= 2 <= hi * hi
    assert hi - lo <= Fraction(1, 2 ** 32)


def test_from_mpc_rounds_to_grid():
    """Test rounding onto the dyadic grid."""
    with mpmath.workprec(128):
        q = GaussianRational.from_mpc(mpmath.mpc(mpmath.pi, -1), 10)
    assert q.re == Fraction(3217, 1024)
    assert q.im == -1


def test_dyadic_bounds():
    """Test outward rounding to dyadic rationals."""
    with mpmath.workprec(128):
        x = mpmath.mpf(1) / 3
        exact = fraction_from_mpf(x)
        lo, hi = dyadic_lower(x, 16), dyadic_upper(x, 16)
    assert lo <= exact <= hi
    assert hi - lo <= Fraction(1, 2 ** 16)


def test_negative_values_keep_their_sign():
    """Test exact rationals of negative mpmath values."""
    assert fraction_from_mpf(mpmath.mpf(-0.5)) == Fraction(-1, 2)
    assert fraction_from_mpf(mpmath.mpf(-3) * 2 ** -70) == Fraction(-3, 2 ** 70)
    assert fraction_from_mpf(mpmath.mpf(0)) == 0
    assert dyadic_lower(mpmath.mpf(3)) == 3
    assert dyadic_upper(mpmath.mpf(-3)) == -3
    with mpmath.workprec(128):
        x = -mpmath.mpf(1) / 3
        exact = fraction_from_mpf(x)
        lo, hi = dyadic_lower(x, 16), dyadic_upper(x, 16)
    assert exact < 0
    assert lo <= exact <= hi < 0
    assert hi - lo <= Fraction(1, 2 ** 16)


def test_fraction_from_mpf_rejects_specials():
    """Test that infinities and wide intervals have no exact value."""
    with pytest.raises(ValueError):
        fraction_from_mpf(mpmath.inf)
    with pytest.raises(ValueError):
        fraction_from_mpf(mpmath.iv.mpf([1, 2]))
    assert fraction_from_mpf(mpmath.iv.mpf(-2)) == -2


# ---------------------------------------------------------------------------
# ComplexBox and Disk
# ---------------------------------------------------------------------------

def test_box_arithmetic_contains_true_value():
    """Test that box arithmetic encloses the exact result."""
    with mpmath.workprec(64):
        a = ComplexBox(mpmath.mpc(1, 1), mpmath.mpf("1e-10"))
        b = ComplexBox(mpmath.mpc(2, -1), mpmath.mpf("1e-10"))
        assert (a * b).contains(mpmath.mpc(3, 1))
        assert (a + b).contains(mpmath.mpc(3, 0))
        assert (a / b).contains(mpmath.mpc(1, 3) / 5)


def test_reciprocal_of_box_around_zero():
    """Test that a denominator enclosing zero is refused."""
    with pytest.raises(DivisionByEnclosedZero):
        ComplexBox(mpmath.mpc(0.5, 0), mpmath.mpf(1)).reciprocal()


def test_box_exp():
    """Test the exponential of a box."""
    with mpmath.workprec(128):
        box = ComplexBox.exact(1).exp()
        assert box.contains(mpmath.e)


def test_box_relations():
    """Test overlaps, inside and zero containment."""
    a = ComplexBox(mpmath.mpc(0, 0), mpmath.mpf(1))
    b = ComplexBox(mpmath.mpc(mpmath.mpf("0.5"), 0), mpmath.mpf("0.1"))
    c = ComplexBox(mpmath.mpc(3, 0), mpmath.mpf("0.1"))
    assert a.contains_zero()
    assert b.inside(a)
    assert a.overlaps(b)
    assert not a.overlaps(c)
    assert ComplexBox.hull([a, c]).contains(b)


def test_box_modulus_bounds():
    """Test lower and upper modulus bounds away from zero."""
    box = ComplexBox(5, 1)
    assert box.abs_lower_fraction() > 0
    assert Fraction(39, 10) < box.abs_lower_fraction() <= 4
    assert 6 < box.abs_upper_fraction() < Fraction(62, 10)
    assert ComplexBox(mpmath.mpc(-5, 0), 1).abs_lower_fraction() > 0
    assert ComplexBox(0, 1).abs_lower_fraction() == 0


def test_center_is_exact_outside_workprec():
    """Test that the disk view keeps the precision the box was built with."""
    with mpmath.workprec(200):
        box = ComplexBox.from_fraction(Fraction(1, 3))
    assert 0 < box.radius <= mpmath.mpf(2) ** -190
    assert abs(fraction_from_mpf(box.center.real) - Fraction(1, 3)) < Fraction(1, 2 ** 190)
    assert encloses(box, GaussianRational(Fraction(1, 3)))


def encloses(box, q):
    a, b, c, d = (fraction_from_mpf(x) for x in box.bounds())
    return a <= q.re <= b and c <= q.im <= d


def random_exact(rng, depth):
    """(exact value, box) of a random arithmetic tree over Q(i)."""
    if depth == 0 or rng.random() < 0.3:
        q = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        return q, ComplexBox.from_gaussian(q)
    qa, ba = random_exact(rng, depth - 1)
    qb, bb = random_exact(rng, depth - 1)
    op = rng.choice("+-*/")
    if op == "/" and bb.contains_zero():
        op = "*"
    if op == "+":
        return qa + qb, ba + bb
    if op == "-":
        return qa - qb, ba - bb
    if op == "*":
        return qa * qb, ba * bb
    return qa / qb, ba / bb


def test_box_arithmetic_is_sound_on_random_trees():
    """Test that box arithmetic at 64 bits encloses the exact value of 1000 random trees."""
    rng = random.Random(20261019)
    with mpmath.workprec(64):
        for _ in range(1000):
            q, box = random_exact(rng, rng.randint(1, 8))
            assert encloses(box, q), (q, box)


def random_dag(rng, depth):
    """(SymbolicValue, 600-bit reference, modulus bound) of a random tree with exp leaves."""
    if depth == 0 or rng.random() < 0.3:
        q = GaussianRational(Fraction(rng.randint(-4, 4), rng.randint(1, 4)),
                             Fraction(rng.randint(-4, 4), rng.randint(1, 4)))
        if rng.random() < 0.5:
            ref = q.to_mpc()
            return SymbolicValue.exact(q), ref, abs(ref)
        ref = mpmath.exp(q.to_mpc())
        return SymbolicValue.base_eval(EXP, q), ref, abs(ref)
    va, ra, ma = random_dag(rng, depth - 1)
    vb, rb, mb = random_dag(rng, depth - 1)
    op = rng.choice("+-*")
    if op == "+":
        return va + vb, ra + rb, ma + mb
    if op == "-":
        return va - vb, ra - rb, ma + mb
    return va * vb, ra * rb, ma * mb


def test_dag_enclosures_are_sound():
    """Test 1000 random DAGs against a 600-bit evaluation."""
    rng = random.Random(7)
    for _ in range(1000):
        with mpmath.workprec(600):
            value, reference, size = random_dag(rng, rng.randint(1, 8))
        box = value.box(64)
        a, b, c, d = box.bounds()
        with mpmath.workprec(600):
            slack = mpmath.ldexp(1 + size, -500)
            assert a - slack <= reference.real <= b + slack
            assert c - slack <= reference.imag <= d + slack


def test_disk():
    """Test disk membership and description."""
    disk = Disk(GaussianRational(1, 0), Fraction(1, 2))
    assert disk.contains_exact(GaussianRational(Fraction(5, 4), 0))
    assert not disk.contains_exact(GaussianRational(Fraction(3, 2), 0))
    assert disk.describe() == "B(1, 1/2)"
    assert Disk.origin(2).describe() == "B(0, 2)"
    with pytest.raises(ValueError):
        Disk.origin(0)


# ---------------------------------------------------------------------------
# SymbolicValue
# ---------------------------------------------------------------------------

def test_enclose_exact_element():
    """Test a tight enclosure of an exact element."""
    v = SymbolicValue.exact(GaussianRational(Fraction(1, 2), Fraction(1, 3)))
    box = enclose(v, mpmath.mpf("1e-30"))
    assert box.radius <= mpmath.mpf("1e-30")
    assert abs(box.center.real - mpmath.mpf("0.5")) < mpmath.mpf("1e-30")


def test_enclose_exp_zero_and_one():
    """Test enclosures of exp(0) and exp(1)."""
    one = enclose(SymbolicValue.base_eval(EXP, 0), mpmath.mpf("1e-20"))
    assert one.contains(1)
    e = enclose(SymbolicValue.base_eval(EXP, 1), mpmath.mpf("1e-20"))
    assert e.radius <= mpmath.mpf("1e-20")
    with mpmath.workprec(256):
        assert abs(e.center - mpmath.e) < mpmath.mpf("1e-19")


def test_enclose_exhausts_precision():
    """Test that an unreachable radius raises PrecisionExhausted."""
    v = SymbolicValue.base_eval(EXP, 1)
    with pytest.raises(PrecisionExhausted):
        enclose(v, mpmath.mpf(2) ** -400, PrecisionPolicy(32, 128))


def test_reduce_exact():
    """Test exact reduction with cancellation."""
    e1 = SymbolicValue.base_eval(EXP, 1)
    assert reduce_exact((e1 - e1) + 3) == GaussianRational(3)
    assert reduce_exact(SymbolicValue.exact(2) * SymbolicValue.exact(I)) == GaussianRational(0, 2)
    assert reduce_exact(e1) is NOT_EXACT
    assert is_exactly(SymbolicValue.base_eval(EXP, 0), ONE)


def test_exactness_tags():
    """Test the exactness tag of exact, algebraic and transcendental values."""
    e1 = SymbolicValue.base_eval(EXP, 1)
    assert SymbolicValue.exact(5).tag is ExactnessTag.EXACT_IN_K
    assert ((e1 - e1) + 1).tag is ExactnessTag.EXACT_ALGEBRAIC
    assert e1.tag is ExactnessTag.TRANSCENDENTAL


def test_enclose_relative():
    """Test relative enclosures."""
    v = SymbolicValue.base_eval(EXP, 1) * 3
    box = enclose_relative(v, 80)
    assert box.radius <= mpmath.ldexp(abs(box.center), -80)


def test_policy_levels():
    """Test the precision doubling schedule."""
    assert list(PrecisionPolicy(64, 512).levels()) == [64, 128, 256, 512]
    assert list(PrecisionPolicy(64, 200).levels()) == [64, 128, 200]
    with pytest.raises(ValueError):
        PrecisionPolicy(128, 64)


def test_using_policy_restores_default():
    """Test the policy context manager."""
    before = default_policy()
    with using_policy(PrecisionPolicy(64, 256)) as policy:
        assert default_policy() is policy
    assert default_policy() is before


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_fraction_text():
    """Test rational text forms."""
    assert fraction_to_text(Fraction(-3, 4)) == "-3/4"
    assert fraction_from_text("-3/4") == Fraction(-3, 4)


def test_box_dict_keeps_enclosure():
    """Test that a serialized box is the same interval."""
    with mpmath.workprec(128):
        box = ComplexBox(mpmath.mpc(mpmath.pi, 1), mpmath.mpf("1e-30"))
        back = box_from_dict(box_to_dict(box))
    assert back == box
    assert back.center == box.center
    assert back.radius == box.radius


def test_box_dict_negative_center():
    """Test a box with negative real and imaginary parts."""
    box = ComplexBox(mpmath.mpc(-2, -3), Fraction(1, 4))
    data = box_to_dict(box)
    assert data == {"re": ["-9/4", "-7/4"], "im": ["-13/4", "-11/4"]}
    back = box_from_dict(data)
    assert back == box
    assert back.center == mpmath.mpc(-2, -3)


def test_box_dict_rejects_bad_endpoints():
    """Test reversed endpoints and missing parts."""
    with pytest.raises(DagFormatError):
        box_from_dict({"re": ["1", "0"], "im": ["0", "0"]})
    with pytest.raises(DagFormatError):
        box_from_dict({"re": ["0", "1"]})


def test_dag_shares_nodes():
    """Test that repeated subexpressions are written once."""
    e1 = SymbolicValue.base_eval(EXP, 1)
    value = e1 * e1 + e1
    writer = DagWriter()
    root = writer.add(value)
    again = writer.add(e1)
    assert again < root
    nodes = read_dag(writer.nodes, get_base)
    rebuilt = nodes[root]
    assert reduce_exact(rebuilt - value) == ZERO
