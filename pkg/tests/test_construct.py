"""
MahlerChamp - Construction Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import dataclasses
from fractions import Fraction

import pytest

from mahlerchamp.construct import (
    AlgebraicEnumeration,
    ConfigError,
    ConstructionConfig,
    NailGraph,
    NailPolynomial,
    RouchePredicate,
    audit,
    ceiling,
    get_enumeration,
    init_stage,
    load_config,
    nu_bound,
    nu_formula,
    parse_config,
    recompute_spent,
    step_budget,
)
from mahlerchamp.construct.admissibility import charges, first_violation
from mahlerchamp.construct.config import parse_rational, parse_sigma
from mahlerchamp.construct.engine import StageWork, _Rejected, choose_epsilon0, cycle_filter, grid_bits
from mahlerchamp.core import I, ONE, ZERO, GaussianRational, SymbolicValue, reduce_exact
from mahlerchamp.entire import PerturbationTerm, Polynomial, StagedFunction, ThetaSequence, get_base
from mahlerchamp.entire.staged import term_exponent


def q(text):
    return GaussianRational.parse(text)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def test_enumeration_order():
    """Test the first targets of the height-lex order."""
    e = AlgebraicEnumeration()
    assert e.prefix(6) == [ZERO, q("-1-i"), q("-1"), q("-1+i"), q("-i"), I]
    assert e.alpha(1) == ZERO
    assert e.index_of(ONE) == 8
    assert e[e.index_of(q("1/2"))] == q("1/2")
    with pytest.raises(IndexError):
        e.alpha(0)


def test_enumeration_is_injective():
    """Test that no element repeats in a long prefix."""
    items = get_enumeration("height-lex").prefix(500)
    assert len(set(items)) == 500
    assert [x.height() for x in items] == sorted(x.height() for x in items)
    with pytest.raises(ValueError):
        get_enumeration("by-norm")


# ---------------------------------------------------------------------------
# nail polynomial and nu
# ---------------------------------------------------------------------------

def test_nu_formula():
    """Test nu = 1 / (L B (n + 2/Theta_{n+2})^(n+3+deg P))."""
    theta = ThetaSequence({2: Fraction(1, 2), 3: Fraction(1, 2)})
    assert nu_formula(Fraction(2), 3, 1, theta, 2) == Fraction(1, 93750)
    with pytest.raises(ValueError):
        nu_formula(Fraction(0), 3, 1, theta, 2)
    with pytest.raises(ValueError):
        nu_formula(Fraction(2), 0, 1, theta, 2)


def test_nu_bound_is_below_formula():
    """Test that the certified nu never exceeds the exact formula."""
    theta = ThetaSequence()
    P = Polynomial([1, 1])
    assert nu_bound(2, 0, P, theta, 5) == nu_formula(Fraction(2), 5, 2, theta, 1)
    assert nu_bound(2, 0, P, theta, 5) == nu_bound(2, 3, P, theta, 5)
    with pytest.raises(ValueError):
        nu_bound(2, 0, Polynomial(), theta, 5)


def test_step_budget():
    """Test s-hat = 1 + n max(deg H, n + 1 + deg P)."""
    assert step_budget(2, 3, 4) == 15
    assert step_budget(1, 0, 0) == 3
    assert step_budget(3, 20, 2) == 61


def test_nail_polynomial():
    """Test nailing order, squares and distinctness."""
    nail = NailPolynomial().with_roots([ONE, I, ONE])
    assert nail.roots == (ONE, I)
    assert nail.D == 2
    assert nail.degree == 4
    assert nail.poly == Polynomial.squared_from_roots([ONE, I])
    assert nail.vanishes_at(I)
    assert not nail.vanishes_at(ZERO)
    assert NailPolynomial.from_dict(nail.to_dict()) == nail
    with pytest.raises(ValueError):
        NailPolynomial((ONE, ONE))


def test_nail_graph_cycles():
    """Test cycle extraction and conflicting edges."""
    graph = NailGraph()
    graph.add(ZERO, -ONE)
    assert graph.closes_cycle(-ONE, ZERO)
    assert not graph.closes_cycle(-ONE, I)
    graph.add(-ONE, ZERO)
    graph.add(I, ZERO)
    assert graph.cycles() == [[-ONE, ZERO]]
    with pytest.raises(ValueError):
        graph.add(ZERO, ONE)
    graph.add(ZERO, -ONE)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

SOURCE = """
# two fixed points then one 2-cycle
base = exp
sigma = 1:2, 2:1
max_stage = 3
seed = 7
theta.2 = 1/10
radius_step = 1/4
"""


def test_parse_config():
    """Test the key = value format."""
    config = parse_config(SOURCE)
    assert config.base == "exp"
    assert config.sigma == {1: 2, 2: 1}
    assert config.seed == 7
    assert config.theta[2] == Fraction(1, 10)
    assert config.radius_step == Fraction(1, 4)
    assert config.orbit_target(1, 3) == 2
    assert config.orbit_target(2, 3) == 1
    assert config.orbit_target(3, 3) == 0
    assert ConstructionConfig.from_dict(config.to_dict()) == config


def test_config_errors_name_the_line():
    """Test rejected values with their line numbers."""
    with pytest.raises(ConfigError) as info:
        parse_config("base = exp\ntheta.3 = 1\n")
    assert info.value.line == 2
    assert "theta.3" in str(info.value)
    with pytest.raises(ConfigError) as info:
        parse_config("base = gamma\n")
    assert "unknown base" in str(info.value)
    with pytest.raises(ConfigError):
        parse_config("radius_step = 0.5\n")
    with pytest.raises(ConfigError):
        parse_config("colour = blue\n")


def test_parse_sigma_and_rationals():
    """Test the sigma and rational value formats."""
    assert parse_sigma("1:2, 2:1, 3:inf") == {1: 2, 2: 1, 3: None}
    assert parse_sigma("") == {}
    with pytest.raises(ValueError):
        parse_sigma("1:2, 1:3")
    with pytest.raises(ValueError):
        parse_sigma("2")
    assert parse_rational(" -3/8 ") == Fraction(-3, 8)
    with pytest.raises(ValueError):
        parse_rational("1e-3")


def test_config_validation():
    """Test that every problem is listed."""
    config = ConstructionConfig(max_stage=0, precision_bits=8, radius_cap=Fraction(1))
    problems = config.validate()
    assert len(problems) == 3
    with pytest.raises(ConfigError):
        config.check()
    assert ConstructionConfig().check().max_stage == 3


def test_load_config(tmp_path):
    """Test reading a config file."""
    path = tmp_path / "run.cfg"
    path.write_text(SOURCE, encoding="utf-8")
    assert load_config(path).sigma == {1: 2, 2: 1}
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")


# ---------------------------------------------------------------------------
# engine helpers
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("bound,expected", [
    (Fraction(1), 0),
    (Fraction(3, 4), 1),
    (Fraction(1, 3), 2),
    (Fraction(1, 4), 2),
    (Fraction(1, 7), 3),
    (Fraction(5), 0),
])
def test_grid_bits(bound, expected):
    """Test the smallest G with 2^-G <= bound."""
    assert grid_bits(bound) == expected


def test_choose_epsilon0():
    """Test the first admissible constant shift."""
    assert choose_epsilon0(get_base("exp"), Fraction(1, 2), []) == GaussianRational(Fraction(1, 8))
    assert choose_epsilon0(get_base("exp_minus_1"), Fraction(1, 10), []) == GaussianRational(
        Fraction(1, 16))
    # the omitted value 0 + 1/8 may not be a target
    eps = choose_epsilon0(get_base("exp"), Fraction(1, 2), [GaussianRational(Fraction(1, 8))])
    assert eps == GaussianRational(0, Fraction(1, 8))


def test_cycle_filter():
    """Test multiplier conditions per period."""
    from mahlerchamp.core import ComplexBox
    from mahlerchamp.cycles import CycleRecord

    record = CycleRecord(1, [ComplexBox.exact(0)], multiplier=ComplexBox.exact(2), repelling=True)
    assert cycle_filter(1)(record)
    record.multiplier = ComplexBox.exact(1)
    assert not cycle_filter(1)(record)
    assert cycle_filter(2)(CycleRecord(2, [ComplexBox.exact(0)] * 2, repelling=True))


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def predicate(margin=Fraction(1)):
    return RouchePredicate(
        center=ZERO, radius=Fraction(2), target=ZERO, margin=margin,
        spent=Fraction(0), count=0, label="B[0]", stage=1,
    )


def test_predicate_room():
    """Test reach, room and charging."""
    p = predicate()
    assert p.reach == 2
    assert p.room == Fraction(1, 2)
    assert p.admits(Fraction(1, 4))
    assert not p.admits(Fraction(1, 2))
    assert p.charged(Fraction(1, 4)).spent == Fraction(1, 4)
    assert p.spent == 0
    assert RouchePredicate.from_dict(p.to_dict()) == p


def test_ceiling_and_charges():
    """Test the largest admissible eps for z P."""
    p = predicate()
    full = Polynomial([0, 1])
    assert ceiling([p], full) == Fraction(1, 4)
    assert ceiling([], full) == 1
    amounts = charges([p], full, Fraction(1, 8))
    assert amounts == [Fraction(1, 4)]
    assert first_violation([p], amounts) is None
    assert first_violation([p], [Fraction(1, 2)]) is p


def test_audit_recomputes_spend():
    """Test the spend recomputed from the terms."""
    p = predicate()
    term = PerturbationTerm(1, 0, SymbolicValue.exact(Fraction(1, 100)), Polynomial([1]), Fraction(1))
    f = StagedFunction(get_base("exp")).with_term(term)
    assert recompute_spent(p, f) == Fraction(1, 25)
    [(row, spent, ok)] = audit([p], f)
    assert row is p and spent == Fraction(1, 25) and ok


def test_pin_epsilon_stays_inside_every_predicate(stage_one):
    """Test that pin values shrink with the attempt and never break a predicate."""
    work = StageWork(stage_one, 8)
    poly = Polynomial([1])
    bound = work.allowance(poly)
    full = poly.shift(term_exponent(work.n, work.index))
    assert bound > 0
    for attempt in range(4):
        eps = work.pin_epsilon(poly, attempt)
        assert not eps.is_zero()
        assert eps.abs_upper() <= bound / 2 ** (attempt + 1)
        amounts = charges(work.state.predicates, full, eps.abs_upper())
        assert first_violation(work.state.predicates, amounts) is None


def test_pin_epsilon_without_room(stage_one):
    """Test that a spent predicate leaves no pin value."""
    work = StageWork(stage_one, 8)
    work.state.predicates = [dataclasses.replace(p, spent=p.margin / 2) for p in work.state.predicates]
    with pytest.raises(_Rejected):
        work.pin_epsilon(Polynomial([1]), 0)


# ---------------------------------------------------------------------------
# stage 1
# ---------------------------------------------------------------------------

def test_init_stage_for_exp():
    """Test f_1 = exp + 1/8 and r_1 = 3/2."""
    state = init_stage(ConstructionConfig(sigma={1: 2}))
    assert state.m == 1
    assert state.r == Fraction(3, 2)
    assert reduce_exact(state.f.epsilon0) == GaussianRational(Fraction(1, 8))
    assert state.f.terms == ()
    assert state.nail.D == 0
    assert len(state.predicates) == 1
    assert state.predicates[0].count == 0
    assert state.ledger[0].k == 0
    assert state.summary()["radius"] == "3/2"


def test_init_stage_rejects_bad_config():
    """Test that an invalid config is refused."""
    with pytest.raises(ConfigError):
        init_stage(ConstructionConfig(base="gamma"))
