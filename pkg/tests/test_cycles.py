"""
MahlerChamp - Cycle Search Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import random
from fractions import Fraction

import mpmath
import pytest

from mahlerchamp.core import ONE, ZERO, ComplexBox, Disk, GaussianRational, SearchExhausted
from mahlerchamp.cycles import (
    CycleCensus,
    CycleRecord,
    CycleStatus,
    PeriodPreconditionError,
    avoids_zero_and_one,
    find_cycles,
    fixed_point_census,
    fixed_point_regime,
    multiplier,
    phi_check,
)
from mahlerchamp.cycles.lemmas import EpsilonPerturbed
from mahlerchamp.entire import Polynomial, get_base
from mahlerchamp.entire.base_functions import PolynomialBase
from mahlerchamp.entire.evaluable import MinusIdentity
from mahlerchamp.rootcount import count_zeros


EXP = get_base("exp")


def exact_record(points):
    qs = [GaussianRational.parse(p) for p in points]
    boxes = [ComplexBox.from_gaussian(q) for q in qs]
    return CycleRecord(period=len(qs), points=boxes, exact_points=qs)


def test_two_cycle_of_quadratic():
    """Test the superattracting 2-cycle {0, -1} of z^2 - 1."""
    f = Polynomial([-1, 0, 1])
    cycles = find_cycles(f, 2, Disk.origin(2))
    assert len(cycles) == 1
    cycle = cycles[0]
    assert cycle.points[0].contains(0)
    assert cycle.points[1].contains(-1)
    assert cycle.multiplier.contains(0)
    assert not cycle.repelling


def test_no_fixed_points_of_exp_in_unit_disk():
    """Test that exp has no fixed point in B(0, 1)."""
    assert find_cycles(EXP, 1, Disk.origin(1)) == []


def test_fixed_point_of_affine_map():
    """Test z/2 + 1, fixed at 2 with multiplier 1/2."""
    f = Polynomial([1, Fraction(1, 2)])
    cycles = find_cycles(f, 1, Disk.origin(3))
    assert len(cycles) == 1
    assert cycles[0].points[0].contains(2)
    assert cycles[0].multiplier.contains(mpmath.mpf("0.5"))
    assert avoids_zero_and_one(cycles[0])


def test_search_exhausted_carries_diagnostics():
    """Test asking for more cycles than exist."""
    f = Polynomial([1, Fraction(1, 2)])
    with pytest.raises(SearchExhausted) as info:
        find_cycles(f, 1, Disk.origin(3), want=2)
    assert info.value.diagnostics["found"] == 1
    assert info.value.diagnostics["want"] == 2


def test_fixed_point_on_boundary():
    """Test the k = 1 precondition on the disk boundary."""
    f = Polynomial([1, Fraction(1, 2)])
    with pytest.raises(PeriodPreconditionError):
        find_cycles(f, 1, Disk.origin(2))
    with pytest.raises(ValueError):
        find_cycles(f, 0, Disk.origin(3))


def test_fixed_point_census():
    """Test that every counted fixed point is located."""
    census = fixed_point_census(Polynomial([1, Fraction(1, 2)]), Disk.origin(3))
    assert census.count == 1
    assert len(census.admissible) == 1
    assert census.rejected == []


def test_multiplier_of_exact_cycle():
    """Test the chain rule on an exact orbit."""
    f = Polynomial([-1, 0, 1])
    record = exact_record(["0", "-1"])
    value = multiplier(f, record)
    assert value.contains(0)
    assert record.multiplier is value
    assert not avoids_zero_and_one(record)


def test_phi_at_period_one():
    """Test phi_1 = P(z) with no residual."""
    P = Polynomial([0, 0, 1])
    result = phi_check(EXP, P, Fraction(1, 100), 1, GaussianRational(2))
    assert result.residual == 0
    assert result.exact_phi == GaussianRational(4)
    assert result.phi.contains(4)


def test_phi_exact_for_polynomial_base():
    """Test phi_2 for g = z^2, P = 1, eps = 1/10 at z = 1: (1.31 - 1) / (1/10)."""
    g = get_base("poly[0,0,1]")
    result = phi_check(g, Polynomial([1]), Fraction(1, 10), 2, ONE)
    assert result.exact
    assert result.exact_phi == GaussianRational(Fraction(31, 10))
    assert result.residual == 0


def test_phi_transcendental_base():
    """Test that f^2 - g^2 - eps phi_2 is tiny for g = exp."""
    result = phi_check(EXP, Polynomial([0, 1]), Fraction(1, 100), 2, GaussianRational(Fraction(1, 2)))
    assert not result.exact
    assert result.residual < Fraction(1, 10 ** 6)


def test_phi_rejects_bad_input():
    """Test k and eps checks."""
    with pytest.raises(ValueError):
        phi_check(EXP, Polynomial([1]), Fraction(1, 10), 0, ZERO)
    with pytest.raises(ValueError):
        phi_check(EXP, Polynomial([1]), 0, 1, ZERO)


def test_phi_exact_at_another_point():
    """Test phi_2 for g = z^2, P = 1, eps = 1/10 at z = 2: (16.91 - 16) / (1/10)."""
    g = get_base("poly[0,0,1]")
    result = phi_check(g, Polynomial([1]), Fraction(1, 10), 2, GaussianRational(2))
    assert result.exact_phi == GaussianRational(Fraction(91, 10))


def test_phi_of_identity_counts_steps():
    """Test phi_k = k for g(z) = z and P = 1, since f^k(z) = z + k eps."""
    g = get_base("poly[0,1]")
    for k in range(1, 6):
        result = phi_check(g, Polynomial([1]), Fraction(1, 7), k, GaussianRational(Fraction(1, 3), 2))
        assert result.exact_phi == GaussianRational(k)
        assert result.residual == 0


def test_phi_matches_exact_iterates():
    """Test eps phi_k = f^k - g^k in Q(i) for affine and quadratic bases."""
    eps = GaussianRational(Fraction(1, 5), Fraction(-1, 3))
    P = Polynomial([1, GaussianRational(0, 1), Fraction(1, 2)])
    z = GaussianRational(Fraction(1, 2), Fraction(1, 4))
    for coeffs in ([Fraction(1, 3), 2], [GaussianRational(0, Fraction(1, 2)), 0, 1]):
        g = PolynomialBase(coeffs)
        f = Polynomial(coeffs) + eps * P
        fk, gk = z, z
        for k in range(1, 4):
            fk, gk = f.evaluate(fk), g.poly.evaluate(gk)
            result = phi_check(g, P, eps, k, z)
            assert result.residual == 0
            assert eps * result.exact_phi == fk - gk


def sample_points(count, seed):
    rng = random.Random(seed)
    points = []
    while len(points) < count:
        q = GaussianRational(Fraction(rng.randint(-15, 15), 16), Fraction(rng.randint(-15, 15), 16))
        if q.norm() < 1:
            points.append(q)
    return points


def test_phi_residual_for_exp():
    """Test |f^k - g^k - eps phi_k| <= 1e-9 for g = exp, P = 1, eps = 1e-3 on B(0, 1)."""
    eps = Fraction(1, 1000)
    for i, z in enumerate(sample_points(20, 3)):
        k = 1 + i % 3
        result = phi_check(EXP, Polynomial([1]), eps, k, z)
        assert result.residual <= Fraction(1, 10 ** 9), (k, z, result.residual)


def test_phi_linear_part_halves_with_eps():
    """Test that halving eps scales eps phi_k by a factor in [0.49, 0.51]."""
    for z in sample_points(4, 11):
        for k in (2, 3):
            full = phi_check(EXP, Polynomial([1]), Fraction(1, 1000), k, z)
            half = phi_check(EXP, Polynomial([1]), Fraction(1, 2000), k, z)
            with mpmath.workprec(128):
                ratio = half.eps_phi / full.eps_phi
            a, b, c, d = ratio.bounds()
            assert mpmath.mpf("0.49") <= a and b <= mpmath.mpf("0.51")
            assert abs(c) <= mpmath.mpf("0.01") and abs(d) <= mpmath.mpf("0.01")


# ---------------------------------------------------------------------------
# fixed points of e^z + z + eps
# ---------------------------------------------------------------------------

EXP_PLUS_Z = get_base("exp_plus_z")


def test_exp_plus_z_has_no_fixed_points():
    """Test that e^z + z - z = e^z has no zeros on disks up to radius 20."""
    for radius in (1, 5, 10, 20):
        assert count_zeros(EXP, Disk.origin(radius)).count == 0
        assert count_zeros(MinusIdentity(EXP_PLUS_Z), Disk.origin(radius)).count == 0


def test_half_shift_has_four_fixed_points():
    """Test e^z + z + 1/2: four fixed points in B(0, 10), each with multiplier 1/2."""
    f = EpsilonPerturbed(EXP_PLUS_Z, Polynomial([1]), Fraction(1, 2))
    census = fixed_point_census(f, Disk.origin(10))
    assert census.count == 4
    assert len(census.admissible) == 4
    assert census.rejected == []
    for record in census.admissible:
        assert record.multiplier.contains(Fraction(1, 2))
        assert record.multiplier.radius <= mpmath.mpf("1e-10")
        assert record.points[0].radius <= mpmath.mpf("1e-10")
        assert abs(record.points[0].center.real + mpmath.log(2)) < mpmath.mpf("1e-9")


def test_unit_shift_is_rejected():
    """Test e^z + z + 1: the fixed points i pi (2j + 1) have multiplier 0."""
    f = EpsilonPerturbed(EXP_PLUS_Z, Polynomial([1]), 1)
    census = fixed_point_census(f, Disk.origin(10))
    assert census.count == 4
    assert census.admissible == []
    assert len(census.rejected) == 4
    assert all(r.multiplier.contains_zero() for r in census.rejected)


def test_classify():
    """Test nailed, mixed and free orbits."""
    record = exact_record(["0", "-1"])
    assert record.classify([ZERO, -ONE]) is CycleStatus.NAILED
    assert record.classify([ZERO]) is CycleStatus.MIXED
    assert record.classify([GaussianRational(5)]) is CycleStatus.FREE


def test_record_validation():
    """Test that the point count must match the period."""
    with pytest.raises(ValueError):
        CycleRecord(period=2, points=[ComplexBox.exact(0)])
    with pytest.raises(ValueError):
        CycleRecord(period=0, points=[])


def test_census_rows():
    """Test per-period counts."""
    census = CycleCensus()
    fixed = exact_record(["2"])
    fixed.classify([GaussianRational(2)])
    census.add(fixed)
    census.add(exact_record(["0", "-1"]))
    assert census.periods() == [1, 2]
    assert census.orb_count(2) == 1
    assert census.per_count(2) == 2
    assert census.consistent()
    rows = census.rows()
    assert rows[0] == {"k": 1, "per": 1, "orb": 1, "nailed": 1, "free": 0, "mixed": 0}
    assert rows[1]["free"] == 1


def test_fixed_point_regime_for_exp():
    """Test an eps-ball where e^z + eps keeps a certified fixed point."""
    result = fixed_point_regime(EXP, Polynomial([1]), 1, 1, Fraction(1, 4))
    assert 0 < result.delta1 < result.delta2 < Fraction(1, 4)
    assert len(result.fixed_points) == 1
    assert avoids_zero_and_one(result.fixed_points[0])
    assert result.cycles == {}
    assert result.to_dict()["radius"] == str(result.radius)


def test_fixed_point_regime_exhausted():
    """Test the per-attempt diagnostics when the disk is too small."""
    with pytest.raises(SearchExhausted) as info:
        fixed_point_regime(EXP, Polynomial([1]), 1, 1, Fraction(1, 4), radii=(Fraction(1, 2),))
    assert len(info.value.diagnostics["attempts"]) == 10
    with pytest.raises(ValueError):
        fixed_point_regime(EXP, Polynomial(), 1, 1, Fraction(1, 4))
