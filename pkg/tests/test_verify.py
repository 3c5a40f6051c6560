"""
MahlerChamp - Verifier Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import json
from fractions import Fraction

from mahlerchamp.construct import GraftedOrbit, NailPolynomial
from mahlerchamp.core import ONE, ZERO, SymbolicValue
from mahlerchamp.verify import (
    EntryStatus,
    InvariantReport,
    check_stage,
    failing_keys,
    geometric_half,
    mahler_certificate,
    theta_chain,
)


def test_geometric_half():
    """Test sum r^j = theta / 2 for r = 1/(1 + 2/theta)."""
    for theta in (Fraction(1, 2), Fraction(1, 12), Fraction(3, 1000)):
        assert geometric_half(theta) == theta / 2


def test_report_entries():
    """Test entry outcomes and the summary marks."""
    report = InvariantReport(2)
    good = report.entry("a", "first")
    good.note("fine")
    skipped = report.entry("b", "second")
    skipped.not_applicable("nothing to check")
    bad = report.entry("c", "third")
    assert bad.require(True, "never recorded")
    assert not bad.require(False, "broken")
    assert not report.accepted
    assert report.failed == [bad]
    assert failing_keys(report) == ["c"]
    assert skipped.status is EntryStatus.NOT_APPLICABLE
    text = report.summary()
    assert "REJECTED" in text
    assert "[OK]" in text and "[--]" in text and "[FAIL]" in text
    assert "broken" in text
    data = json.loads(report.to_json())
    assert data["failed"] == ["c"]
    assert data["entries"][2]["failures"] == ["broken"]


def test_failure_is_not_masked_by_not_applicable():
    """Test that a failed entry stays failed."""
    report = InvariantReport(1)
    entry = report.entry("x", "x")
    entry.fail("bad")
    entry.not_applicable("later")
    assert entry.status is EntryStatus.FAILED


def test_merge():
    """Test that merged entries count toward acceptance."""
    a = InvariantReport(1)
    a.entry("a", "a")
    b = InvariantReport(1)
    b.entry("b", "b").fail("no")
    a.merge(b)
    assert a.get("b") is not None
    assert not a.accepted


def test_stage_one_is_accepted(stage_one):
    """Test every invariant on a fresh stage 1."""
    report = check_stage(stage_one)
    assert report.accepted, report.summary(verbose=True)
    assert report.get("iii").status is EntryStatus.NOT_APPLICABLE
    assert report.get("census").data["census"] == [{"k": 1, "orb": 0, "target": 0}]
    assert report.get("theta-chain") is not None


def test_mahler_certificate_stage_one(stage_one):
    """Test forward, persistence, backward and tail at stage 1."""
    report = mahler_certificate(stage_one, sample_budget=16)
    assert report.accepted, report.summary(verbose=True)
    assert report.get("forward").status is EntryStatus.NOT_APPLICABLE
    assert report.get("tail").status is EntryStatus.CERTIFIED


def test_theta_chain_stage_one(stage_one):
    """Test that stage 1 has no transition to certify."""
    report = theta_chain(stage_one)
    assert report.accepted
    assert report.get("theta-chain").status is EntryStatus.NOT_APPLICABLE


def test_bad_radius_is_reported(fresh_stage):
    """Test r_1 <= 1."""
    fresh_stage.radii[1] = Fraction(1)
    assert "ii" in failing_keys(check_stage(fresh_stage))


def test_stray_nail_root_is_reported(fresh_stage):
    """Test a nail root that no target, preimage or orbit explains."""
    fresh_stage.nail = NailPolynomial((ONE,))
    assert "ii" in failing_keys(check_stage(fresh_stage))


def test_large_epsilon0_is_reported(fresh_stage):
    """Test |a_0 - b_0| >= theta_0."""
    fresh_stage.f = fresh_stage.f.with_epsilon0(SymbolicValue.exact(1))
    assert "v" in failing_keys(check_stage(fresh_stage))


def test_early_orbit_is_reported(fresh_stage):
    """Test an orbit grafted at stage 1."""
    fresh_stage.orbits = {1: [GraftedOrbit(1, [ZERO], 1)]}
    keys = failing_keys(check_stage(fresh_stage))
    assert "census" in keys
    assert "orbits" in keys
