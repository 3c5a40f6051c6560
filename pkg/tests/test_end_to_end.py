"""
MahlerChamp - End-to-End Construction Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

Full stage transitions on exp. These take a while; run them with
`pytest -m slow` or deselect them with `-m "not slow"`.
"""

import dataclasses
import json

import mpmath
import pytest

from mahlerchamp.cli import EXIT_OK, EXIT_VERIFY, census_rows, main
from mahlerchamp.construct import ConstructionConfig, GraftedOrbit, NailPolynomial, init_stage, run_stage
from mahlerchamp.core import ComplexBox, Disk, SymbolicValue, reduce_exact
from mahlerchamp.cycles.finder import multiplier_of
from mahlerchamp.entire import StagedFunction
from mahlerchamp.persistence import save_stage, stage_text, state_from_dict
from mahlerchamp.verify import EntryStatus, check_stage, failing_keys, mahler_certificate

pytestmark = pytest.mark.slow

CONFIG = ConstructionConfig(sigma={1: 2, 2: 1, 3: 1}, max_stage=4, seed=0)


@pytest.fixture(scope="module")
def stages():
    """Stages 1 to 4 of one run."""
    result = {1: init_stage(CONFIG)}
    for m in (2, 3, 4):
        result[m] = run_stage(result[m - 1])
    return result


def test_every_stage_verifies(stages):
    """Test the invariants and the Mahler certificate at each stage."""
    for m, state in stages.items():
        assert state.m == m
        report = check_stage(state)
        report.merge(mahler_certificate(state, sample_budget=16))
        assert report.accepted, report.summary(verbose=True)


def test_radii_grow(stages):
    """Test r_1 < r_2 < r_3 < r_4 with r_m > m."""
    radii = stages[4].radii
    assert sorted(radii) == [1, 2, 3, 4]
    assert radii[1] < radii[2] < radii[3] < radii[4]
    assert all(radii[m] > m for m in radii)


def test_targets_are_hit(stages):
    """Test f_3(tau) = alpha for a registered preimage of every alpha_1..alpha_3."""
    state = stages[3]
    hit = {e.target_index for e in state.preimages if e.point is not None}
    assert {1, 2, 3} <= hit
    for e in state.preimages:
        if e.point is not None:
            assert reduce_exact(state.f.eval_symbolic(e.point)) == e.target


def test_orbit_schedule(stages):
    """Test #Orb(k) = min(m, s_k) for sigma = {1: 2, 2: 1, 3: 1}."""
    assert stages[2].orbit_count(1) == 2
    assert stages[2].orbit_count(2) == 1
    assert stages[2].orbit_count(3) == 0
    assert stages[3].orbit_count(1) == 2
    assert stages[3].orbit_count(2) == 1
    assert stages[3].orbit_count(3) == 1
    assert stages[4].orbit_count(3) == 1
    assert stages[4].orbit_count(4) == 0


def test_orbits_persist_two_stages_later(stages):
    """Test that the orbits grafted at stage 2 are still exact repelling orbits of f_4."""
    late = stages[4]
    later_points = {tuple(o.points) for k in late.orbits for o in late.orbits[k]}
    for k, orbits in stages[2].orbits.items():
        for orbit in orbits:
            pts = orbit.points
            assert tuple(pts) in later_points
            for j, g in enumerate(pts):
                assert reduce_exact(late.f.eval_symbolic(g)) == pts[(j + 1) % k]
            with mpmath.workprec(CONFIG.precision_bits):
                mult = multiplier_of(late.f, [ComplexBox.from_gaussian(g) for g in pts])
            if k == 1:
                assert not mult.contains_zero() and not (mult - 1).contains_zero()
            else:
                assert mult.abs_lower() > 1


def test_nail_grows(stages):
    """Test that each nail polynomial divides the next."""
    sizes = stages[4].nail_sizes
    assert sizes[1] <= sizes[2] <= sizes[3] <= sizes[4] == stages[4].nail.D
    assert set(stages[2].nail.roots) <= set(stages[3].nail.roots)


def test_same_seed_same_bytes(stages):
    """Test that rerunning a transition writes byte-identical files."""
    again = run_stage(init_stage(CONFIG))
    assert stage_text(again) == stage_text(stages[2])


def test_round_trip_of_late_stage(stages):
    """Test a stage with terms survives the file format unchanged."""
    text = stage_text(stages[3])
    back = state_from_dict(json.loads(text))
    assert stage_text(back) == text
    assert check_stage(back).accepted


# ---------------------------------------------------------------------------
# tampered stages
# ---------------------------------------------------------------------------

def widened_epsilon(state):
    terms = list(state.f.terms)
    t = terms[0]
    terms[0] = dataclasses.replace(t, epsilon=SymbolicValue.exact(2 * t.nu))
    state.f = StagedFunction(state.f.base, state.f.epsilon0, terms)
    return "iv"


def dropped_nail_root(state):
    state.nail = NailPolynomial(state.nail.roots[1:])
    return "ii"


def coefficient_past_theta(state):
    terms = list(state.f.terms)
    terms[0] = dataclasses.replace(terms[0], epsilon=SymbolicValue.exact(10 ** 6))
    state.f = StagedFunction(state.f.base, state.f.epsilon0, terms)
    return "v"


def inflated_margin(state):
    p = state.predicates[0]
    state.predicates = [dataclasses.replace(p, margin=1000 * p.margin)] + list(state.predicates[1:])
    return "vi"


def broken_chain(state):
    [cycle] = state.orbits[2]
    fixed = state.orbits[1][0].points[0]
    state.orbits = dict(state.orbits)
    state.orbits[2] = [GraftedOrbit(2, [cycle.points[0], fixed], cycle.stage)]
    return "orbits"


TAMPERS = [widened_epsilon, dropped_nail_root, coefficient_past_theta, inflated_margin, broken_chain]


@pytest.mark.parametrize("tamper", TAMPERS, ids=[t.__name__ for t in TAMPERS])
def test_tampered_stage_is_caught(stages, tamper):
    """Test that each tampered stage fails its check."""
    state = stages[2].copy()
    key = tamper(state)
    assert key in failing_keys(check_stage(state))


@pytest.mark.parametrize("tamper", TAMPERS, ids=[t.__name__ for t in TAMPERS])
def test_tampered_file_exits_with_verify_code(stages, tamper, tmp_path):
    """Test that verify exits 2 on a tampered stage file."""
    state = stages[2].copy()
    tamper(state)
    path = save_stage(state, tmp_path / "stage-002.json")
    assert main(["verify", "-f", str(path)]) == EXIT_VERIFY


def test_census_sees_nailed_fixed_points(stages):
    """Test the census of stage 2: both grafted fixed points are nailed."""
    state = stages[2]
    [row] = census_rows(state, Disk.origin(state.r), [1])
    assert row["nailed"] == 2
    assert row["orb"] >= 2


def test_full_cycle_supply_is_checked():
    """Test cycle_supply = full: n + 1 + D_n cycles of each period in B(0, r_2)."""
    config = ConstructionConfig(sigma={1: 1}, max_stage=2, seed=0, cycle_supply="full")
    state = run_stage(init_stage(config))
    report = check_stage(state)
    assert report.accepted, report.summary(verbose=True)
    entry = report.get("supply")
    assert entry.status is EntryStatus.CERTIFIED
    assert [row["k"] for row in entry.data["supply"]] == [1, 2]
    assert all(row["found"] >= row["want"] == 2 for row in entry.data["supply"])


def test_cli_run(tmp_path, capsys):
    """Test init, step and verify through the command line."""
    config = tmp_path / "run.cfg"
    config.write_text("base = exp\nsigma = 1:2, 2:1\nmax_stage = 3\n", encoding="utf-8")
    out = tmp_path / "run"
    assert main(["init", "-c", str(config), "-d", str(out)]) == EXIT_OK
    assert main(["step", "-f", str(out / "stage-001.json"), "-n", "1"]) == EXIT_OK
    assert main(["verify", "-f", str(out / "stage-002.json")]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["stage_files"] == ["stage-001.json", "stage-002.json"]
    assert "ACCEPTED" in capsys.readouterr().out
