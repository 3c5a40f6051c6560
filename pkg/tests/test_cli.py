"""
MahlerChamp - Command Line Tests

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import json
from fractions import Fraction

import pytest

from mahlerchamp.cli import (
    EXIT_OK,
    EXIT_PRECISION,
    EXIT_SEARCH,
    EXIT_USAGE,
    EXIT_VERIFY,
    exit_code_for,
    main,
    parse_disk,
    parse_periods,
)
from mahlerchamp.construct import ConfigError
from mahlerchamp.core import GaussianRational, PrecisionExhausted, RetryExhausted, SearchExhausted
from mahlerchamp.persistence import StageFileError

CONFIG = """\
base = exp
sigma = 1:2, 2:1
max_stage = 3
"""


@pytest.fixture
def run_dir(tmp_path):
    """A directory holding stage 1 written by `init`."""
    config = tmp_path / "run.cfg"
    config.write_text(CONFIG, encoding="utf-8")
    out = tmp_path / "run"
    assert main(["init", "-c", str(config), "-d", str(out)]) == EXIT_OK
    return out


def test_parse_disk():
    """Test 'center,radius' parsing."""
    disk = parse_disk("1/2+i, 1/4")
    assert disk.center == GaussianRational(Fraction(1, 2), 1)
    assert disk.radius == Fraction(1, 4)
    for bad in ("2", "0,0", "x,1", "0,0.5"):
        with pytest.raises(ConfigError):
            parse_disk(bad)


def test_parse_periods():
    """Test period lists and ranges."""
    assert parse_periods(None, 3) == [1, 2, 3]
    assert parse_periods("2-4", 1) == [2, 3, 4]
    assert parse_periods("1,3", 1) == [1, 3]
    with pytest.raises(ConfigError):
        parse_periods("a-b", 1)


def test_exit_codes():
    """Test the error to exit-code contract."""
    assert exit_code_for(PrecisionExhausted("x")) == EXIT_PRECISION
    assert exit_code_for(SearchExhausted("x")) == EXIT_SEARCH
    assert exit_code_for(RetryExhausted("x")) == EXIT_SEARCH
    assert exit_code_for(StageFileError("x")) == EXIT_VERIFY
    assert exit_code_for(ConfigError("x")) == EXIT_USAGE


def test_no_command_prints_help(capsys):
    """Test that a bare call is a usage error."""
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().out.lower()


def test_version():
    """Test --version."""
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0


def test_init_with_bad_config(tmp_path, capsys):
    """Test that config errors exit with the usage code."""
    config = tmp_path / "bad.cfg"
    config.write_text("base = gamma\n", encoding="utf-8")
    assert main(["init", "-c", str(config), "-d", str(tmp_path)]) == EXIT_USAGE
    assert "[ERROR]" in capsys.readouterr().err


def test_init_writes_stage_and_manifest(run_dir):
    """Test the files written by init."""
    assert (run_dir / "stage-001.json").exists()
    manifest = json.loads((run_dir / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["stage_files"] == ["stage-001.json"]


def test_verify_accepts_fresh_stage(run_dir, tmp_path, capsys):
    """Test verify on an untouched file, with a JSON report."""
    report = tmp_path / "report.json"
    code = main(["verify", "-f", str(run_dir / "stage-001.json"), "-o", str(report)])
    assert code == EXIT_OK
    assert "ACCEPTED" in capsys.readouterr().out
    assert json.loads(report.read_text(encoding="utf-8"))["accepted"] is True


def test_verify_lists_tampered_entries(run_dir, capsys):
    """Test verify on a file whose radius was edited by hand."""
    path = run_dir / "stage-001.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    data["radii"]["1"] = "1"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["verify", "-f", str(path)]) == EXIT_VERIFY
    out = capsys.readouterr().out
    assert "REJECTED" in out
    assert "Checksum" in out


def test_step_refuses_tampered_file(run_dir):
    """Test that step exits with the verify code on a tampered file."""
    path = run_dir / "stage-001.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    data["seed"] = 99
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["step", "-f", str(path)]) == EXIT_VERIFY


def test_export_coefficients(run_dir, capsys):
    """Test the coefficient export of stage 1."""
    code = main(["export", "-f", str(run_dir / "stage-001.json"),
                 "--format", "coefficients", "--max-k", "3"])
    assert code == EXIT_OK
    table = json.loads(capsys.readouterr().out)
    assert [row["a"] for row in table["coefficients"]] == ["9/8", "1", "1/2", "1/6"]
    assert all(row["within_theta"] for row in table["coefficients"])
    assert table["radius"] == "3/2"


def test_export_state_is_the_file(run_dir, capsys):
    """Test that exporting the state reproduces the stage file."""
    path = run_dir / "stage-001.json"
    assert main(["export", "-f", str(path), "--format", "state"]) == EXIT_OK
    assert capsys.readouterr().out == path.read_text(encoding="utf-8")


def test_census_stage_one(run_dir, capsys):
    """Test the census of stage 1 as JSON."""
    assert main(["census", "-f", str(run_dir / "stage-001.json"), "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["stage"] == 1
    assert data["rows"][0]["k"] == 1
    assert data["rows"][0]["nailed"] == 0
