"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Persistence - Stage-state files and run manifests.

A stage file is canonical JSON: format "mahlerchamp.stage", version 1, a
SHA-256 checksum over the canonical payload without the checksum, and
every SymbolicValue written once into an indexed node list. No
timestamps and no floats, so equal states give byte-equal files.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

from .construct.config import ConstructionConfig
from .construct.nail import NailPolynomial
from .construct.state import (
    ExactFact,
    GraftedOrbit,
    LedgerEntry,
    PreimageEntry,
    RouchePredicate,
    StageBudget,
    StageState,
    StepRecord,
)
from .core.errors import MahlerError
from .core.serialization import (
    DagFormatError,
    DagWriter,
    fraction_from_text,
    fraction_to_text,
    gaussian_from_text,
    gaussian_to_text,
    node_ref,
    read_dag,
)
from .entire.polynomial import Polynomial
from .entire.registry import get_base
from .entire.staged import PerturbationTerm, StagedFunction
from .utils.file_utils import atomic_write_text, canonical_json, load_json

try:
    from jsonschema import Draft7Validator
    HAS_JSONSCHEMA = True
except ImportError:
    HAS_JSONSCHEMA = False

logger = logging.getLogger(__name__)

STAGE_FORMAT = "mahlerchamp.stage"
MANIFEST_FORMAT = "mahlerchamp.manifest"
VERSION = 1
MANIFEST_NAME = "manifest.json"

STAGE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": [
        "format", "version", "checksum", "stage", "seed", "config", "dag", "function",
        "radii", "X", "preimages", "orbits", "nail", "facts", "predicates", "ledger",
        "steps", "budgets", "certificates",
    ],
    "properties": {
        "format": {"const": STAGE_FORMAT},
        "version": {"type": "integer"},
        "checksum": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "stage": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "config": {"type": "object"},
        "dag": {"type": "array", "items": {"type": "object", "required": ["op"]}},
        "function": {
            "type": "object",
            "required": ["base", "epsilon0", "terms"],
            "properties": {
                "base": {"type": "string"},
                "epsilon0": {"type": "integer", "minimum": 0},
                "terms": {"type": "array", "items": {
                    "type": "object",
                    "required": ["stage", "index", "epsilon", "poly", "nu", "kind", "exponent"],
                }},
            },
        },
        "radii": {"type": "object"},
        "X": {"type": "array", "items": {"type": "string"}},
        "preimages": {"type": "array"},
        "orbits": {"type": "object"},
        "nail": {"type": "object", "required": ["roots", "sizes"]},
        "facts": {"type": "array"},
        "predicates": {"type": "array"},
        "ledger": {"type": "array"},
        "steps": {"type": "array"},
        "budgets": {"type": "array"},
        "certificates": {"type": "array"},
    },
}


class StageFileError(MahlerError):
    """A stage or manifest file is unreadable, inconsistent or tampered with."""

    def __init__(self, message: str, path: Union[str, Path, None] = None):
        self.path = None if path is None else str(path)
        super().__init__(message if path is None else f"{path}: {message}")


# ---------------------------------------------------------------------------
# stage state <-> dict
# ---------------------------------------------------------------------------

def _checksum(payload: Dict[str, Any]) -> str:
    body = {k: v for k, v in payload.items() if k != "checksum"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


def state_to_dict(state: StageState) -> Dict[str, Any]:
    dag = DagWriter()
    f = state.f
    function = {
        "base": f.base.id,
        "epsilon0": dag.add(f.epsilon0),
        "terms": [
            {
                "stage": t.stage,
                "index": t.index,
                "epsilon": dag.add(t.epsilon),
                "poly": t.poly.to_text(),
                "nu": fraction_to_text(t.nu),
                "kind": t.kind,
                "exponent": t.exponent,
            }
            for t in f.terms
        ],
    }
    payload = {
        "format": STAGE_FORMAT,
        "version": VERSION,
        "stage": state.m,
        "seed": state.config.seed,
        "config": state.config.to_dict(),
        "dag": dag.nodes,
        "function": function,
        "radii": {str(k): fraction_to_text(r) for k, r in sorted(state.radii.items())},
        "X": [gaussian_to_text(q) for q in state.X],
        "preimages": [e.to_dict() for e in state.preimages],
        "orbits": {str(k): [o.to_dict() for o in v] for k, v in sorted(state.orbits.items())},
        "nail": {
            "roots": state.nail.to_dict()["roots"],
            "sizes": {str(k): v for k, v in sorted(state.nail_sizes.items())},
        },
        "facts": [x.to_dict() for x in state.facts],
        "predicates": [p.to_dict() for p in state.predicates],
        "ledger": [x.to_dict() for x in state.ledger],
        "steps": [x.to_dict() for x in state.steps],
        "budgets": [x.to_dict() for x in state.budgets],
        "certificates": list(state.certificates),
    }
    payload["checksum"] = _checksum(payload)
    return payload


def structural_problems(data: Dict[str, Any]) -> List[str]:
    """Schema check; falls back to required-key presence without jsonschema."""
    if HAS_JSONSCHEMA:
        validator = Draft7Validator(STAGE_SCHEMA)
        return [
            f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
            for err in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
        ]
    if not isinstance(data, dict):
        return ["<root>: not an object"]
    problems = [f"<root>: missing '{key}'" for key in STAGE_SCHEMA["required"] if key not in data]
    if not problems and data.get("format") != STAGE_FORMAT:
        problems.append(f"format: expected '{STAGE_FORMAT}'")
    return problems


def state_from_dict(data: Dict[str, Any], verify_checksum: bool = True) -> StageState:
    """
    Raises:
        StageFileError: wrong format or version, failed schema check,
            checksum mismatch or an unreadable record
    """
    problems = structural_problems(data)
    if problems:
        raise StageFileError("Not a stage file: " + "; ".join(problems[:5]))
    if data["version"] != VERSION:
        raise StageFileError(f"Unsupported stage file version {data['version']}")
    if verify_checksum and _checksum(data) != data["checksum"]:
        raise StageFileError("Checksum mismatch: the file was modified after it was written")
    try:
        config = ConstructionConfig.from_dict(data["config"])
        nodes = read_dag(data["dag"], get_base)
        fn = data["function"]
        terms = [
            PerturbationTerm(
                stage=int(t["stage"]),
                index=int(t["index"]),
                epsilon=node_ref(nodes, t["epsilon"]),
                poly=Polynomial.from_text(t["poly"]),
                nu=fraction_from_text(t["nu"]),
                kind=t["kind"],
                exponent=int(t["exponent"]),
            )
            for t in fn["terms"]
        ]
        f = StagedFunction(get_base(fn["base"]), node_ref(nodes, fn["epsilon0"]), terms)
        return StageState(
            config=config,
            m=int(data["stage"]),
            f=f,
            radii={int(k): fraction_from_text(v) for k, v in data["radii"].items()},
            X=[gaussian_from_text(t) for t in data["X"]],
            preimages=[PreimageEntry.from_dict(e) for e in data["preimages"]],
            orbits={int(k): [GraftedOrbit.from_dict(o) for o in v]
                    for k, v in data["orbits"].items()},
            nail=NailPolynomial.from_dict({"roots": data["nail"]["roots"]}),
            nail_sizes={int(k): int(v) for k, v in data["nail"]["sizes"].items()},
            facts=[ExactFact.from_dict(x) for x in data["facts"]],
            predicates=[RouchePredicate.from_dict(x) for x in data["predicates"]],
            ledger=[LedgerEntry.from_dict(x) for x in data["ledger"]],
            steps=[StepRecord.from_dict(x) for x in data["steps"]],
            budgets=[StageBudget.from_dict(x) for x in data["budgets"]],
            certificates=list(data["certificates"]),
        )
    except (KeyError, TypeError, ValueError, DagFormatError, MahlerError) as e:
        raise StageFileError(f"Unreadable stage record: {type(e).__name__}: {e}")


def stage_text(state: StageState) -> str:
    return canonical_json(state_to_dict(state))


def save_stage(state: StageState, path: Union[str, Path]) -> Path:
    """Write the stage file atomically."""
    written = atomic_write_text(stage_text(state), path)
    logger.info("stage %s written to %s", state.m, written)
    return written


def load_stage(path: Union[str, Path]) -> StageState:
    """
    Raises:
        StageFileError: missing, malformed or tampered file
    """
    try:
        data = load_json(path)
    except FileNotFoundError:
        raise StageFileError("File not found", path)
    except ValueError as e:
        raise StageFileError(f"Invalid JSON: {e}", path)
    try:
        return state_from_dict(data)
    except StageFileError as e:
        raise StageFileError(e.message, path)


def stage_filename(m: int) -> str:
    return f"stage-{m:03d}.json"


# ---------------------------------------------------------------------------
# run manifest
# ---------------------------------------------------------------------------

@dataclass
class RunManifest:
    """Everything needed to rerun a construction and compare its files."""
    config: Dict[str, Any]
    seed: int
    policy: Dict[str, int]
    stage_files: List[str] = field(default_factory=list)
    tool_version: str = ""

    @classmethod
    def for_config(cls, config: ConstructionConfig) -> "RunManifest":
        from . import __version__

        return cls(
            config=config.to_dict(),
            seed=config.seed,
            policy=config.policy.to_dict(),
            tool_version=__version__,
        )

    def add_stage(self, name: str) -> None:
        if name not in self.stage_files:
            self.stage_files.append(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": MANIFEST_FORMAT,
            "version": VERSION,
            "config": self.config,
            "seed": self.seed,
            "policy": self.policy,
            "stage_files": list(self.stage_files),
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        if data.get("format") != MANIFEST_FORMAT:
            raise StageFileError("Not a run manifest")
        return cls(
            config=data["config"],
            seed=int(data["seed"]),
            policy=dict(data["policy"]),
            stage_files=list(data.get("stage_files", [])),
            tool_version=data.get("tool_version", ""),
        )

    def save(self, directory: Union[str, Path]) -> Path:
        return atomic_write_text(canonical_json(self.to_dict()), Path(directory) / MANIFEST_NAME)

    @classmethod
    def load(cls, directory: Union[str, Path]) -> "RunManifest":
        path = Path(directory) / MANIFEST_NAME
        try:
            return cls.from_dict(load_json(path))
        except FileNotFoundError:
            raise StageFileError("No run manifest", path)
        except (KeyError, ValueError) as e:
            raise StageFileError(f"Unreadable manifest: {e}", path)


def load_or_create_manifest(directory: Union[str, Path], config: ConstructionConfig) -> RunManifest:
    path = Path(directory) / MANIFEST_NAME
    if path.exists():
        return RunManifest.load(directory)
    return RunManifest.for_config(config)
