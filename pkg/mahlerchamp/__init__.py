"""
MahlerChamp - Certified Staged Construction of Mahler Functions
================================================================

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder. This software
is provided "as is" without warranty of any kind, either expressed or implied.

Patent Pending: Certain architectural patterns and implementations
described herein may be subject to patent applications.

================================================================

Builds, stage by stage, a transcendental entire function f = g + sum of
small polynomial perturbations that maps an enumerated prefix of Q(i)
into Q(i), pulls every enumerated point back from inside a growing disk,
and carries a prescribed number of repelling cycles of each period.
Every claim is certified with interval arithmetic or exact reduction
and re-checked by an independent verifier.

Usage:
    from mahlerchamp import load_config, init_stage, run_stage, check_stage

    state = init_stage(load_config("run.cfg"))
    state = run_stage(state)
    report = check_stage(state)
    print(report.summary())
"""

__version__ = "1.0.0"
__author__ = "Ashutosh Sinha"
__email__ = "ajsinha@gmail.com"

from .construct import (
    ConfigError,
    ConstructionConfig,
    StageState,
    init_stage,
    load_config,
    parse_config,
    run_stage,
)
from .core import (
    ComplexBox,
    Disk,
    GaussianRational,
    MahlerError,
    PrecisionExhausted,
    PrecisionPolicy,
    RetryExhausted,
    SearchExhausted,
    SymbolicValue,
)
from .cycles import CycleCensus, CycleRecord, find_cycles
from .entire import Polynomial, StagedFunction, ThetaSequence, get_base, tail_certificate
from .persistence import RunManifest, StageFileError, load_stage, save_stage
from .rootcount import certify_zero, count_zeros
from .verify import InvariantReport, check_stage, mahler_certificate

__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__email__",

    # Construction
    "ConfigError",
    "ConstructionConfig",
    "StageState",
    "init_stage",
    "load_config",
    "parse_config",
    "run_stage",

    # Exact and interval arithmetic
    "ComplexBox",
    "Disk",
    "GaussianRational",
    "PrecisionPolicy",
    "SymbolicValue",

    # Errors
    "MahlerError",
    "PrecisionExhausted",
    "RetryExhausted",
    "SearchExhausted",
    "StageFileError",

    # Functions and certificates
    "Polynomial",
    "StagedFunction",
    "ThetaSequence",
    "get_base",
    "tail_certificate",
    "count_zeros",
    "certify_zero",
    "find_cycles",
    "CycleCensus",
    "CycleRecord",

    # Verification and files
    "InvariantReport",
    "check_stage",
    "mahler_certificate",
    "RunManifest",
    "load_stage",
    "save_stage",
]
