"""
Construct Module - Configuration, stage state and the stage engine.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .admissibility import audit, ceiling, recompute_spent, register
from .config import ConstructionConfig, load_config, parse_config
from .config_parser import ConfigError
from .engine import (
    BudgetOverflow,
    DegenerateArgument,
    NonSimpleZero,
    PersistenceLost,
    PreconditionError,
    StageWork,
    init_stage,
    run_stage,
)
from .enumeration import AlgebraicEnumeration, get_enumeration
from .nail import NailPolynomial, nu_bound, nu_formula, step_budget, step_scale
from .state import (
    ExactFact,
    GraftedOrbit,
    LedgerEntry,
    NailGraph,
    PreimageEntry,
    RouchePredicate,
    StageBudget,
    StageState,
    StepRecord,
)

__all__ = [
    "AlgebraicEnumeration",
    "BudgetOverflow",
    "ConfigError",
    "ConstructionConfig",
    "DegenerateArgument",
    "ExactFact",
    "GraftedOrbit",
    "LedgerEntry",
    "NailGraph",
    "NailPolynomial",
    "NonSimpleZero",
    "PersistenceLost",
    "PreconditionError",
    "PreimageEntry",
    "RouchePredicate",
    "StageBudget",
    "StageState",
    "StageWork",
    "StepRecord",
    "audit",
    "ceiling",
    "get_enumeration",
    "init_stage",
    "load_config",
    "nu_bound",
    "nu_formula",
    "parse_config",
    "recompute_spent",
    "register",
    "run_stage",
    "step_budget",
    "step_scale",
]
