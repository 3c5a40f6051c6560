"""
Cycles Module - Periodic orbits, censuses and perturbation lemmas.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .finder import PeriodPreconditionError, certify_cycle, find_cycles, multiplier
from .lemmas import (
    EpsilonPerturbed,
    FixedPointCensus,
    PhiResult,
    RegimeResult,
    avoids_zero_and_one,
    fixed_point_census,
    fixed_point_regime,
    phi_check,
)
from .quadrature import QuadratureFailure, gauss_legendre, legendre
from .records import CycleCensus, CycleRecord, CycleStatus

__all__ = [
    "CycleCensus",
    "CycleRecord",
    "CycleStatus",
    "EpsilonPerturbed",
    "FixedPointCensus",
    "PeriodPreconditionError",
    "PhiResult",
    "QuadratureFailure",
    "RegimeResult",
    "avoids_zero_and_one",
    "certify_cycle",
    "find_cycles",
    "fixed_point_census",
    "fixed_point_regime",
    "gauss_legendre",
    "legendre",
    "multiplier",
    "phi_check",
]
