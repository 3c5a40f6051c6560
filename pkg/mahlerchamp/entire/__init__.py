"""
Entire Module - Base functions, polynomials and staged functions.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .base_functions import BaseFunction, ExpAffine, PolynomialBase, Trig
from .evaluable import (
    Evaluable,
    Iterate,
    IterateDerivative,
    MinusIdentity,
    PeriodicEquation,
    Shifted,
    SumEvaluable,
)
from .polynomial import Polynomial, poly_length
from .registry import BaseRegistry, BaseRegistryError, default_registry, get_base
from .staged import (
    InvalidSchedule,
    PerturbationTerm,
    StagedDerivative,
    StagedFunction,
    tail_certificate,
)
from .theta import ThetaSequence

__all__ = [
    "BaseFunction",
    "BaseRegistry",
    "BaseRegistryError",
    "Evaluable",
    "ExpAffine",
    "InvalidSchedule",
    "Iterate",
    "IterateDerivative",
    "MinusIdentity",
    "PeriodicEquation",
    "PerturbationTerm",
    "Polynomial",
    "PolynomialBase",
    "Shifted",
    "StagedDerivative",
    "StagedFunction",
    "SumEvaluable",
    "ThetaSequence",
    "Trig",
    "default_registry",
    "get_base",
    "poly_length",
    "tail_certificate",
]
