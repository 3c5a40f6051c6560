"""
Core Module - Exact field arithmetic, complex balls and symbolic values.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .balls import ComplexBox
from .disk import Disk
from .errors import (
    DivisionByEnclosedZero,
    MahlerError,
    PrecisionExhausted,
    RetryExhausted,
    SearchExhausted,
)
from .gaussian import I, ONE, ZERO, GaussianRational, gaussian
from .precision import PrecisionPolicy, default_policy, using_policy
from .symbolic import (
    NOT_EXACT,
    ExactnessTag,
    SymbolicValue,
    enclose,
    enclose_relative,
    is_exactly,
    reduce_exact,
)

__all__ = [
    "ComplexBox",
    "Disk",
    "DivisionByEnclosedZero",
    "ExactnessTag",
    "GaussianRational",
    "I",
    "MahlerError",
    "NOT_EXACT",
    "ONE",
    "PrecisionExhausted",
    "PrecisionPolicy",
    "RetryExhausted",
    "SearchExhausted",
    "SymbolicValue",
    "ZERO",
    "default_policy",
    "enclose",
    "enclose_relative",
    "gaussian",
    "is_exactly",
    "reduce_exact",
    "using_policy",
]
