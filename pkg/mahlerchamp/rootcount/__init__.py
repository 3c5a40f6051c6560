"""
Root Counting Module - Winding numbers, Rouche radii and interval Newton.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .newton import Isolation, certify_zero, krawczyk, newton_refine
from .rouche import BoundaryContact, boundary_minimum, modulus_range, rouche_delta
from .winding import (
    BoundaryCertificate,
    BoundaryEnclosure,
    BoundaryZero,
    ZeroCount,
    boundary_clear,
    count_zeros,
)

__all__ = [
    "BoundaryCertificate",
    "BoundaryContact",
    "BoundaryEnclosure",
    "BoundaryZero",
    "Isolation",
    "ZeroCount",
    "boundary_clear",
    "boundary_minimum",
    "certify_zero",
    "count_zeros",
    "krawczyk",
    "modulus_range",
    "newton_refine",
    "rouche_delta",
]
