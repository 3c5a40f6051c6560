"""
Verify Module - Independent re-verification of completed stages.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .checker import StageChecker, check_stage, failing_keys
from .mahler import mahler_certificate
from .report import EntryStatus, InvariantReport, ReportEntry
from .theta_chain import geometric_half, theta_chain

__all__ = [
    "EntryStatus",
    "InvariantReport",
    "ReportEntry",
    "StageChecker",
    "check_stage",
    "failing_keys",
    "geometric_half",
    "mahler_certificate",
    "theta_chain",
]
