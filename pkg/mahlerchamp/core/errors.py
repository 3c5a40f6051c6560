"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Errors - Exception hierarchy shared by every mahlerchamp module.

Modules raise their own subclasses of MahlerError; the CLI maps the
families below onto exit codes.
"""

from typing import Any, Dict, Optional


class MahlerError(Exception):
    """Base class for all mahlerchamp errors."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class PrecisionExhausted(MahlerError):
    """The precision ceiling was reached before an enclosure got tight enough."""

    def __init__(self, message: str, bits: Optional[int] = None):
        self.bits = bits
        super().__init__(message)


class DivisionByEnclosedZero(MahlerError):
    """A denominator enclosure still contains 0 at the precision ceiling."""
    pass


class SearchExhausted(MahlerError):
    """A search produced fewer objects than required."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class RetryExhausted(MahlerError):
    """A micro-step ran out of resamples."""

    def __init__(self, message: str, step: str = "", attempts: int = 0):
        self.step = step
        self.attempts = attempts
        super().__init__(message)
