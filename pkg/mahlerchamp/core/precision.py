"""
Precision Policy - Working-precision schedule for enclosures.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

Enclosures start at `start_bits` and double on demand up to `max_bits`.
"""

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional


@dataclass(frozen=True)
class PrecisionPolicy:
    start_bits: int = 128
    max_bits: int = 8192

    def __post_init__(self):
        if self.start_bits < 16:
            raise ValueError(f"start_bits must be at least 16, got {self.start_bits}")
        if self.max_bits < self.start_bits:
            raise ValueError(
                f"max_bits ({self.max_bits}) is below start_bits ({self.start_bits})"
            )

    def levels(self, start: Optional[int] = None) -> Iterator[int]:
        """Yield start, 2*start, ... and finally max_bits."""
        bits = max(self.start_bits, start or 0)
        bits = min(bits, self.max_bits)
        while bits < self.max_bits:
            yield bits
            bits *= 2
        yield self.max_bits

    def to_dict(self):
        return {"start_bits": self.start_bits, "max_bits": self.max_bits}

    @classmethod
    def from_dict(cls, data) -> "PrecisionPolicy":
        return cls(int(data["start_bits"]), int(data["max_bits"]))


_default = PrecisionPolicy()


def default_policy() -> PrecisionPolicy:
    return _default


@contextmanager
def using_policy(policy: PrecisionPolicy):
    """Temporarily replace the process-wide default policy."""
    global _default
    previous = _default
    _default = policy
    try:
        yield policy
    finally:
        _default = previous
