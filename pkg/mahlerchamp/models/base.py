"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Base Models - Serializable records for stage files and manifests.

Provides a common to_dict/from_dict interface. Exact values are written
as text ("p/q", "a/b+c/di"), boxes as exact binary rationals, so the JSON
form of a record is deterministic.
"""

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Type, TypeVar

from ..core.balls import ComplexBox
from ..core.gaussian import GaussianRational
from ..core.serialization import box_to_dict, fraction_to_text, gaussian_to_text

T = TypeVar("T", bound="JsonSerializable")


class JsonSerializable(ABC):
    """
    Abstract base class for JSON-serializable records.
    """

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation."""
        pass

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, two-space indent, no trailing spaces."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=True)

    @classmethod
    @abstractmethod
    def from_dict(cls: Type[T], data: Dict[str, Any]) -> T:
        """Create instance from dictionary."""
        pass

    @classmethod
    def from_json(cls: Type[T], json_str: str) -> T:
        return cls.from_dict(json.loads(json_str))


def serialize_value(value: Any) -> Any:
    """
    Serialize a single value for JSON output.

    Args:
        value: Value to serialize

    Returns:
        JSON-compatible value
    """
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return fraction_to_text(value)
    if isinstance(value, GaussianRational):
        return gaussian_to_text(value)
    if isinstance(value, ComplexBox):
        return box_to_dict(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [serialize_value(item) for item in value]
    if isinstance(value, dict):
        return {str(k): serialize_value(v) for k, v in value.items()}
    return value


@dataclass
class BaseModel(JsonSerializable):
    """
    Dataclass base with field-wise serialization.

    Subclasses override from_dict when a field needs more than the plain
    JSON value back (exact numbers, boxes, nested records).
    """

    def to_dict(self) -> Dict[str, Any]:
        result = {}
        for fld in fields(self):
            if fld.name.startswith("_"):
                continue
            value = getattr(self, fld.name)
            if value is None:
                continue
            result[fld.name] = serialize_value(value)
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BaseModel":
        field_names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in field_names})

    def validate(self) -> List[str]:
        """
        Validate the record.

        Returns:
            List of validation error messages
        """
        return []

    def is_valid(self) -> bool:
        return len(self.validate()) == 0
