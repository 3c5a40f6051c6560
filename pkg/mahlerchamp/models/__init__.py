"""
Models Module - Serializable record base classes.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .base import BaseModel, JsonSerializable, serialize_value

__all__ = ["BaseModel", "JsonSerializable", "serialize_value"]
