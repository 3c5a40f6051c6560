"""
Utility functions for mahlerchamp.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

from .file_utils import atomic_write_text, canonical_json, ensure_directory, load_json, save_json

__all__ = ["atomic_write_text", "canonical_json", "ensure_directory", "load_json", "save_json"]
