"""
File Utilities - Load and save stage files, manifests and reports.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder. This software
is provided "as is" without warranty of any kind.

Patent Pending: Certain implementations may be subject to patent applications.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Union


def canonical_json(data: Any) -> str:
    """sort_keys, indent 2, LF line endings, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def load_json(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Load a JSON document from a file.

    Raises:
        FileNotFoundError: If file doesn't exist
        json.JSONDecodeError: If file contains invalid JSON
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def atomic_write_text(text: str, path: Union[str, Path]) -> Path:
    """
    Write text through a temporary file in the same directory, then
    os.replace it over the target.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def save_json(data: Any, path: Union[str, Path]) -> Path:
    """Write canonical JSON atomically."""
    return atomic_write_text(canonical_json(data), path)


def ensure_directory(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path
