"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Invariant Report - Machine-readable results of a stage verification.

Provides:
- EntryStatus (certified / failed / not-applicable)
- ReportEntry, one checked invariant with its transcript
- InvariantReport, the collection with text and JSON renderings
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class EntryStatus(Enum):
    """Outcome of one invariant check."""
    CERTIFIED = "certified"
    FAILED = "failed"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class ReportEntry:
    """One invariant: its key, outcome and the lines that justify it."""
    key: str
    title: str
    status: EntryStatus = EntryStatus.CERTIFIED
    transcript: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def note(self, line: str) -> None:
        self.transcript.append(line)

    def fail(self, message: str) -> None:
        self.failures.append(message)
        self.status = EntryStatus.FAILED

    def require(self, condition: bool, message: str) -> bool:
        """Record a failure unless `condition` holds; returns the condition."""
        if not condition:
            self.fail(message)
        return condition

    def not_applicable(self, reason: str) -> None:
        if self.status is not EntryStatus.FAILED:
            self.status = EntryStatus.NOT_APPLICABLE
        self.note(reason)

    @property
    def ok(self) -> bool:
        return self.status is not EntryStatus.FAILED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "key": self.key,
            "title": self.title,
            "status": self.status.value,
            "transcript": list(self.transcript),
            "failures": list(self.failures),
            "data": dict(self.data),
        }


@dataclass
class InvariantReport:
    """Result of verifying one stage. Accepted iff no entry failed."""
    stage: int
    entries: List[ReportEntry] = field(default_factory=list)

    def entry(self, key: str, title: str) -> ReportEntry:
        item = ReportEntry(key, title)
        self.entries.append(item)
        return item

    def get(self, key: str) -> Optional[ReportEntry]:
        for item in self.entries:
            if item.key == key:
                return item
        return None

    def merge(self, other: "InvariantReport") -> None:
        self.entries.extend(other.entries)

    @property
    def accepted(self) -> bool:
        return all(item.ok for item in self.entries)

    @property
    def failed(self) -> List[ReportEntry]:
        return [item for item in self.entries if not item.ok]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": "mahlerchamp.report",
            "version": 1,
            "stage": self.stage,
            "accepted": self.accepted,
            "failed": [item.key for item in self.failed],
            "entries": [item.to_dict() for item in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=True) + "\n"

    def summary(self, verbose: bool = False) -> str:
        lines = [f"Stage {self.stage}: {'ACCEPTED' if self.accepted else 'REJECTED'}"]
        for item in self.entries:
            mark = {"certified": "[OK]", "failed": "[FAIL]", "not-applicable": "[--]"}[item.status.value]
            lines.append(f"  {mark:7s}{item.key:14s}{item.title}")
            for failure in item.failures:
                lines.append(f"           - {failure}")
            if verbose:
                for line in item.transcript:
                    lines.append(f"             {line}")
        return "\n".join(lines)
