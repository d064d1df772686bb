"""Check reports with a three-valued verdict."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Report:
    """Outcome of checking a property over a finite family of cases.

    ``violations`` and ``inconclusive`` hold the offending cases, in the
    order they were met; ``checked`` counts every case examined.
    """

    name: str
    violations: list[Any] = field(default_factory=list)
    inconclusive: list[Any] = field(default_factory=list)
    checked: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        if self.violations:
            return Verdict.FAILS
        if self.inconclusive:
            return Verdict.INCONCLUSIVE
        return Verdict.HOLDS

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def merge(self, other: Report) -> Report:
        self.violations.extend(other.violations)
        self.inconclusive.extend(other.inconclusive)
        self.checked += other.checked
        self.notes.extend(other.notes)
        return self
