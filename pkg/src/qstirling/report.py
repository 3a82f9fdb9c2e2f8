"""Pass/fail bookkeeping for identity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .scalar import Scalar


def _text(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


@dataclass
class Check:
    label: str
    passed: bool
    lhs: str = ""
    rhs: str = ""


@dataclass
class Report:
    tag: str
    checks: list[Check] = field(default_factory=list)
    rejected: list[str] = field(default_factory=list)

    def compare(self, label: str, lhs, rhs) -> bool:
        """Record an exact comparison of two Scalars (or two rationals)."""
        if isinstance(lhs, Scalar) or isinstance(rhs, Scalar):
            ok = Scalar.coerce(lhs) == Scalar.coerce(rhs)
        else:
            ok = lhs == rhs
        self.checks.append(Check(label, ok, _text(lhs), _text(rhs)))
        return ok

    def reject(self, message: str) -> None:
        self.rejected.append(message)

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        self.rejected.extend(other.rejected)

    @property
    def total(self) -> int:
        return len(self.checks)

    @property
    def npassed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)

    def summary(self) -> str:
        line = f"{self.tag}: {self.npassed}/{self.total} pass"
        if self.rejected:
            line += f" ({len(self.rejected)} rejected)"
        return line

    def to_json(self) -> dict:
        fail = self.first_failure()
        return {
            "tag": self.tag,
            "passed": self.npassed,
            "total": self.total,
            "rejected": list(self.rejected),
            "first_failure": None if fail is None else {
                "label": fail.label, "lhs": fail.lhs, "rhs": fail.rhs
            },
            "checks": [{"label": c.label, "pass": c.passed} for c in self.checks],
        }
