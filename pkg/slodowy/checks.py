"""Named boolean check reports with witness data."""

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Ordered collection of named pass/fail checks.

    Each failing check may carry a JSON-compatible witness (a kernel vector, the
    offending generator, computed vs expected values, ...).
    """

    subject: str
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, ok: bool, witness: Any = None) -> bool:
        self.checks[name] = bool(ok)
        if witness is not None and not ok:
            self.witnesses[name] = witness
        return bool(ok)

    def merge(self, other: "CheckReport", prefix: str) -> None:
        """Fold another report's checks in under ``prefix``."""
        for name, ok in other.checks.items():
            self.checks[f"{prefix}.{name}"] = ok
        for name, witness in other.witnesses.items():
            self.witnesses[f"{prefix}.{name}"] = witness

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": dict(self.checks),
            "failures": self.failures(),
            "witnesses": dict(self.witnesses),
            "data": dict(self.data),
        }
