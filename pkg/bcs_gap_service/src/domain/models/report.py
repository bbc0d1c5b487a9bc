from dataclasses import dataclass, field
from enum import Enum


class CheckStatus(str, Enum):
    """Outcome of a verification check."""

    PASS = "pass"
    FAIL = "fail"
    INFO = "info"


@dataclass(frozen=True)
class Check:
    """One named verification check."""

    id: str
    claim: str
    reference: str
    status: CheckStatus
    measured: float | None = None
    tolerance: float | None = None
    detail: str = ""


@dataclass
class VerifyReport:
    """Ordered collection of checks with a derived overall status"""

    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        if any(existing.id == check.id for existing in self.checks):
            raise ValueError(f"Duplicate check id: {check.id}")
        self.checks.append(check)
        return check

    @property
    def failed(self) -> list[Check]:
        return [check for check in self.checks if check.status == CheckStatus.FAIL]

    @property
    def overall(self) -> CheckStatus:
        return CheckStatus.FAIL if self.failed else CheckStatus.PASS
