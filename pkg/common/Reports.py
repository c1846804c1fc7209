# Copyright (c) 2024.
"""Report records shared by the measure sets, the verifier and the CLI."""

from typing import Literal

from pydantic import BaseModel, Field

Provenance = Literal["closed-form", "optimizer"]


class MeasureEntry(BaseModel):
    """One measure value and how it was obtained."""

    value: float
    provenance: Provenance = "closed-form"
    restarts: int | None = None
    seed: int | None = None
    budget_exhausted: bool = False


class MeasureReport(BaseModel):
    """Measure identifiers mapped to values, in insertion order

    Supplementary quantities go in extras; they are not measure entries.
    """

    dims: list[int]
    entries: dict[str, MeasureEntry] = Field(default_factory=dict)
    extras: dict[str, float] = Field(default_factory=dict)

    def add(self, key: str, value: float) -> None:
        """Record a closed-form value."""
        self.entries[key] = MeasureEntry(value=float(value))

    def values(self) -> dict[str, float]:
        """Plain key -> value map."""
        return {key: entry.value for key, entry in self.entries.items()}


class CheckResult(BaseModel):
    """Outcome of one numerical check."""

    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


class SuiteReport(BaseModel):
    """All checks of one verification suite."""

    suite: str
    samples: int
    seed: int
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Whether every check passed."""
        return all(check.passed for check in self.checks)

    def record(
        self, name: str, residual: float, tolerance: float, detail: str = ""
    ) -> CheckResult:
        """Append a check that passes when residual <= tolerance."""
        check = CheckResult(
            name=name,
            passed=bool(residual <= tolerance),
            residual=float(residual),
            tolerance=tolerance,
            detail=detail,
        )
        self.checks.append(check)
        return check

    def expect(self, name: str, condition: bool, detail: str = "") -> CheckResult:
        """Append a boolean check."""
        check = CheckResult(
            name=name,
            passed=bool(condition),
            residual=0.0 if condition else 1.0,
            tolerance=0.0,
            detail=detail,
        )
        self.checks.append(check)
        return check
