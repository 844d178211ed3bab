from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Residual:
    """Outcome of one named check: a max-norm residual against a tolerance."""

    name: str
    value: float
    tol: float
    context: dict = field(default_factory=dict)
    note: str = ""
    skipped: bool = False

    @property
    def passed(self) -> bool:
        # NaN compares false, so it always fails
        return (not self.skipped) and self.value < self.tol

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        value = self.value
        if value is None or (isinstance(value, float) and not math.isfinite(value)):
            value = None if value is None or math.isnan(value) else str(value)
        out = {
            "name": self.name,
            "value": value,
            "tol": self.tol,
            "pass": self.passed,
            "status": self.status,
            "context": self.context,
        }
        if self.note:
            out["note"] = self.note
        return out


def skipped(name: str, context: dict | None = None, reason: str = "not applicable") -> Residual:
    return Residual(name, float("nan"), 0.0, dict(context or {}), f"skipped: {reason}", skipped=True)


def residual(name, value, tol, note="", **context) -> Residual:
    value = float(value)
    if math.isnan(value) and not note:
        note = "NaN residual"
    return Residual(name, value, float(tol), context, note)
