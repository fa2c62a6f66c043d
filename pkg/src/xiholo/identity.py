"""Two-sided identity checks: both sides computed independently, residual recorded."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class IdentityReport:
    id: str
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    params: dict = field(default_factory=dict)
    note: str = ""
    # True when the identity is known to be doubtful as stated; never fatal
    suspect: bool = False


def compare(id: str, lhs, rhs, params: dict | None = None, note: str = "",
            suspect: bool = False) -> IdentityReport:
    lhs, rhs = complex(lhs), complex(rhs)
    diff = abs(lhs - rhs)
    rel = diff / abs(rhs) if rhs != 0 else diff
    return IdentityReport(id, lhs, rhs, diff, rel, dict(params or {}), note, suspect)


def failed_report(id: str, params: dict | None, exc: Exception) -> IdentityReport:
    """Placeholder for an identity whose evaluation raised; keeps the suite going."""
    nan = complex(float("nan"), float("nan"))
    return IdentityReport(id, nan, nan, float("inf"), float("inf"), dict(params or {}),
                          f"evaluation failed: {type(exc).__name__}: {exc}", False)
