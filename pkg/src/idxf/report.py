"""Machine-readable verification reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["VerificationReport", "jsonable"]


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars, arrays and complex numbers into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class VerificationReport:
    """Outcome of one check: the worst error over its cases against a tolerance.

    ``passed`` is derived, never stored independently, so it always equals
    ``max_abs_error <= tolerance``.
    """

    check: str
    parameters: dict
    max_abs_error: float
    tolerance: float
    cases: list = field(default_factory=list)
    errata_notes: list = field(default_factory=list)
    expect_failure: bool = False

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_abs_error) and self.max_abs_error <= self.tolerance)

    @property
    def ok(self) -> bool:
        """``passed`` for ordinary checks, its negation for expected-failure checks."""
        return self.passed != self.expect_failure

    def to_dict(self) -> dict:
        return jsonable({
            "check": self.check,
            "parameters": self.parameters,
            "max_abs_error": float(self.max_abs_error),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "expect_failure": self.expect_failure,
            "ok": self.ok,
            "cases": self.cases,
            "errata_notes": self.errata_notes,
        })
