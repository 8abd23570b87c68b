"""Pass/fail records produced by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .exact import OperatorPolynomial, TensorOperator


@dataclass(frozen=True)
class CheckResult:
    check: str
    equation: str
    status: bool
    detail: str = ""
    first_discrepancy: dict[str, Any] | None = field(default=None)

    @property
    def passed(self) -> bool:
        return self.status

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "equation": self.equation,
            "status": "pass" if self.status else "fail",
            "detail": self.detail,
        }
        if self.first_discrepancy is not None:
            out["first_discrepancy"] = self.first_discrepancy
        return out

    def __str__(self) -> str:
        flag = "PASS" if self.status else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{flag}] {self.check}: {self.equation}{extra}"


def discrepancy(lhs, rhs, **where) -> dict | None:
    """Locate the first entry where two operators/polynomials differ."""
    diff = lhs.first_difference(rhs)
    if diff is None:
        return None
    if isinstance(lhs, OperatorPolynomial):
        power, row, col, a, b = diff
        loc = {"power": power, "row": row, "col": col}
    else:
        row, col, a, b = diff
        loc = {"row": row, "col": col}
    return {**where, **loc, "lhs": str(a), "rhs": str(b)}


def compare(check: str, equation: str, lhs, rhs, detail: str = "", **where) -> CheckResult:
    if isinstance(lhs, (TensorOperator, OperatorPolynomial)) and lhs.shape != rhs.shape:
        return CheckResult(
            check, equation, False, f"shape mismatch {lhs.shape} vs {rhs.shape}",
            {**where, "reason": "shape"},
        )
    found = discrepancy(lhs, rhs, **where)
    return CheckResult(check, equation, found is None, detail, found)


def compare_blocks(check: str, equation: str, lhs, rhs, detail: str = "") -> CheckResult:
    """Compare two nested lists of operators block by block."""
    for i, (row_l, row_r) in enumerate(zip(lhs, rhs)):
        for j, (a, b) in enumerate(zip(row_l, row_r)):
            found = discrepancy(a, b, block_row=i, block_col=j)
            if found is not None:
                return CheckResult(check, equation, False, detail, found)
    return CheckResult(check, equation, True, detail)


def all_passed(results) -> bool:
    return all(r.status for r in results)
