"""Pass/fail records for identity checks."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
EXACT_RESIDUAL = "exact"


@dataclass
class CheckRecord:
    """Outcome of a single named identity check.

    ``residual`` is the string ``"exact"`` for checks decided by exact
    equality and otherwise the largest observed discrepancy (as a float).
    """

    name: str
    ref: str
    status: str
    residual: float | str = EXACT_RESIDUAL
    elapsed: float = 0.0
    detail: str = ""

    def to_json(self, include_elapsed: bool = False) -> dict:
        out = {"name": self.name, "ref": self.ref, "status": self.status,
               "residual": self.residual}
        if self.detail:
            out["detail"] = self.detail
        if include_elapsed:
            out["elapsed"] = round(self.elapsed, 6)
        return out


@dataclass
class VerificationReport:
    """Collection of check records, kept unique by name."""

    checks: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def add(self, rec: CheckRecord) -> CheckRecord:
        if rec.name in self.checks:
            raise ValueError(f"duplicate check name {rec.name!r}")
        self.checks[rec.name] = rec
        return rec

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        for rec in other.checks.values():
            self.add(rec)
        return self

    def run(self, name: str, ref: str, fn: Callable[[], tuple]) -> CheckRecord:
        """Execute ``fn`` and record its verdict.

        ``fn`` returns ``(ok, residual)`` or ``(ok, residual, detail)``; it
        may also return ``None`` to mark the check as skipped.  Exceptions
        are recorded as failures.
        """
        start = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:  # a raised error is a failed identity
            rec = CheckRecord(name, ref, FAIL, float("nan"),
                              time.perf_counter() - start,
                              f"{type(exc).__name__}: {exc}")
            return self.add(rec)
        elapsed = time.perf_counter() - start
        if out is None:
            return self.add(CheckRecord(name, ref, SKIPPED, EXACT_RESIDUAL, elapsed))
        ok, residual, *rest = out
        if residual != EXACT_RESIDUAL:
            residual = float(residual)
        return self.add(CheckRecord(name, ref, PASS if ok else FAIL, residual,
                                    elapsed, rest[0] if rest else ""))

    @property
    def status(self) -> str:
        return FAIL if any(r.status == FAIL for r in self.checks.values()) else PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def sorted_checks(self) -> list[CheckRecord]:
        return [self.checks[k] for k in sorted(self.checks)]

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.sorted_checks() if r.status == FAIL]

    def to_json(self, include_elapsed: bool = False) -> dict:
        return {
            "schema": 1,
            "config": self.config,
            "checks": [r.to_json(include_elapsed) for r in self.sorted_checks()],
            "status": self.status,
        }

    def dumps(self, include_elapsed: bool = False) -> str:
        return json.dumps(self.to_json(include_elapsed), indent=2, sort_keys=True)

    def to_text(self, include_elapsed: bool = False) -> str:
        lines = []
        for r in self.sorted_checks():
            res = r.residual if isinstance(r.residual, str) else f"{r.residual:.3e}"
            line = f"{r.status.upper():7s} {r.name}  [{r.ref}]  residual={res}"
            if include_elapsed:
                line += f"  ({r.elapsed:.3f}s)"
            if r.detail and r.status != PASS:
                line += f"  {r.detail}"
            lines.append(line)
        counts = {s: sum(r.status == s for r in self.checks.values())
                  for s in (PASS, FAIL, SKIPPED)}
        lines.append(f"overall: {self.status}  ({counts[PASS]} passed, "
                     f"{counts[FAIL]} failed, {counts[SKIPPED]} skipped)")
        return "\n".join(lines)


def poly_residual(diff) -> float | str:
    """Residual of a polynomial difference: ``"exact"`` or its max modulus."""
    if diff.is_zero():
        return EXACT_RESIDUAL
    return float(diff.norm_inf())
