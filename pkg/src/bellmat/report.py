"""Verification reports shared by every identity checker."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass
class VerificationReport:
    check: str
    params: dict[str, Any] = field(default_factory=dict)
    passed: bool = False
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)
    # informational reports are recorded but never decide an exit code
    informational: bool = False
    elapsed: float = 0.0

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "check": self.check,
            "params": self.params,
            "passed": self.passed,
            "witness": self.witness,
        }
        if self.details:
            out["details"] = self.details
        if self.informational:
            out["informational"] = True
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def to_line(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, default=str)

    def to_text(self, timing: bool = False) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.informational:
            status = "INFO:" + status
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{status:<10} {self.check:<28} {params}"
        if self.witness:
            line += f"  witness={self.witness}"
        if timing:
            line += f"  ({self.elapsed:.3f}s)"
        return line


@contextmanager
def timed(report: VerificationReport) -> Iterator[VerificationReport]:
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed = time.perf_counter() - start


def all_passed(reports: list[VerificationReport]) -> bool:
    return all(r.passed for r in reports if not r.informational)
