"""Verification reports and tabular output rendering.

A VerificationReport records one numeric or property check: what was
expected, what came out, the tolerance it was held to, and where the
expected value comes from ("paper" for a published reference value,
"trivial" for a mathematical identity, "derived" for an independently
computed oracle).  OutputTable renders rectangular numeric results as CSV
(17 significant digits) or JSON.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import List, Sequence, Union

__all__ = [
    "VerificationReport",
    "OutputTable",
    "numeric_report",
    "property_report",
]

PROVENANCES = ("paper", "trivial", "derived")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    ``expected`` is a reference value for numeric checks or the string
    "property" when ``computed`` is a measured deviation that must stay
    below ``tolerance``.
    """

    check_id: str
    expected: Union[float, str]
    computed: float
    tolerance: float
    provenance: str
    passed: bool
    runtime_ms: int = 0

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")

    def row(self) -> str:
        exp = (self.expected if isinstance(self.expected, str)
               else f"{self.expected:.10g}")
        status = "pass" if self.passed else "FAIL"
        return (f"{status}  {self.check_id:<42} expected={exp:<16} "
                f"computed={self.computed:.10g}  tol={self.tolerance:.1e}  "
                f"[{self.provenance}]  {self.runtime_ms} ms")


def numeric_report(check_id: str, expected: float, computed: float,
                   tolerance: float, provenance: str,
                   runtime_ms: int = 0) -> VerificationReport:
    """Check |computed - expected| <= tolerance."""
    ok = math.isfinite(computed) and abs(computed - expected) <= tolerance
    return VerificationReport(check_id, float(expected), float(computed),
                              tolerance, provenance, ok, runtime_ms)


def property_report(check_id: str, deviation: float, tolerance: float,
                    provenance: str, runtime_ms: int = 0) -> VerificationReport:
    """Check a measured deviation against its tolerance."""
    ok = math.isfinite(deviation) and abs(deviation) <= tolerance
    return VerificationReport(check_id, "property", float(deviation),
                              tolerance, provenance, ok, runtime_ms)


class _Timer:
    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int(round(1000 * (time.perf_counter() - self._t0)))
        return False


def timer() -> _Timer:
    """Context manager measuring elapsed milliseconds (attribute ``ms``)."""
    return _Timer()


@dataclass
class OutputTable:
    """Rectangular numeric table with CSV and JSON renderings."""

    columns: List[str]
    rows: List[Sequence[float]]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("ragged row in output table")

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for r in self.rows:
            lines.append(",".join(f"{float(v):.17g}" for v in r))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "columns": list(self.columns),
            "rows": [[float(v) for v in r] for r in self.rows],
            "meta": self.meta,
        }
        return json.dumps(payload) + "\n"

    def render(self, format: str) -> str:
        if format == "csv":
            return self.to_csv()
        if format == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {format!r}")
