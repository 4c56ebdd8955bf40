"""Structured check results and the run logger."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional

__all__ = [
    "CheckStatus",
    "Backend",
    "Comparison",
    "ReportEntry",
    "ReportLogger",
    "generate_summary_report",
    "setup_logger",
    "LOGGER_NAME",
]

LOGGER_NAME = "qgroup_monodromy"


class CheckStatus(Enum):
    """Verdict of one report entry"""
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class Backend(Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Comparison:
    """One asserted identity ``lhs == rhs``.

    ``lhs`` and ``rhs`` are coefficients, NCElem/NCTensor values, SparseMatrix
    values, or dictionaries of those compared key by key.  ``tag`` names the
    catalogue equation the identity belongs to; ``None`` means the check's
    primary equation.
    """
    representation: str
    relation: str
    lhs: Any
    rhs: Any
    tag: Optional[str] = None


@dataclass(frozen=True)
class ReportEntry:
    """Structured verdict for one (check, n, representation, equation)"""
    check_name: str
    n: int
    backend: str
    representation: str
    status: CheckStatus
    paper_equation: str
    witness: Optional[str] = None
    wall_time: float = 0.0

    def to_dict(self, include_timings: bool = False) -> Dict[str, Any]:
        data = {
            "check_name": self.check_name,
            "n": self.n,
            "backend": self.backend,
            "representation": self.representation,
            "status": self.status.value,
            "paper_equation": self.paper_equation,
            "witness": self.witness,
        }
        if include_timings:
            data["wall_time"] = round(self.wall_time, 6)
        return data


class ReportLogger:
    """Collects report entries and aggregates run insights"""

    def __init__(self):
        self.session_log: List[ReportEntry] = []
        self.insights = {
            "status_counts": defaultdict(int),
            "failures_by_check": defaultdict(list),
            "entries_by_representation": defaultdict(int),
            "wall_time_by_check": defaultdict(float),
        }

    def log_entry(self, entry: ReportEntry) -> None:
        self.session_log.append(entry)
        self._update_insights(entry)

    def _update_insights(self, entry: ReportEntry) -> None:
        self.insights["status_counts"][entry.status.value] += 1
        self.insights["entries_by_representation"][entry.representation] += 1
        self.insights["wall_time_by_check"][entry.check_name] += entry.wall_time
        if entry.status is CheckStatus.FAIL:
            self.insights["failures_by_check"][entry.check_name].append(
                f"n={entry.n} {entry.representation}: {entry.witness}"
            )

    def summarize(self) -> Dict[str, Dict[str, Any]]:
        return {key: dict(value) for key, value in self.insights.items()}


def generate_summary_report(summary: Dict[str, Dict[str, Any]]) -> str:
    """Human-readable summary of ``ReportLogger.summarize()``."""
    report = []
    if summary.get("status_counts"):
        report.append("### Verdicts")
        for status in ("pass", "fail", "skipped"):
            if status in summary["status_counts"]:
                report.append(f"- {status}: {summary['status_counts'][status]}")

    if summary.get("failures_by_check"):
        report.append("\n### Failures")
        for check, witnesses in sorted(summary["failures_by_check"].items()):
            for witness in witnesses:
                report.append(f"- {check} ({witness})")

    if summary.get("entries_by_representation"):
        report.append("\n### Representations")
        for rep, count in sorted(summary["entries_by_representation"].items()):
            report.append(f"- {rep}: {count} entries")

    if summary.get("wall_time_by_check"):
        report.append("\n### Time per Check")
        for check, seconds in sorted(summary["wall_time_by_check"].items()):
            report.append(f"- {check}: {seconds:.3f}s")

    return "\n".join(report)


def setup_logger(debug: bool = False) -> logging.Logger:
    """Attach one stream handler to the package logger"""
    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if debug else logging.WARNING)
    return logger
