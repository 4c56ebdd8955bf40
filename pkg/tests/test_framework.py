import logging

import pytest

from qgroup_monodromy.framework import (
    LOGGER_NAME,
    CheckStatus,
    ReportEntry,
    ReportLogger,
    generate_summary_report,
    setup_logger,
)


@pytest.fixture
def report_logger():
    return ReportLogger()


def _entry(check, status, rep="fund", n=2, witness=None, wall_time=0.5):
    return ReportEntry(check, n, "exact", rep, status, "Eq. (QYBE)", witness, wall_time)


def test_log_entry(report_logger):
    report_logger.log_entry(_entry("qybe", CheckStatus.PASS))
    assert len(report_logger.session_log) == 1


def test_insight_aggregation(report_logger):
    """Counts, failures and timings accumulate across entries"""
    for entry in (
        _entry("qybe", CheckStatus.PASS),
        _entry("qybe", CheckStatus.PASS, rep="fund^2"),
        _entry("rm_relations", CheckStatus.FAIL, witness="RM [1/2]: lhs - rhs = q"),
        _entry("serre", CheckStatus.SKIPPED, rep="-", wall_time=0.0),
    ):
        report_logger.log_entry(entry)

    insights = report_logger.insights
    assert insights["status_counts"]["pass"] == 2
    assert insights["entries_by_representation"]["fund"] == 2
    assert insights["failures_by_check"]["rm_relations"] == ["n=2 fund: RM [1/2]: lhs - rhs = q"]
    assert insights["wall_time_by_check"]["qybe"] == pytest.approx(1.0)


def test_summary_report_sections(report_logger):
    report_logger.log_entry(_entry("qybe", CheckStatus.PASS))
    report_logger.log_entry(_entry("braid", CheckStatus.FAIL, witness="boom"))
    report = generate_summary_report(report_logger.summarize())
    assert report.startswith("### Verdicts\n- pass: 1\n- fail: 1")
    assert "### Failures\n- braid (n=2 fund: boom)" in report
    assert "- fund: 2 entries" in report
    assert "- qybe: 0.500s" in report


def test_empty_summary():
    assert generate_summary_report(ReportLogger().summarize()) == ""


def test_entry_serialization():
    entry = _entry("serre", CheckStatus.SKIPPED, wall_time=1.23456789)
    assert "wall_time" not in entry.to_dict()
    assert entry.to_dict(include_timings=True)["wall_time"] == 1.234568
    assert list(entry.to_dict()) == [
        "check_name", "n", "backend", "representation", "status", "paper_equation", "witness",
    ]


def test_setup_logger_is_idempotent():
    first = setup_logger()
    second = setup_logger(debug=True)
    assert first is second is logging.getLogger(LOGGER_NAME)
    assert len(second.handlers) == 1
    assert second.level == logging.DEBUG
