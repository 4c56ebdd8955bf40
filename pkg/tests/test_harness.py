import json
from dataclasses import replace

import pytest

from qgroup_monodromy.coeff import Q, RatFun, qnum
from qgroup_monodromy.errors import ConfigError, RankError
from qgroup_monodromy.framework import CheckStatus, Comparison, ReportEntry, ReportLogger
from qgroup_monodromy.harness import (
    CHECK_NAMES,
    EQUATION_CATALOGUE,
    PATTERN_EXTENSION_PREFIX,
    REGISTRY,
    CheckConfig,
    CheckSpec,
    judge_exact,
    judge_numeric,
    numeric_point,
    render_report,
    run_checks,
    run_single,
)

GOLDEN_CHECKS = ("qybe", "braid", "eps_contract", "cartan_det", "cartan_inverse", "vacuum_weights")


def test_check_names_are_stable():
    assert CHECK_NAMES == (
        "qybe", "braid", "far_commute", "eps_contract", "serre", "hopf_axioms", "matrix_coproduct",
        "counit_vacuum", "exchange_mpm", "reflection", "rm_relations", "dmpm_relations", "mpm_qcomm",
        "unipotent_inverse", "detq_mpm", "detq_free_golden", "detq_m", "cartan_det", "cartan_inverse",
        "dyn_identity", "dyn_rp_inverse", "mp_spec", "vacuum_weights",
    )


def test_catalogue_is_fully_covered():
    """Every catalogued equation is claimed by some check, and every claimed tag is catalogued"""
    claimed = {tag for spec in REGISTRY.values() for tag in spec.tags}
    assert claimed == set(EQUATION_CATALOGUE)


def test_qybe_single_entry():
    entries = run_checks(CheckConfig(n_values=(2,), checks=("qybe",)))
    assert len(entries) == 1
    assert entries[0].status is CheckStatus.PASS
    assert entries[0].paper_equation == "Eq. (QYBE)"


def test_golden_report(golden):
    entries = run_checks(CheckConfig(n_values=(2,), checks=GOLDEN_CHECKS))
    assert render_report(entries).decode("utf-8").strip() == golden("report_small.json")


def test_worker_count_does_not_change_report():
    """The default report is byte-identical with one and two workers, and nothing fails"""
    cfg = CheckConfig()
    entries = run_checks(cfg)
    assert not [e for e in entries if e.status is CheckStatus.FAIL]
    parallel = render_report(run_checks(replace(cfg, workers=2)))
    assert render_report(entries) == parallel


def test_rank_four_report_passes():
    entries = run_checks(CheckConfig(n_values=(4,), rep_degree=2))
    failures = [f"{e.check_name} {e.representation}: {e.witness}" for e in entries if e.status is CheckStatus.FAIL]
    assert not failures


def test_rank_outside_support_is_skipped():
    entries = run_checks(CheckConfig(n_values=(2,), checks=("serre",)))
    assert [e.status for e in entries] == [CheckStatus.SKIPPED]
    assert entries[0].representation == "-"
    assert "outside supported ranks" in entries[0].witness


def test_library_errors_become_failures(mocker):
    def boom(n, reps):
        raise RankError("no table for this rank")

    mocker.patch.dict(REGISTRY, {"qybe": CheckSpec("qybe", boom, (2, 3, 4), ("QYBE",), pattern_sensitive=True)})
    cfg = CheckConfig(n_values=(2, 4), checks=("qybe",), numeric_h=5)
    entries = run_checks(cfg)
    assert [e.status for e in entries] == [CheckStatus.FAIL, CheckStatus.FAIL]
    assert entries[0].witness == "RankError: no table for this rank"
    assert entries[1].witness.startswith(PATTERN_EXTENSION_PREFIX)


def test_mismatch_becomes_failure_with_witness(mocker):
    def wrong(n, reps):
        return [Comparison("scalar", "[2] = q", RatFun(qnum(2)), RatFun(Q), tag="QYBE")]

    mocker.patch.dict(REGISTRY, {"qybe": CheckSpec("qybe", wrong, (2,), ("QYBE",))})
    entry, = run_single("qybe", 2, CheckConfig(n_values=(2,)))
    assert entry.status is CheckStatus.FAIL
    assert entry.witness == "[2] = q [value]: lhs - rhs = q^-1"


def test_config_problems_are_collected():
    cfg = CheckConfig(n_values=(5,), checks=("qybe", "nope"), rep_degree=9, workers=0, numeric_h=7)
    with pytest.raises(ConfigError) as exc:
        cfg.validate()
    problems = exc.value.problems
    assert len(problems) == 4
    assert any("nope" in p for p in problems)


def test_numeric_h_must_exceed_rank():
    with pytest.raises(ConfigError):
        CheckConfig(n_values=(4,), numeric_h=4).validate()


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("QGM_N_VALUES", "2,3")
    monkeypatch.setenv("QGM_CHECKS", "qybe, braid")
    cfg = CheckConfig.from_env(workers=None, rep_degree=1)
    assert cfg.n_values == (2, 3)
    assert cfg.checks == ("qybe", "braid")
    assert cfg.rep_degree == 1
    assert cfg.workers == 1


def test_config_from_env_rejects_garbage(monkeypatch):
    monkeypatch.setenv("QGM_REP_DEGREE", "three")
    with pytest.raises(ConfigError) as exc:
        CheckConfig.from_env()
    assert "QGM_REP_DEGREE" in str(exc.value)


def test_numeric_backend():
    entries = run_checks(CheckConfig(n_values=(2,), checks=("qybe", "dyn_identity"), backend="numeric"))
    assert {e.backend for e in entries} == {"numeric"}
    assert all(e.status is CheckStatus.PASS for e in entries)


def test_judges_agree_on_identity():
    cmp = Comparison("scalar", "[2] lambda = q^2 - q^-2", RatFun(qnum(2) * (Q - Q ** -1)), RatFun(Q ** 2 - Q ** -2))
    assert judge_exact(cmp) is None
    assert judge_numeric(cmp, numeric_point(CheckConfig())) is None


def test_numeric_judge_reports_distance():
    cmp = Comparison("scalar", "q = 1", RatFun(Q), RatFun(1))
    witness = judge_numeric(cmp, numeric_point(CheckConfig()))
    assert witness.startswith("q = 1 [value]: |lhs - rhs| = ")


def test_render_empty_report():
    assert render_report([]) == b"[]"


def test_render_json_and_text():
    entry = ReportEntry("qybe", 2, "exact", "scalar", CheckStatus.PASS, "Eq. (QYBE)", wall_time=0.25)
    data = json.loads(render_report([entry]))
    assert data == [{
        "check_name": "qybe", "n": 2, "backend": "exact", "representation": "scalar",
        "status": "pass", "paper_equation": "Eq. (QYBE)", "witness": None,
    }]
    timed = json.loads(render_report([entry], include_timings=True))
    assert timed[0]["wall_time"] == 0.25
    text = render_report([entry], "text").decode("utf-8")
    assert text.splitlines()[0].split() == [
        "check_name", "n", "backend", "representation", "status", "paper_equation", "witness",
    ]
    assert "Eq. (QYBE)" in text
    with pytest.raises(ConfigError):
        render_report([entry], "yaml")


def test_report_logger_receives_entries():
    report_logger = ReportLogger()
    run_checks(CheckConfig(n_values=(2,), checks=("qybe", "serre")), report_logger)
    summary = report_logger.summarize()
    assert summary["status_counts"] == {"pass": 1, "skipped": 1}
    assert len(report_logger.session_log) == 2
