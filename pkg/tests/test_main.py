import json
from unittest.mock import patch

from qgroup_monodromy.framework import CheckStatus, ReportEntry
from qgroup_monodromy.main import build_parser, main


def _entry(status):
    return ReportEntry("qybe", 2, "exact", "scalar", status, "Eq. (QYBE)",
                       witness=None if status is CheckStatus.PASS else "R12 R13 R23 = R23 R13 R12 [0/0]: lhs - rhs = q")


def test_parser_collects_repeated_flags():
    args = build_parser().parse_args(["--n", "2", "--n", "3", "--check", "qybe", "--check", "braid"])
    assert args.n_values == [2, 3]
    assert args.checks == ["qybe", "braid"]
    assert args.fmt == "json"


def test_main_writes_json_report(tmp_path):
    """A passing run exits 0 and writes the report file"""
    out = tmp_path / "report.json"
    assert main(["--n", "2", "--check", "qybe", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data[0]["status"] == "pass"
    assert data[0]["paper_equation"] == "Eq. (QYBE)"


def test_main_reports_failures(mocker, capsysbinary):
    """Any failing entry gives exit status 1"""
    mock_run = mocker.patch("qgroup_monodromy.main.run_checks",
                            return_value=[_entry(CheckStatus.PASS), _entry(CheckStatus.FAIL)])
    assert main(["--n", "2"]) == 1
    mock_run.assert_called_once()
    cfg = mock_run.call_args[0][0]
    assert cfg.n_values == (2,)
    out = json.loads(capsysbinary.readouterr().out)
    assert [e["status"] for e in out] == ["pass", "fail"]


def test_main_rejects_unknown_check(capsys):
    assert main(["--check", "nonsense"]) == 2
    assert "unknown checks: nonsense" in capsys.readouterr().err


def test_main_rejects_bad_environment(monkeypatch, capsys):
    monkeypatch.setenv("QGM_WORKERS", "many")
    assert main([]) == 2
    assert "QGM_WORKERS" in capsys.readouterr().err


def test_text_format_appends_summary(capsysbinary):
    assert main(["--n", "2", "--check", "qybe", "--format", "text", "--timings"]) == 0
    text = capsysbinary.readouterr().out.decode("utf-8")
    assert text.startswith("check_name")
    assert "wall_time" in text.splitlines()[0]
    assert "### Verdicts\n- pass: 1" in text


@patch("qgroup_monodromy.main.run_checks", return_value=[])
def test_no_entries_prints_empty_list(mock_run, capsysbinary):
    assert main(["--check", "braid"]) == 0
    assert capsysbinary.readouterr().out == b"[]"


def test_flags_override_environment(mocker, monkeypatch):
    monkeypatch.setenv("QGM_BACKEND", "numeric")
    mock_run = mocker.patch("qgroup_monodromy.main.run_checks", return_value=[])
    assert main(["--backend", "exact", "--rep-degree", "1", "--workers", "2"]) == 0
    cfg = mock_run.call_args[0][0]
    assert (cfg.backend, cfg.rep_degree, cfg.workers) == ("exact", 1, 2)
