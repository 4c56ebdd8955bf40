import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from qgroup_monodromy.harness import judge_exact
from qgroup_monodromy.uq import configured_reps, fundamental_rep

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def set_env_vars(monkeypatch):
    """Small, deterministic defaults so no test depends on the caller's shell."""
    monkeypatch.setenv("QGM_N_VALUES", "2")
    monkeypatch.setenv("QGM_CHECKS", "")
    monkeypatch.setenv("QGM_BACKEND", "exact")
    monkeypatch.setenv("QGM_REP_DEGREE", "2")
    monkeypatch.setenv("QGM_NUMERIC_H", "5")
    monkeypatch.setenv("QGM_NUMERIC_SEED", "0")
    monkeypatch.setenv("QGM_NUMERIC_W", "2")
    monkeypatch.setenv("QGM_NUMERIC_U", "1")
    monkeypatch.setenv("QGM_WORKERS", "1")
    monkeypatch.setenv("QGM_DEBUG", "0")


@pytest.fixture
def golden():
    def read(name: str) -> str:
        return (GOLDEN_DIR / name).read_text(encoding="utf-8").strip()
    return read


@pytest.fixture
def reps2():
    return configured_reps(2, 2)


@pytest.fixture
def fund3():
    return (fundamental_rep(3),)


@pytest.fixture(scope="session")
def reps3():
    """fund and fund^2 at n = 3"""
    return configured_reps(3, 2)


@pytest.fixture(scope="session")
def reps4():
    return configured_reps(4, 1)


@pytest.fixture
def assert_holds():
    """Judge every comparison exactly and fail with the first witness."""
    def check(comparisons):
        assert comparisons, "no comparisons produced"
        failures = [w for w in (judge_exact(c) for c in comparisons) if w is not None]
        assert not failures, failures[0]
    return check
