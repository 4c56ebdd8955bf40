"""Check registry, configuration, judging and report rendering."""
from __future__ import annotations

import json
import logging
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath

from .coeff import RatFun, eval_at_root
from .dynrmat import (
    check_dynamical_identity,
    check_mp_spec,
    check_rp_inverse,
    check_vacuum_weights,
)
from .errors import ConfigError, NumericDomainError, QGroupError
from .framework import Backend, CheckStatus, Comparison, ReportEntry, ReportLogger
from .linalg import SparseMatrix, as_coefficient
from .ncalg import NCElem, NCTensor, check_serre
from .rmat import (
    TensorOp,
    check_braid,
    check_detq_free_golden,
    check_eps_contract,
    check_exchange_Mpm,
    check_far_commute,
    check_qdet_M,
    check_qdet_Mpm,
    check_qybe,
    check_reflection,
)
from .uq import (
    MAX_REP_DEGREE,
    TABLE_RANKS,
    AlgMatrix,
    check_cartan_det,
    check_cartan_inverse,
    check_counit_vacuum,
    check_dmpm_relations,
    check_hopf_axioms,
    check_matrix_coproduct,
    check_mpm_qcomm,
    check_rm_relations,
    check_unipotent_inverse,
    configured_reps,
)

__all__ = [
    "EQUATION_CATALOGUE",
    "catalogue_label",
    "CheckSpec",
    "REGISTRY",
    "CHECK_NAMES",
    "CheckConfig",
    "run_single",
    "run_checks",
    "render_report",
    "NUMERIC_TOLERANCE",
    "PATTERN_EXTENSION_PREFIX",
]

logger = logging.getLogger(__name__)

NUMERIC_TOLERANCE = mpmath.mpf("1e-10")
PATTERN_EXTENSION_PREFIX = "pattern-extension failure: "
_NUMERIC_WEIGHT_COUNT = 4

# ── Equation catalogue ───────────────────────────────────────────────────

EQUATION_CATALOGUE: Dict[str, str] = {
    tag: f"Eq. ({tag})"
    for tag in (
        "QYBE", "exM", "exMpm", "Hopf-FRT", "factorM",
        "CRq", "Sq", "coalg", "R", "RM", "MpmD1", "dMpm", "DeltaMpm", "MpmFE",
        "dkk", "dk", "xiyi", "M+i2", "MpmMpmq", "Sq-alt", "MpmNpmD", "Hh", "hH",
        "Uqvac", "MD2", "MD3", "MD3inv",
        "Mpa=aM", "aMp", "RpHIOPT", "RpMpn2", "diagM-q2s", "qpan",
        "detM", "q-eps", "detMpmvar1", "MMMpm", "RMn2", "DqMn2", "Mab2", "detqMn=2",
    )
}
EQUATION_CATALOGUE["det-c"] = "footnote (det c^(n) = n)"


def catalogue_label(tag: str) -> str:
    return EQUATION_CATALOGUE[tag]


# ── Registry ─────────────────────────────────────────────────────────────

CheckFunc = Callable[[int, Sequence], List[Comparison]]


@dataclass(frozen=True)
class CheckSpec:
    """A registered check: callable, supported ranks and catalogue tags"""
    name: str
    func: CheckFunc
    ranks: Tuple[int, ...]
    tags: Tuple[str, ...]
    uses_reps: bool = False
    # relies on the Cartan-Weyl entries beyond the displayed n = 3 tables
    pattern_sensitive: bool = False


ALL_RANKS = TABLE_RANKS
_SPECS = (
    CheckSpec("qybe", lambda n, reps: check_qybe(n), ALL_RANKS, ("QYBE",)),
    CheckSpec("braid", lambda n, reps: check_braid(n), ALL_RANKS, ("QYBE", "R")),
    CheckSpec("far_commute", lambda n, reps: check_far_commute(n), ALL_RANKS, ("QYBE",)),
    CheckSpec("eps_contract", lambda n, reps: check_eps_contract(n), ALL_RANKS, ("q-eps",)),
    CheckSpec("serre", check_serre, (3, 4), ("Sq", "Sq-alt"), uses_reps=True),
    CheckSpec("hopf_axioms", check_hopf_axioms, ALL_RANKS, ("coalg", "dk", "CRq"), uses_reps=True),
    CheckSpec("matrix_coproduct", check_matrix_coproduct, ALL_RANKS, ("Hopf-FRT", "DeltaMpm", "MpmFE", "xiyi"),
              uses_reps=True, pattern_sensitive=True),
    CheckSpec("counit_vacuum", check_counit_vacuum, ALL_RANKS, ("Uqvac", "Hopf-FRT"),
              uses_reps=True, pattern_sensitive=True),
    CheckSpec("exchange_mpm", check_exchange_Mpm, (2, 3), ("exMpm", "MpmNpmD", "M+i2", "MD2", "MD3", "dkk"),
              uses_reps=True),
    CheckSpec("reflection", check_reflection, (2, 3), ("exM", "factorM"), uses_reps=True),
    CheckSpec("rm_relations", check_rm_relations, ALL_RANKS, ("RM",), uses_reps=True, pattern_sensitive=True),
    CheckSpec("dmpm_relations", check_dmpm_relations, ALL_RANKS, ("dMpm", "MpmD1"),
              uses_reps=True, pattern_sensitive=True),
    CheckSpec("mpm_qcomm", check_mpm_qcomm, (3, 4), ("MpmMpmq",), uses_reps=True, pattern_sensitive=True),
    CheckSpec("unipotent_inverse", check_unipotent_inverse, ALL_RANKS, ("MD3inv",),
              uses_reps=True, pattern_sensitive=True),
    CheckSpec("detq_mpm", check_qdet_Mpm, ALL_RANKS, ("detMpmvar1",), uses_reps=True, pattern_sensitive=True),
    CheckSpec("detq_free_golden", lambda n, reps: check_detq_free_golden(n), (2,), ("detM", "DqMn2", "RMn2")),
    CheckSpec("detq_m", check_qdet_M, (2, 3), ("MMMpm", "detqMn=2", "Mab2"), uses_reps=True),
    CheckSpec("cartan_det", lambda n, reps: check_cartan_det(n), ALL_RANKS, ("det-c",)),
    CheckSpec("cartan_inverse", lambda n, reps: check_cartan_inverse(n), ALL_RANKS, ("hH", "Hh")),
    CheckSpec("dyn_identity", lambda n, reps: check_dynamical_identity(), (2,),
              ("RpHIOPT", "aMp", "diagM-q2s", "RpMpn2")),
    CheckSpec("dyn_rp_inverse", lambda n, reps: check_rp_inverse(), (2,), ("RpMpn2",)),
    CheckSpec("mp_spec", lambda n, reps: check_mp_spec(n), ALL_RANKS, ("Mpa=aM",)),
    CheckSpec("vacuum_weights", lambda n, reps: check_vacuum_weights(n), ALL_RANKS, ("qpan",)),
)

REGISTRY: Dict[str, CheckSpec] = {spec.name: spec for spec in _SPECS}
CHECK_NAMES: Tuple[str, ...] = tuple(REGISTRY)


# ── Configuration ────────────────────────────────────────────────────────


def _parse_ints(text: str, name: str, problems: List[str]) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        problems.append(f"{name} must be a comma-separated list of integers, got {text!r}")
        return ()


def _parse_int(text: str, name: str, problems: List[str], default: int) -> int:
    try:
        return int(text)
    except ValueError:
        problems.append(f"{name} must be an integer, got {text!r}")
        return default


def _parse_fraction(text: str, name: str, problems: List[str], default: Fraction) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        problems.append(f"{name} must be a rational number, got {text!r}")
        return default


@dataclass(frozen=True)
class CheckConfig:
    """Which checks run, at which ranks, and how they are judged"""
    n_values: Tuple[int, ...] = (2, 3)
    checks: Tuple[str, ...] = CHECK_NAMES
    backend: str = Backend.EXACT.value
    rep_degree: int = 3
    numeric_h: int = 5
    numeric_seed: int = 0
    numeric_w: Fraction = Fraction(2)
    numeric_u: Fraction = Fraction(1)
    workers: int = 1
    include_timings: bool = False

    def problems(self) -> List[str]:
        found = []
        unknown = sorted(set(self.checks) - set(REGISTRY))
        if unknown:
            found.append(f"unknown checks: {', '.join(unknown)}")
        if not self.n_values:
            found.append("no ranks selected")
        bad_n = sorted(set(self.n_values) - set(TABLE_RANKS))
        if bad_n:
            found.append(f"n must be in {set(TABLE_RANKS)}, got {bad_n}")
        if self.backend not in {b.value for b in Backend}:
            found.append(f"backend must be 'exact' or 'numeric', got {self.backend!r}")
        if not 1 <= self.rep_degree <= MAX_REP_DEGREE:
            found.append(f"rep_degree must be in 1..{MAX_REP_DEGREE}, got {self.rep_degree}")
        if self.n_values and self.numeric_h < max(self.n_values) + 1:
            found.append(f"numeric_h must be at least max(n) + 1 = {max(self.n_values) + 1}, got {self.numeric_h}")
        if self.workers < 1:
            found.append(f"workers must be at least 1, got {self.workers}")
        return found

    def validate(self) -> "CheckConfig":
        found = self.problems()
        if found:
            raise ConfigError(found)
        return self

    @classmethod
    def from_env(cls, **overrides) -> "CheckConfig":
        """Defaults from QGM_* environment variables, then explicit overrides."""
        problems: List[str] = []
        checks = tuple(c.strip() for c in os.getenv("QGM_CHECKS", "").split(",") if c.strip())
        values = dict(
            n_values=_parse_ints(os.getenv("QGM_N_VALUES", "2,3"), "QGM_N_VALUES", problems),
            checks=checks or CHECK_NAMES,
            backend=os.getenv("QGM_BACKEND", Backend.EXACT.value),
            rep_degree=_parse_int(os.getenv("QGM_REP_DEGREE", "3"), "QGM_REP_DEGREE", problems, 3),
            numeric_h=_parse_int(os.getenv("QGM_NUMERIC_H", "5"), "QGM_NUMERIC_H", problems, 5),
            numeric_seed=_parse_int(os.getenv("QGM_NUMERIC_SEED", "0"), "QGM_NUMERIC_SEED", problems, 0),
            numeric_w=_parse_fraction(os.getenv("QGM_NUMERIC_W", "2"), "QGM_NUMERIC_W", problems, Fraction(2)),
            numeric_u=_parse_fraction(os.getenv("QGM_NUMERIC_U", "1"), "QGM_NUMERIC_U", problems, Fraction(1)),
            workers=_parse_int(os.getenv("QGM_WORKERS", "1"), "QGM_WORKERS", problems, 1),
        )
        if problems:
            raise ConfigError(problems)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# ── Judging ──────────────────────────────────────────────────────────────


def _word_text(word) -> str:
    return " ".join(g.name for g in word) if word else "1"


def _flatten(value, prefix: Tuple = ()) -> Dict[Tuple, RatFun]:
    """Coefficient-valued entries of a comparison side, keyed by position."""
    if isinstance(value, Mapping):
        out: Dict[Tuple, RatFun] = {}
        for key, v in value.items():
            out.update(_flatten(v, prefix + (key,)))
        return out
    if isinstance(value, AlgMatrix):
        return _flatten(value.as_dict(), prefix)
    if isinstance(value, TensorOp):
        value = value.matrix
    if isinstance(value, SparseMatrix):
        return {prefix + (i, j): v for i, j, v in value.items()}
    if isinstance(value, NCElem):
        return {prefix + (_word_text(w),): c for w, c in value.terms()}
    if isinstance(value, NCTensor):
        return {prefix + (f"{_word_text(l)} (x) {_word_text(r)}",): c for (l, r), c in value.items()}
    return {prefix: as_coefficient(value)}


def _paired(cmp: Comparison) -> Iterable[Tuple[Tuple, RatFun, RatFun]]:
    lhs, rhs = _flatten(cmp.lhs), _flatten(cmp.rhs)
    zero = RatFun(0)
    for key in sorted(set(lhs) | set(rhs), key=str):
        yield key, lhs.get(key, zero), rhs.get(key, zero)


def _key_text(key: Tuple) -> str:
    return "/".join(str(k) for k in key) if key else "value"


def judge_exact(cmp: Comparison) -> Optional[str]:
    """None when both sides agree entrywise, else a witness naming the first offending entry."""
    for key, left, right in _paired(cmp):
        if not left == right:
            return f"{cmp.relation} [{_key_text(key)}]: lhs - rhs = {left - right}"
    return None


@dataclass(frozen=True)
class NumericPoint:
    h: int
    w: Fraction
    u: Fraction
    weights: Tuple[float, ...] = field(default_factory=tuple)


def numeric_point(cfg: "CheckConfig") -> NumericPoint:
    rng = random.Random(cfg.numeric_seed)
    weights = tuple(rng.uniform(1.5, 3.0) for _ in range(_NUMERIC_WEIGHT_COUNT))
    return NumericPoint(cfg.numeric_h, cfg.numeric_w, cfg.numeric_u, weights)


def _mp_value(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def judge_numeric(cmp: Comparison, point: NumericPoint) -> Optional[str]:
    """Evaluate both sides at q = exp(-i pi / h) and compare within NUMERIC_TOLERANCE."""
    w, u = _mp_value(point.w), _mp_value(point.u)
    for key, left, right in _paired(cmp):
        a = eval_at_root(left, point.h, w, u, point.weights)
        b = eval_at_root(right, point.h, w, u, point.weights)
        diff = abs(a - b)
        if diff > NUMERIC_TOLERANCE:
            return f"{cmp.relation} [{_key_text(key)}]: |lhs - rhs| = {mpmath.nstr(diff, 5)} at h={point.h}"
    return None


# ── Running ──────────────────────────────────────────────────────────────


def _skipped(spec: CheckSpec, n: int, backend: str) -> ReportEntry:
    ranks = ", ".join(str(r) for r in spec.ranks)
    return ReportEntry(spec.name, n, backend, "-", CheckStatus.SKIPPED, catalogue_label(spec.tags[0]),
                       witness=f"n={n} outside supported ranks {{{ranks}}}")


def _failed(spec: CheckSpec, n: int, backend: str, exc: QGroupError, elapsed: float) -> ReportEntry:
    witness = f"{type(exc).__name__}: {exc}"
    if n == 4 and spec.pattern_sensitive:
        witness = PATTERN_EXTENSION_PREFIX + witness
    return ReportEntry(spec.name, n, backend, "-", CheckStatus.FAIL, catalogue_label(spec.tags[0]),
                       witness=witness, wall_time=elapsed)


def run_single(name: str, n: int, cfg: CheckConfig) -> List[ReportEntry]:
    """All report entries of one (check, n) task, grouped by (representation, equation)."""
    spec = REGISTRY[name]
    backend = cfg.backend
    if n not in spec.ranks:
        return [_skipped(spec, n, backend)]
    logger.debug("running %s at n=%d", name, n)
    start = time.perf_counter()
    try:
        if backend == Backend.NUMERIC.value and n >= cfg.numeric_h:
            raise NumericDomainError(f"[{n}]! may vanish at h={cfg.numeric_h}")
        reps = configured_reps(n, cfg.rep_degree) if spec.uses_reps else ()
        comparisons = spec.func(n, reps)
        point = numeric_point(cfg) if backend == Backend.NUMERIC.value else None
        verdicts: Dict[Tuple[str, str], Optional[str]] = {}
        for cmp in comparisons:
            tag = cmp.tag or spec.tags[0]
            if tag not in spec.tags:
                raise KeyError(f"{name} emitted tag {tag!r} outside its declared tags {spec.tags}")
            key = (cmp.representation, tag)
            witness = judge_exact(cmp) if point is None else judge_numeric(cmp, point)
            if verdicts.get(key) is None:
                verdicts[key] = witness
    except QGroupError as exc:
        elapsed = time.perf_counter() - start
        logger.warning("%s n=%d raised %s", name, n, exc)
        return [_failed(spec, n, backend, exc, elapsed)]
    elapsed = time.perf_counter() - start
    logger.debug("%s n=%d finished in %.3fs", name, n, elapsed)

    entries = []
    for (rep, tag), witness in sorted(verdicts.items()):
        if witness is not None and n == 4 and spec.pattern_sensitive:
            witness = PATTERN_EXTENSION_PREFIX + witness
        status = CheckStatus.PASS if witness is None else CheckStatus.FAIL
        entries.append(ReportEntry(name, n, backend, rep, status, catalogue_label(tag), witness, elapsed))
    return entries


def _run_task(task: Tuple[str, int, CheckConfig]) -> List[ReportEntry]:
    name, n, cfg = task
    return run_single(name, n, cfg)


def _entry_order(entry: ReportEntry):
    return (entry.check_name, entry.n, entry.representation, entry.paper_equation)


def run_checks(cfg: CheckConfig, report_logger: Optional[ReportLogger] = None) -> List[ReportEntry]:
    """Run every (check, n) pair of the configuration; output order is deterministic."""
    cfg.validate()
    tasks = [(name, n, cfg) for name in sorted(set(cfg.checks)) for n in sorted(set(cfg.n_values))]
    if cfg.workers > 1 and len(tasks) > 1:
        with Pool(processes=cfg.workers) as pool:
            chunks = pool.map(_run_task, tasks)
    else:
        chunks = [_run_task(task) for task in tasks]
    entries = sorted((e for chunk in chunks for e in chunk), key=_entry_order)
    for entry in entries:
        if entry.status is CheckStatus.FAIL:
            logger.warning("%s n=%d %s failed: %s", entry.check_name, entry.n, entry.representation, entry.witness)
        if report_logger is not None:
            report_logger.log_entry(entry)
    return entries


# ── Rendering ────────────────────────────────────────────────────────────

_TEXT_COLUMNS = ("check_name", "n", "backend", "representation", "status", "paper_equation", "witness")


def _render_text(entries: Sequence[ReportEntry], include_timings: bool) -> str:
    columns = _TEXT_COLUMNS + (("wall_time",) if include_timings else ())
    rows = []
    for entry in entries:
        data = entry.to_dict(include_timings)
        rows.append(["" if data[c] is None else str(data[c]) for c in columns])
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def render_report(entries: Sequence[ReportEntry], fmt: str = "json", include_timings: bool = False) -> bytes:
    if fmt == "json":
        return json.dumps([e.to_dict(include_timings) for e in entries], indent=2).encode("utf-8")
    if fmt == "text":
        return _render_text(entries, include_timings).encode("utf-8")
    raise ConfigError([f"format must be 'json' or 'text', got {fmt!r}"])

