"""Exact verification engine for the quantum monodromy matrix of the SU(n) WZNW model."""
from .coeff import LAMBDA, Q, QExpr, RatFun, eval_at_root, qfact, qnum
from .errors import (
    CoefficientDivisionError,
    ConfigError,
    NumericDomainError,
    QGroupError,
    RankError,
    RepresentationError,
    RewriteBudgetExceeded,
    StructureError,
    UnknownGeneratorError,
)
from .framework import CheckStatus, Comparison, ReportEntry, ReportLogger, generate_summary_report, setup_logger
from .harness import CHECK_NAMES, REGISTRY, CheckConfig, render_report, run_checks
from .ncalg import Generator, NCElem, normal_form, sl2_rewrite_system
from .rmat import TensorOp, dj_rmatrix, qdet_free
from .uq import build_M, build_Mpm, configured_reps, fundamental_rep

__version__ = "1.0"

__all__ = [
    "LAMBDA",
    "Q",
    "QExpr",
    "RatFun",
    "eval_at_root",
    "qfact",
    "qnum",
    "QGroupError",
    "CoefficientDivisionError",
    "ConfigError",
    "NumericDomainError",
    "RankError",
    "RepresentationError",
    "RewriteBudgetExceeded",
    "StructureError",
    "UnknownGeneratorError",
    "CheckStatus",
    "Comparison",
    "ReportEntry",
    "ReportLogger",
    "generate_summary_report",
    "setup_logger",
    "CHECK_NAMES",
    "REGISTRY",
    "CheckConfig",
    "render_report",
    "run_checks",
    "Generator",
    "NCElem",
    "normal_form",
    "sl2_rewrite_system",
    "TensorOp",
    "dj_rmatrix",
    "qdet_free",
    "build_M",
    "build_Mpm",
    "configured_reps",
    "fundamental_rep",
]
