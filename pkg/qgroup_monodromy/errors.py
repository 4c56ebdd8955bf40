"""Exception hierarchy shared by the algebra modules and the check harness."""
from __future__ import annotations

__all__ = [
    "QGroupError",
    "CoefficientDivisionError",
    "RankError",
    "StructureError",
    "UnknownGeneratorError",
    "RewriteBudgetExceeded",
    "RepresentationError",
    "ConfigError",
    "NumericDomainError",
]


class QGroupError(Exception):
    """Base class for every error raised by qgroup_monodromy"""


class CoefficientDivisionError(QGroupError, ZeroDivisionError):
    """Division by the zero coefficient"""


class RankError(QGroupError, ValueError):
    """Unsupported rank, or operands built for different ranks"""


class StructureError(QGroupError, ValueError):
    """Shape problem: bad tensor slot, dimension mismatch, non-triangular input, bad rule"""


class UnknownGeneratorError(QGroupError, KeyError):
    """A generator has no image under the requested map"""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class RewriteBudgetExceeded(QGroupError, RuntimeError):
    """A rewrite system applied more rules than its budget allows"""


class RepresentationError(QGroupError):
    """Generator images violate a defining relation"""


class ConfigError(QGroupError, ValueError):
    """Invalid run configuration; carries every problem found"""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NumericDomainError(QGroupError, ValueError):
    """Numeric evaluation hit a vanishing denominator or a non-finite value"""
