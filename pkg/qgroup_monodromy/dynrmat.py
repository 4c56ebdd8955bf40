"""Diagonal monodromy sector: M_p, q^{2 sigma}, the n = 2 dynamical R-matrix
and vacuum weights.

w = q^p with p = p_1 - p_2, and u stands for q^{alpha(p)}, kept as a formal
unit.  General-n weights live in the w1, w2, ... slots of QExpr.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .coeff import LAMBDA, Q, QExpr, RatFun, U, U_POS, W, W_POS, field_arith, pnum, weight_symbol
from .errors import RankError
from .framework import Comparison
from .linalg import SparseMatrix
from .rmat import TensorOp

__all__ = [
    "DynTensorOp",
    "WeightVector",
    "build_Mp",
    "barycentric_Mp",
    "build_q2sigma",
    "build_Rp",
    "vacuum_weights",
    "check_dynamical_identity",
    "check_rp_inverse",
    "check_mp_spec",
    "check_vacuum_weights",
]

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class DynTensorOp(TensorOp):
    """TensorOp with entries depending on w = q^p and u = q^{alpha(p)}."""

    __slots__ = ()

    def at_vacuum(self) -> TensorOp:
        """Specialize p to its vacuum value p_1 - p_2 = 1, i.e. w = q."""
        return TensorOp(self.n, self.legs, self.matrix.substitute(W_POS, Q))

    def without_u(self, image=1) -> "DynTensorOp":
        return self.substitute(U_POS, image)


@dataclass(frozen=True)
class WeightVector:
    """Barycentric weight coordinates p_1 .. p_n"""
    values: Tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def spacings(self) -> List[Fraction]:
        return [a - b for a, b in zip(self.values, self.values[1:])]


def vacuum_weights(n: int) -> WeightVector:
    """p0_i = (n + 1)/2 - i"""
    if n < 2:
        raise RankError(f"n must be at least 2, got n={n}")
    return WeightVector(tuple(Fraction(n + 1, 2) - i for i in range(1, n + 1)))


def _weight_exponents(i: int, n: int) -> Tuple[int, ...]:
    """Exponents of w_1 .. w_{n-1} in w_i^-2, with w_n = (w_1 ... w_{n-1})^-1."""
    if i == n:
        return (2,) * (n - 1)
    return tuple(-2 if j == i else 0 for j in range(1, n))


def build_Mp(n: int) -> DynTensorOp:
    """M_p = q^{1 - 1/n} diag(w_1^-2, ..., w_n^-2)."""
    if n < 2:
        raise RankError(f"n must be at least 2, got n={n}")
    shift = 1 - Fraction(1, n)
    diag = [QExpr.monomial(q=shift, weights=_weight_exponents(i, n)) for i in range(1, n + 1)]
    return DynTensorOp(n, 1, SparseMatrix.diagonal(diag))


def barycentric_Mp() -> DynTensorOp:
    """build_Mp(2) with p_1 = p/2, p_2 = -p/2, i.e. w_1^2 replaced by w."""
    mp = build_Mp(2)
    return DynTensorOp(2, 1, mp.matrix.substitute(weight_symbol(1), W, root=2))


def build_q2sigma(n: int) -> TensorOp:
    """Diagonal with q^{2(delta_ij - 1/n)} at position (i, j)."""
    if n < 2:
        raise RankError(f"n must be at least 2, got n={n}")
    diag = [QExpr.monomial(q=2 * ((1 if i == j else 0) - Fraction(1, n))) for i in range(n) for j in range(n)]
    return TensorOp(n, 2, SparseMatrix.diagonal(diag))


def build_Rp(sign: str) -> DynTensorOp:
    """Dynamical braided R-matrix for n = 2; sign "-" gives the inverse.

    Entries in the basis 11, 12, 21, 22 over delta = w - w^-1 = lambda [p].
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    s = 1 if sign == "+" else -1
    pref = QExpr.monomial(q=s * HALF)
    delta = W - W ** -1
    q_inv, w_inv, u_inv = Q ** -1, W ** -1, U ** -1
    entries = {
        (0, 0): RatFun(pref * Q ** -s),
        (1, 1): RatFun(pref * LAMBDA * W ** -s, delta),
        (1, 2): RatFun(pref * u_inv * (q_inv * W - Q * w_inv), delta),
        (2, 1): RatFun(pref * U * (Q * W - q_inv * w_inv), delta),
        (2, 2): RatFun(pref * -LAMBDA * W ** s, delta),
        (3, 3): RatFun(pref * Q ** -s),
    }
    return DynTensorOp(2, 2, SparseMatrix(4, entries))


def _embed_legs(mp: TensorOp) -> Tuple[TensorOp, TensorOp]:
    one = SparseMatrix.identity(mp.n)
    return TensorOp(mp.n, 2, mp.matrix.kron(one)), TensorOp(mp.n, 2, one.kron(mp.matrix))


def _hiopt_rhs(rp_plus: TensorOp, mp: TensorOp) -> TensorOp:
    mp1, mp2 = _embed_legs(mp)
    return build_q2sigma(2) * mp2 * rp_plus * mp1.inverse()


# ── Checks ───────────────────────────────────────────────────────────────


def check_dynamical_identity() -> List[Comparison]:
    """Rh(p)^-1 = q^{2 sigma} M_p2 Rh(p) M_p1^-1, identically in u."""
    rp_plus, rp_minus = build_Rp("+"), build_Rp("-")
    mp = barycentric_Mp()
    out = [Comparison("scalar", "Rh^-1(p) = q^{2 sigma} M_p2 Rh(p) M_p1^-1", rp_minus, _hiopt_rhs(rp_plus, mp), tag="RpHIOPT")]
    for label, image in (("u = 1", 1), ("u = q^2", Q ** 2)):
        out.append(Comparison("scalar", f"Rh^-1(p) = q^{{2 sigma}} M_p2 Rh(p) M_p1^-1 at {label}",
                              rp_minus.without_u(image), _hiopt_rhs(rp_plus.without_u(image), mp), tag="RpHIOPT"))
    q_inv = Q ** -1
    out.append(Comparison("scalar", "q^{2 sigma} = diag(q, q^-1, q^-1, q)", build_q2sigma(2),
                          TensorOp(2, 2, SparseMatrix.diagonal([Q, q_inv, q_inv, Q])), tag="diagM-q2s"))
    out.append(Comparison("scalar", "q^{2 sigma} at q = 1 is the identity", build_q2sigma(2).at_q_one(),
                          TensorOp.identity(2, 2), tag="aMp"))
    out.append(Comparison("scalar", "M_p = q^1/2 diag(w^-1, w)", mp,
                          TensorOp(2, 1, SparseMatrix.diagonal([QExpr.monomial(q=HALF, w=-1), QExpr.monomial(q=HALF, w=1)])),
                          tag="RpMpn2"))
    half = QExpr.monomial(q=HALF)
    ratio_minus = pnum(-1) / pnum(0)
    ratio_plus = pnum(1) / pnum(0)
    out.append(Comparison("scalar", "displayed entries of Rh(p)",
                          {"11,11": rp_plus.entry((0, 0), (0, 0)),
                           "12,21": rp_plus.entry((0, 1), (1, 0)),
                           "21,12": rp_plus.entry((1, 0), (0, 1))},
                          {"11,11": RatFun(half * q_inv),
                           "12,21": RatFun(half * U ** -1) * ratio_minus,
                           "21,12": RatFun(half * U) * ratio_plus},
                          tag="RpMpn2"))
    vacuum = rp_plus.at_vacuum()
    out.append(Comparison("scalar", "Rh(p) at the vacuum p = 1: (12,12) entry",
                          vacuum.entry((0, 1), (0, 1)), RatFun(QExpr.monomial(q=-HALF)), tag="RpMpn2"))
    logger.debug("dynamical identity: %d comparisons", len(out))
    return out


def check_rp_inverse() -> List[Comparison]:
    """Rh(p) Rh^-1(p) = 1 and the bracket identity it rests on."""
    rp_plus, rp_minus = build_Rp("+"), build_Rp("-")
    one = TensorOp.identity(2, 2)
    p = pnum(0)
    lhs = field_arith(pnum(-1), pnum(1), op="mul")
    rhs = field_arith(field_arith(p, p, op="mul"), field_arith(RatFun(1), op="neg"), op="add")
    return [
        Comparison("scalar", "Rh(p) Rh^-1(p) = 1", rp_plus * rp_minus, one, tag="RpMpn2"),
        Comparison("scalar", "Rh^-1(p) Rh(p) = 1", rp_minus * rp_plus, one, tag="RpMpn2"),
        Comparison("scalar", "[p-1][p+1] = [p]^2 - 1", lhs, rhs, tag="RpMpn2"),
    ]


def check_mp_spec(n: int) -> List[Comparison]:
    mp = build_Mp(n)
    shift = 1 - Fraction(1, n)
    det = RatFun(1)
    for i in range(n):
        det = det * mp.matrix.get(i, i)
    out = [Comparison("scalar", "prod diag M_p = q^{n-1}", det, RatFun(Q ** (n - 1)), tag="Mpa=aM")]
    out.append(Comparison("scalar", "M_p at q = 1 has entries w_i^-2", mp.at_q_one(),
                          TensorOp(n, 1, SparseMatrix.diagonal([QExpr.monomial(weights=_weight_exponents(i, n))
                                                                for i in range(1, n + 1)])),
                          tag="Mpa=aM"))
    vacuum = vacuum_weights(n)
    specialized = mp.matrix
    for i in range(1, n):
        specialized = specialized.substitute(weight_symbol(i), QExpr.monomial(q=vacuum.values[i - 1]))
    expected = SparseMatrix.diagonal([QExpr.monomial(q=shift - 2 * v) for v in vacuum.values])
    out.append(Comparison("scalar", "M_p at the vacuum weights", specialized, expected, tag="Mpa=aM"))
    if n == 2:
        out.append(Comparison("scalar", "barycentric M_p = q^1/2 diag(w^-1, w)", barycentric_Mp(),
                              TensorOp(2, 1, SparseMatrix.diagonal([QExpr.monomial(q=HALF, w=-1),
                                                                    QExpr.monomial(q=HALF, w=1)])),
                              tag="Mpa=aM"))
    return out


def check_vacuum_weights(n: int) -> List[Comparison]:
    p0 = vacuum_weights(n)
    out = [
        Comparison("scalar", "sum of vacuum weights = 0", RatFun(p0.total()), RatFun(0), tag="qpan"),
        Comparison("scalar", "p0_i - p0_{i+1} = 1", {i + 1: RatFun(s) for i, s in enumerate(p0.spacings())},
                   {i + 1: RatFun(1) for i in range(n - 1)}, tag="qpan"),
        Comparison("scalar", "q^{-2 p0_1} = q^{1-n}", RatFun(QExpr.monomial(q=-2 * p0.values[0])),
                   RatFun(Q ** (1 - n)), tag="qpan"),
    ]
    return out
