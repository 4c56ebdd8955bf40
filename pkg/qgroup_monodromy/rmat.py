"""Constant R-matrix on tensor legs, quantum epsilon tensor and the quantum
determinant, with the exchange, reflection and determinant checks built on them.
"""
from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Sequence, Tuple

from .coeff import LAMBDA, Q, QExpr, RatFun, qfact, qnum
from .errors import RankError, StructureError
from .framework import Comparison
from .linalg import SparseMatrix
from .ncalg import (
    Generator,
    NCElem,
    cartan_rewrite_system,
    classical_limit,
    normal_form,
    sl2_rewrite_system,
    sl2_torus_rewrite_system,
)
from .uq import (
    AlgMatrix,
    K_elem,
    build_M,
    build_Mpm,
    inverse_Mpm,
    monodromy_prefactor,
    structure_comparisons,
)

__all__ = [
    "TensorOp",
    "index_of",
    "basis_tuple",
    "dj_rmatrix",
    "permutation",
    "braided",
    "embed",
    "EpsTensor",
    "q_eps",
    "qdet_contract",
    "qdet_free",
    "qdet_reversed",
    "qdet_Mpm",
    "check_qybe",
    "check_braid",
    "check_far_commute",
    "check_eps_contract",
    "check_qdet_Mpm",
    "check_qdet_M",
    "check_exchange_Mpm",
    "check_reflection",
    "check_detq_free_golden",
]

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


def index_of(t: Sequence[int], n: int) -> int:
    """Flat index of a multi-index; the first leg is the most significant digit."""
    out = 0
    for x in t:
        out = out * n + x
    return out


def basis_tuple(i: int, n: int, legs: int) -> Index:
    digits = []
    for _ in range(legs):
        i, r = divmod(i, n)
        digits.append(r)
    return tuple(reversed(digits))


class TensorOp:
    """Operator on the L-fold tensor power of C^n with coefficient entries."""

    __slots__ = ("n", "legs", "matrix")

    def __init__(self, n: int, legs: int, matrix: SparseMatrix):
        if matrix.dim != n ** legs:
            raise StructureError(f"a {legs}-leg operator on C^{n} needs dimension {n ** legs}, got {matrix.dim}")
        self.n = n
        self.legs = legs
        self.matrix = matrix

    @classmethod
    def from_entries(cls, n: int, legs: int, entries: Mapping[Tuple[Index, Index], object]) -> "TensorOp":
        return cls(n, legs, SparseMatrix(n ** legs, {(index_of(r, n), index_of(c, n)): v for (r, c), v in entries.items()}))

    @classmethod
    def identity(cls, n: int, legs: int) -> "TensorOp":
        return cls(n, legs, SparseMatrix.identity(n ** legs))

    def entry(self, row: Index, col: Index) -> RatFun:
        return self.matrix.get(index_of(row, self.n), index_of(col, self.n))

    def items(self) -> Iterator[Tuple[Index, Index, RatFun]]:
        for i, j, v in self.matrix.items():
            yield basis_tuple(i, self.n, self.legs), basis_tuple(j, self.n, self.legs), v

    def _same_space(self, other: "TensorOp") -> None:
        if (self.n, self.legs) != (other.n, other.legs):
            raise StructureError(f"operators act on different spaces: ({self.n}, {self.legs}) vs ({other.n}, {other.legs})")

    def _wrap(self, matrix: SparseMatrix) -> "TensorOp":
        return type(self)(self.n, self.legs, matrix)

    def __mul__(self, other):
        if isinstance(other, TensorOp):
            self._same_space(other)
            return self._wrap(self.matrix * other.matrix)
        return self._wrap(self.matrix.scale(other))

    def __rmul__(self, other):
        return self._wrap(self.matrix.scale(other))

    def __add__(self, other: "TensorOp") -> "TensorOp":
        self._same_space(other)
        return self._wrap(self.matrix + other.matrix)

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        self._same_space(other)
        return self._wrap(self.matrix - other.matrix)

    def inverse(self) -> "TensorOp":
        return self._wrap(self.matrix.inverse())

    def substitute(self, pos: int, image, root: int = 1) -> "TensorOp":
        return self._wrap(self.matrix.substitute(pos, image, root))

    def at_q_one(self) -> "TensorOp":
        return self._wrap(self.matrix.at_q_one())

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (self.n, self.legs) == (other.n, other.legs) and self.matrix == other.matrix

    __hash__ = None

    def __str__(self) -> str:
        def digits(t: Index) -> str:
            return "".join(str(x + 1) for x in t)
        return "\n".join(f"{digits(r)},{digits(c)}: {v}" for r, c, v in self.items())


def _sign(a: int, b: int) -> int:
    return (a > b) - (a < b)


def dj_rmatrix(n: int) -> TensorOp:
    """R^{ab}_{cd} = q^{1/n} (delta^a_c delta^b_d + (q^-1 - q^{sign(a-b)}) delta^a_d delta^b_c)."""
    if n < 2:
        raise RankError(f"n must be at least 2, got n={n}")
    pref = QExpr.monomial(q=Fraction(1, n))
    q_inv = Q ** -1
    entries: Dict[Tuple[Index, Index], QExpr] = defaultdict(QExpr)
    for a in range(n):
        for b in range(n):
            entries[((a, b), (a, b))] += pref
            entries[((a, b), (b, a))] += pref * (q_inv - Q ** _sign(a, b))
    return TensorOp.from_entries(n, 2, entries)


def permutation(n: int) -> TensorOp:
    return TensorOp.from_entries(n, 2, {((a, b), (b, a)): 1 for a in range(n) for b in range(n)})


def braided(op: TensorOp) -> TensorOp:
    """The braid form P R."""
    return permutation(op.n) * op


def embed(op: TensorOp, slots: Tuple[int, int], legs: int) -> TensorOp:
    """Place a 2-leg operator on the given 1-based slots of a legs-fold product.

    Reversed slots transpose the legs, so ``embed(R, (2, 1), 2)`` is R21.
    """
    s1, s2 = slots
    if op.legs != 2 or s1 == s2 or not (1 <= s1 <= legs and 1 <= s2 <= legs):
        raise StructureError(f"cannot embed a {op.legs}-leg operator at slots {slots} of {legs} legs")
    n = op.n
    others = [k for k in range(legs) if k not in (s1 - 1, s2 - 1)]
    entries = {}
    for (r1, r2), (c1, c2), v in op.items():
        for rest in itertools.product(range(n), repeat=len(others)):
            row, col = [0] * legs, [0] * legs
            row[s1 - 1], row[s2 - 1] = r1, r2
            col[s1 - 1], col[s2 - 1] = c1, c2
            for k, x in zip(others, rest):
                row[k] = col[k] = x
            entries[(index_of(row, n), index_of(col, n))] = v
    return TensorOp(n, legs, SparseMatrix(n ** legs, entries))


def r_plus(n: int) -> TensorOp:
    """R+ = R21^-1."""
    return embed(dj_rmatrix(n), (2, 1), 2).inverse()


# ── Quantum epsilon tensor ───────────────────────────────────────────────


class EpsTensor:
    """Rank-n q-antisymmetric tensor; components vanish off permutations."""

    def __init__(self, n: int, components: Dict[Index, QExpr]):
        self.n = n
        self.components = components

    def get(self, alpha: Sequence[int]) -> QExpr:
        return self.components.get(tuple(alpha), QExpr())

    def permutations(self) -> List[Index]:
        return sorted(self.components)

    def contract_self(self) -> QExpr:
        out = QExpr()
        for v in self.components.values():
            out = out + v * v
        return out


def _inversions_up(alpha: Index) -> int:
    return sum(1 for i in range(len(alpha)) for j in range(i + 1, len(alpha)) if alpha[i] < alpha[j])


def q_eps(n: int) -> EpsTensor:
    """eps_alpha = q^{-n(n-1)/4} (-q)^l, l counting increasing pairs of alpha.

    The fully descending index is the base point with value q^{-n(n-1)/4}.
    """
    shift = Fraction(-n * (n - 1), 4)
    comps = {}
    for alpha in itertools.permutations(range(n)):
        ell = _inversions_up(alpha)
        comps[alpha] = QExpr.monomial(q=ell + shift, coeff=(-1) ** ell)
    return EpsTensor(n, comps)


# ── Quantum determinant ──────────────────────────────────────────────────


def _accumulate(out: Dict, key, value) -> None:
    prev = out.get(key)
    out[key] = value if prev is None else prev + value


def _prune(vec: Dict) -> Dict:
    return {k: v for k, v in vec.items() if not v.is_zero()}


def qdet_contract(n: int, entry: Callable[[int, int], object], one) -> object:
    """det_q = (1/[n]!) eps_alpha (Rh12 ... Rh_{n-1,n} M_n)^n eps^beta.

    ``entry(a, b)`` gives the 0-based matrix element m^a_b in any ring
    (free symbols, U_q elements or representation matrices); ``one`` is its unit.
    The operator string acts on the column vector eps^beta from the right end.
    """
    eps = q_eps(n)
    by_col: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], RatFun]]] = defaultdict(list)
    for r, c, v in braided(dj_rmatrix(n)).items():
        by_col[c].append((r, v))
    vec: Dict[Index, object] = {beta: one * eps.get(beta) for beta in eps.permutations()}
    for _ in range(n):
        step: Dict[Index, object] = {}
        for idx, val in vec.items():
            d = idx[-1]
            for b in range(n):
                m = entry(b, d)
                if m.is_zero():
                    continue
                _accumulate(step, idx[:-1] + (b,), m * val)
        vec = _prune(step)
        for slot in range(n - 2, -1, -1):
            step = {}
            for idx, val in vec.items():
                for (r1, r2), v in by_col[(idx[slot], idx[slot + 1])]:
                    _accumulate(step, idx[:slot] + (r1, r2) + idx[slot + 2:], val * v)
            vec = _prune(step)
    total = one * 0
    for alpha in eps.permutations():
        if alpha in vec:
            total = total + vec[alpha] * eps.get(alpha)
    return total * RatFun(1, qfact(n))


def _m_symbol(n: int) -> Callable[[int, int], NCElem]:
    return lambda a, b: NCElem.word(Generator.m(a + 1, b + 1), rank=n)


def qdet_free(n: int) -> NCElem:
    """Quantum determinant of a generic matrix of free symbols m^a_b."""
    if n not in (2, 3):
        raise RankError(f"free-symbol quantum determinant is expanded for n in (2, 3), got n={n}")
    return qdet_contract(n, _m_symbol(n), NCElem.one(n))


def qdet_reversed(n: int, entry: Callable[[int, int], object], one) -> object:
    """(1/[n]!) eps_alpha m^{alpha_n}_{beta_n} ... m^{alpha_1}_{beta_1} eps^beta."""
    eps = q_eps(n)
    perms = eps.permutations()
    total = one * 0
    for alpha in perms:
        for beta in perms:
            value = one
            for k in reversed(range(n)):
                m = entry(alpha[k], beta[k])
                if m.is_zero():
                    break
                value = value * m
            else:
                total = total + value * (eps.get(alpha) * eps.get(beta))
    return total * RatFun(1, qfact(n))


def qdet_Mpm(n: int, sign: str) -> NCElem:
    m_plus, m_minus = build_Mpm(n)
    m = m_plus if sign == "+" else m_minus
    return qdet_reversed(n, lambda a, b: m[a, b], NCElem.one(n))


# ── Check helpers ────────────────────────────────────────────────────────


def _sl2_nf(values: Dict) -> Dict:
    rs = sl2_rewrite_system()
    return {k: normal_form(v, rs) for k, v in values.items()}


def _backends(n: int, reps: Sequence, *matrices: AlgMatrix):
    """Per representation (and symbolically at n = 2): label, evaluated matrices, post-processing."""
    out = [(rep.label, [rep.evaluate_matrix(m) for m in matrices], lambda d: d) for rep in reps]
    if n == 2:
        out.append(("symbolic", list(matrices), _sl2_nf))
    return out


def _zero_like(x):
    return x * 0


def _exchange_sides(r: TensorOp, a: AlgMatrix, b: AlgMatrix, n: int):
    """Components of R12 A2 B1 and B1 A2 R12 (A on leg 2, B on leg 1)."""
    by_row, by_col = defaultdict(list), defaultdict(list)
    for row, col, v in r.items():
        by_row[row].append((col, v))
        by_col[col].append((row, v))
    zero = _zero_like(a[0, 0])
    lhs, rhs = {}, {}
    for i, j, e, f in itertools.product(range(n), repeat=4):
        key = (i + 1, j + 1, e + 1, f + 1)
        acc = zero
        for (c, d), v in by_row[(i, j)]:
            acc = acc + (a[d, f] * b[c, e]) * v
        lhs[key] = acc
        acc = zero
        for (c, d), v in by_col[(e, f)]:
            acc = acc + (b[i, c] * a[j, d]) * v
        rhs[key] = acc
    return lhs, rhs


LegOp = Dict[Tuple[Index, Index], object]


def _scalar_legop(op: TensorOp) -> LegOp:
    return {(r, c): v for r, c, v in op.items()}


def _leg_matrix(m: AlgMatrix, leg: int, n: int) -> LegOp:
    out = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        value = m[a, c]
        if value.is_zero():
            continue
        if leg == 1:
            out[((a, b), (c, b))] = value
        else:
            out[((b, a), (b, c))] = value
    return out


def _legop_mul(x: LegOp, y: LegOp) -> LegOp:
    by_row = defaultdict(list)
    for (r, c), v in y.items():
        by_row[r].append((c, v))
    out: LegOp = {}
    for (r, mid), xv in x.items():
        for c, yv in by_row.get(mid, ()):
            _accumulate(out, (r, c), xv * yv)
    return _prune(out)


def _legop_product(*ops: LegOp) -> LegOp:
    out = ops[0]
    for op in ops[1:]:
        out = _legop_mul(out, op)
    return out


# ── R-matrix checks ──────────────────────────────────────────────────────


def check_qybe(n: int) -> List[Comparison]:
    r = dj_rmatrix(n)
    rh = braided(r)
    out = [
        Comparison("scalar", "R12 R13 R23 = R23 R13 R12",
                   embed(r, (1, 2), 3) * embed(r, (1, 3), 3) * embed(r, (2, 3), 3),
                   embed(r, (2, 3), 3) * embed(r, (1, 3), 3) * embed(r, (1, 2), 3), tag="QYBE"),
        Comparison("scalar", "Rh1 Rh2 Rh1 = Rh2 Rh1 Rh2",
                   embed(rh, (1, 2), 3) * embed(rh, (2, 3), 3) * embed(rh, (1, 2), 3),
                   embed(rh, (2, 3), 3) * embed(rh, (1, 2), 3) * embed(rh, (2, 3), 3), tag="QYBE"),
    ]
    return out


def check_braid(n: int) -> List[Comparison]:
    """Braid relation for Rh^-1 and the inverse pairing of Rh with P R+."""
    r = dj_rmatrix(n)
    rh = braided(r)
    rh_inv = rh.inverse()
    one = TensorOp.identity(n, 2)
    a, b = embed(rh_inv, (1, 2), 3), embed(rh_inv, (2, 3), 3)
    return [
        Comparison("scalar", "Rh^-1 Rh = 1", rh_inv * rh, one, tag="QYBE"),
        Comparison("scalar", "Rh1^-1 Rh2^-1 Rh1^-1 = Rh2^-1 Rh1^-1 Rh2^-1", a * b * a, b * a * b, tag="QYBE"),
        Comparison("scalar", "Rh (P R+) = 1", rh * braided(r_plus(n)), one, tag="QYBE"),
        Comparison("scalar", "R at q = 1 is the identity", r.at_q_one(), one, tag="R"),
    ]


def check_far_commute(n: int) -> List[Comparison]:
    rh = braided(dj_rmatrix(n))
    a, b = embed(rh, (1, 2), 4), embed(rh, (3, 4), 4)
    return [Comparison("scalar", "Rh1 Rh3 = Rh3 Rh1", a * b, b * a, tag="QYBE")]


def check_eps_contract(n: int) -> List[Comparison]:
    eps = q_eps(n)
    out = [
        Comparison("scalar", "eps_alpha eps^alpha = [n]!", RatFun(eps.contract_self()), RatFun(qfact(n)), tag="q-eps"),
        Comparison("scalar", "eps vanishes on repeated indices", RatFun(eps.get((0,) * n)), RatFun(0), tag="q-eps"),
    ]
    if n == 2:
        half = Fraction(1, 2)
        out.append(Comparison("scalar", "eps_12 = -q^1/2, eps_21 = q^-1/2",
                              {"12": RatFun(eps.get((0, 1))), "21": RatFun(eps.get((1, 0)))},
                              {"12": RatFun(QExpr.monomial(q=half, coeff=-1)), "21": RatFun(QExpr.monomial(q=-half))},
                              tag="q-eps"))
    return out


# ── Determinant checks ───────────────────────────────────────────────────


def check_qdet_Mpm(n: int, reps: Sequence) -> List[Comparison]:
    """det_q of the triangular factors reduces to the product of the diagonal, which is 1."""
    torus = cartan_rewrite_system(n)
    m_plus, m_minus = build_Mpm(n)
    out = []
    for sign, m in (("+", m_plus), ("-", m_minus)):
        value = qdet_reversed(n, lambda a, b: m[a, b], NCElem.one(n))
        out.append(Comparison("torus", f"det_q(M{sign}) = 1", normal_form(value, torus), NCElem.one(n), tag="detMpmvar1"))
        diag = NCElem.one(n)
        for a in range(n):
            diag = diag * m[a, a]
        out.append(Comparison("torus", f"prod diag M{sign} = 1", normal_form(diag, torus), NCElem.one(n), tag="detMpmvar1"))
        for rep in reps:
            evaluated = rep.evaluate_matrix(m)
            out.append(Comparison(rep.label, f"det_q(M{sign}) = 1",
                                  qdet_reversed(n, lambda a, b: evaluated[a, b], rep.identity), rep.identity,
                                  tag="detMpmvar1"))
    return out


def _dqmn2() -> NCElem:
    m = _m_symbol(2)
    m11, m12, m21, m22 = m(0, 0), m(0, 1), m(1, 0), m(1, 1)
    body = m22 * m11 + m11 * m22 + (m22 * m22).scale(Q * LAMBDA) - m21 * m12 - (m12 * m21).scale(Q ** -2)
    return body.scale(RatFun(Q ** 2, qnum(2)))


def _explicit_m2() -> AlgMatrix:
    """M at n = 2 in terms of E, F, K = k^2."""
    e = NCElem.word(Generator.E(1), rank=2)
    f = NCElem.word(Generator.F(1), rank=2)
    big_k, big_k_inv = K_elem(1, 2), K_elem(1, 2, -1)
    h = Fraction(1, 2)
    return AlgMatrix([
        [(f * e).scale(QExpr.monomial(q=-h) * LAMBDA * LAMBDA) + big_k_inv.scale(QExpr.monomial(q=-3 * h)),
         (f * big_k).scale(QExpr.monomial(q=-3 * h) * -LAMBDA)],
        [e.scale(QExpr.monomial(q=-h) * -LAMBDA), big_k.scale(QExpr.monomial(q=-3 * h))],
    ])


def check_qdet_M(n: int, reps: Sequence) -> List[Comparison]:
    """det_q(M) = 1, symbolically at n = 2 and in every representation."""
    if n not in (2, 3):
        raise RankError(f"det_q(M) is checked for n in (2, 3), got n={n}")
    m = build_M(n)
    out: List[Comparison] = []
    if n == 2:
        rs = sl2_rewrite_system()
        nf = lambda x: normal_form(x, rs)
        out.append(Comparison("symbolic", "M for n = 2", m.map(nf), _explicit_m2().map(nf), tag="Mab2"))
        substituted = qdet_free(2).evaluate(lambda g: m[g.index[0] - 1, g.index[1] - 1], NCElem.one(2))
        e = NCElem.word(Generator.E(1), rank=2)
        f = NCElem.word(Generator.F(1), rank=2)
        big_k = K_elem(1, 2)
        intermediate = (NCElem.scalar(2 * Q ** -1, 2) - ((e * f - f * e) * big_k).scale(LAMBDA * LAMBDA)
                        + (big_k * big_k).scale(LAMBDA)).scale(RatFun(1, qnum(2)))
        # k-relations only: [E, F] stays unreduced on both sides
        torus = sl2_torus_rewrite_system()
        out.append(Comparison("symbolic", "det_q(M) before the commutation relation",
                              normal_form(substituted, torus), normal_form(intermediate, torus), tag="detqMn=2"))
        out.append(Comparison("symbolic", "det_q(M) = 1", normal_form(substituted, rs), NCElem.one(2), tag="detqMn=2"))
    _, inv_minus = inverse_Mpm(n)
    m_plus, _ = build_Mpm(n)
    for rep in reps:
        mm = rep.evaluate_matrix(m)
        det_m = qdet_contract(n, lambda a, b: mm[a, b], rep.identity)
        out.append(Comparison(rep.label, "det_q(M) = 1", det_m, rep.identity, tag="MMMpm"))
        pp = rep.evaluate_matrix(m_plus)
        ii = rep.evaluate_matrix(inv_minus)
        factored = (qdet_reversed(n, lambda a, b: pp[a, b], rep.identity)
                    * qdet_reversed(n, lambda a, b: ii[a, b], rep.identity))
        out.append(Comparison(rep.label, "det_q(M) = det_q(M+) det_q(M-^-1)", det_m, factored, tag="MMMpm"))
        if n == 2:
            via_free = qdet_free(2).evaluate(lambda g: mm[g.index[0] - 1, g.index[1] - 1], rep.identity)
            out.append(Comparison(rep.label, "free det_q with M substituted", via_free, det_m, tag="MMMpm"))
    return out


def check_detq_free_golden(n: int) -> List[Comparison]:
    """Closed n = 2 forms: det_q of free symbols and the braided R-matrix."""
    if n != 2:
        raise RankError(f"closed forms are displayed for n = 2 only, got n={n}")
    det = qdet_free(2)
    m = _m_symbol(2)
    out = [Comparison("free", "det_q of a generic 2x2 matrix", det, _dqmn2(), tag="DqMn2")]
    out.append(Comparison("free", "det_q at q = 1 is m11 m22 - m12 m21", classical_limit(det),
                          m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0), tag="detM"))
    for label, c, expected in (("c = 1", RatFun(1), RatFun(Q ** 3)),
                               ("c = q^-3/2", RatFun(QExpr.monomial(q=Fraction(-3, 2))), RatFun(1))):
        value = det.evaluate(lambda g: c if g.index[0] == g.index[1] else RatFun(0), RatFun(1))
        out.append(Comparison("scalar", f"det_q(c 1) = c^2 q^3 at {label}", value, expected, tag="detM"))
    h = Fraction(1, 2)
    pref = QExpr.monomial(q=h)
    explicit = TensorOp.from_entries(2, 2, {
        ((0, 0), (0, 0)): pref * Q ** -1,
        ((0, 1), (0, 1)): pref * -LAMBDA,
        ((0, 1), (1, 0)): pref,
        ((1, 0), (0, 1)): pref,
        ((1, 1), (1, 1)): pref * Q ** -1,
    })
    out.append(Comparison("scalar", "Rh for n = 2", braided(dj_rmatrix(2)), explicit, tag="RMn2"))
    return out


# ── Exchange and reflection ──────────────────────────────────────────────


def check_exchange_Mpm(n: int, reps: Sequence) -> List[Comparison]:
    """R12 M2 M1 = M1 M2 R12 for (M+, M+), (M-, M-) and R12 M+2 M-1 = M-1 M+2 R12."""
    if n not in (2, 3):
        raise RankError(f"exchange relations are checked for n in (2, 3), got n={n}")
    r = dj_rmatrix(n)
    m_plus, m_minus = build_Mpm(n)
    out = list(structure_comparisons(n))
    for label, (p, m), post in _backends(n, reps, m_plus, m_minus):
        for name, a, b in (("R12 M+2 M+1 = M+1 M+2 R12", p, p),
                           ("R12 M-2 M-1 = M-1 M-2 R12", m, m),
                           ("R12 M+2 M-1 = M-1 M+2 R12", p, m)):
            lhs, rhs = _exchange_sides(r, a, b, n)
            out.append(Comparison(label, name, post(lhs), post(rhs), tag="exMpm"))
    return out


def check_reflection(n: int, reps: Sequence) -> List[Comparison]:
    """Reflection equation for M, in R/R21 form and in braided form."""
    if n not in (2, 3):
        raise RankError(f"the reflection equation is checked for n in (2, 3), got n={n}")
    r = dj_rmatrix(n)
    r12 = _scalar_legop(r)
    r21 = _scalar_legop(embed(r, (2, 1), 2))
    rh = _scalar_legop(braided(r))
    m = build_M(n)
    m_plus, _ = build_Mpm(n)
    _, inv_minus = inverse_Mpm(n)
    out = [Comparison("free", "M = q^{1/n - n} M+ M-^-1", m, (m_plus * inv_minus) * monodromy_prefactor(n), tag="factorM")]
    for label, (mm,), post in _backends(n, reps, m):
        m1 = _leg_matrix(mm, 1, n)
        m2 = _leg_matrix(mm, 2, n)
        out.append(Comparison(label, "M1 R12 M2 R21 = R12 M2 R21 M1",
                              post(_legop_product(m1, r12, m2, r21)), post(_legop_product(r12, m2, r21, m1)),
                              tag="exM"))
        out.append(Comparison(label, "Rh M2 Rh M2 = M2 Rh M2 Rh",
                              post(_legop_product(rh, m2, rh, m2)), post(_legop_product(m2, rh, m2, rh)),
                              tag="exM"))
    logger.debug("reflection comparisons for n=%d: %d", n, len(out))
    return out
