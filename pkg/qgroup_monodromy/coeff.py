"""Exact coefficient arithmetic.

``QExpr`` is a finite sum of monomials ``q^r w^a u^b w1^c ...`` with rational
coefficients, where ``r`` is a rational exponent and the auxiliary symbols
carry integer exponents.  ``w`` stands for ``q^p``, ``u`` for ``q^alpha(p)``
and ``w1, w2, ...`` for the weight coordinates ``q^{p_i}``.

``RatFun`` is a fraction of two ``QExpr`` values.  Reduction only uses exact
monomial-aware division; equality is decided by cross-multiplication, so two
fractions may compare equal without having identical parts.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

import mpmath

from .errors import CoefficientDivisionError, NumericDomainError, StructureError

__all__ = [
    "QExpr",
    "RatFun",
    "Q_POS",
    "W_POS",
    "U_POS",
    "weight_symbol",
    "qnum",
    "qfact",
    "pnum",
    "field_arith",
    "eval_at_root",
    "ZERO",
    "ONE",
    "Q",
    "W",
    "U",
    "LAMBDA",
    "NUMERIC_DPS",
]

logger = logging.getLogger(__name__)

Exponent = Union[int, Fraction]
Monomial = Tuple[Exponent, ...]
Scalar = Union[int, Fraction]

Q_POS, W_POS, U_POS = 0, 1, 2
NUMERIC_DPS = 30
_DIVISION_STEPS = 4096
_SYMBOL_NAMES = ("q", "w", "u")


def weight_symbol(i: int) -> int:
    """Exponent slot of the weight coordinate ``w_i`` (``i >= 1``)."""
    if i < 1:
        raise StructureError(f"weight symbols start at w1, got w{i}")
    return U_POS + i


def _symbol_name(pos: int) -> str:
    if pos < len(_SYMBOL_NAMES):
        return _SYMBOL_NAMES[pos]
    return f"w{pos - U_POS}"


# ── Monomial helpers ─────────────────────────────────────────────────────


def _scalar(c) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _strip(mono: Sequence[Exponent]) -> Monomial:
    end = len(mono)
    while end and not mono[end - 1]:
        end -= 1
    return tuple(_scalar(e) for e in mono[:end])


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    if len(a) == 1 and len(b) == 1:
        s = _scalar(a[0] + b[0])
        return (s,) if s else ()
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return _strip(out)


def _mono_pow(m: Monomial, k: int) -> Monomial:
    return _strip([e * k for e in m])


def _pad(m: Monomial, width: int) -> Monomial:
    return m + (0,) * (width - len(m))


def _fmt_exp(e: Exponent) -> str:
    e = _scalar(e)
    if isinstance(e, Fraction):
        return f"{e.numerator}/{e.denominator}"
    return str(e)


def _fmt_mono(mono: Monomial) -> str:
    factors = []
    for pos, e in enumerate(mono):
        if not e:
            continue
        name = _symbol_name(pos)
        factors.append(name if e == 1 else f"{name}^{_fmt_exp(e)}")
    return "*".join(factors)


def _coerce(x) -> Optional["QExpr"]:
    if isinstance(x, QExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return QExpr.const(x)
    return None


# ── QExpr ────────────────────────────────────────────────────────────────


class QExpr:
    """Sum of monomials in q (rational powers) and the auxiliary units."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean: Dict[Monomial, Scalar] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, c in items:
                key = _strip(tuple(mono))
                clean[key] = clean.get(key, 0) + c
        self._terms = {m: _scalar(c) for m, c in clean.items() if c != 0}

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Scalar]) -> "QExpr":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "QExpr":
        c = _scalar(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def monomial(cls, q: Exponent = 0, w: int = 0, u: int = 0, coeff: Scalar = 1,
                 weights: Sequence[int] = ()) -> "QExpr":
        return cls({(q, w, u, *weights): coeff})

    # -- inspection ------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def width(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def items(self) -> Iterator[Tuple[Monomial, Scalar]]:
        """Terms in descending lexicographic order of the exponent vector."""
        width = self.width()
        return iter(sorted(self._terms.items(), key=lambda t: _pad(t[0], width), reverse=True))

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {(): 1}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_term(self) -> Scalar:
        return self._terms.get((), 0)

    def leading(self) -> Tuple[Monomial, Scalar]:
        if not self._terms:
            raise CoefficientDivisionError("zero expression has no leading term")
        width = self.width()
        mono = max(self._terms, key=lambda m: _pad(m, width))
        return mono, self._terms[mono]

    def lowest(self) -> Tuple[Monomial, Scalar]:
        if not self._terms:
            raise CoefficientDivisionError("zero expression has no lowest term")
        width = self.width()
        mono = min(self._terms, key=lambda m: _pad(m, width))
        return mono, self._terms[mono]

    def max_q_denominator(self) -> int:
        return max((Fraction(m[0]).denominator for m in self._terms if m), default=1)

    # -- arithmetic ------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __neg__(self) -> "QExpr":
        return QExpr._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _scalar(s)
            else:
                out.pop(m, None)
        return QExpr._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, QExpr):
            return _qexpr_mul(self, other)
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return QExpr._raw({m: _scalar(c * other) for m, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise CoefficientDivisionError("division of a QExpr by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, (QExpr, RatFun)):
            return RatFun(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(other, self)
        return NotImplemented

    def __pow__(self, k: int) -> "QExpr":
        if k < 0:
            if not self.is_monomial():
                raise StructureError(f"negative power of a non-monomial: ({self})^{k}")
            (mono, c), = self._terms.items()
            return QExpr._raw({_mono_pow(mono, k): _scalar(Fraction(c) ** k)})
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- division and maps -----------------------------------------------

    def divide_exact(self, other: "QExpr") -> Optional["QExpr"]:
        """Return ``self / other`` when the quotient is a QExpr, else ``None``.

        Leading-term division under the lexicographic order.  Every quotient
        exponent must lie between the coordinatewise differences of the
        lowest and highest exponents of the operands, which bounds the loop.
        """
        if other.is_zero():
            raise CoefficientDivisionError("division by the zero expression")
        if self.is_zero():
            return ZERO
        if other.is_monomial():
            (mono, c), = other._terms.items()
            return self * QExpr._raw({_mono_pow(mono, -1): _scalar(Fraction(1) / Fraction(c))})
        width = max(self.width(), other.width())
        f_lo, f_hi = _bounds(self, width)
        g_lo, g_hi = _bounds(other, width)
        lo = [a - b for a, b in zip(f_lo, g_lo)]
        hi = [a - b for a, b in zip(f_hi, g_hi)]
        if any(a > b for a, b in zip(lo, hi)):
            return None
        g_mono, g_coeff = other.leading()
        g_pad = _pad(g_mono, width)
        rem, quotient = self, {}
        for _ in range(_DIVISION_STEPS):
            if rem.is_zero():
                return QExpr._raw(quotient)
            r_mono, r_coeff = rem.leading()
            step = [a - b for a, b in zip(_pad(r_mono, width), g_pad)]
            if any(s < a or s > b for s, a, b in zip(step, lo, hi)):
                return None
            mono = _strip(step)
            coeff = _scalar(Fraction(r_coeff) / Fraction(g_coeff))
            quotient[mono] = coeff
            rem = rem - QExpr._raw({mono: coeff}) * other
        logger.debug("division step limit reached for (%s)/(%s)", self, other)
        return None

    def substitute(self, pos: int, image, root: int = 1) -> "QExpr":
        """Replace ``sym^root`` by ``image`` for the symbol at exponent slot ``pos``."""
        if pos == Q_POS:
            raise StructureError("q is the deformation parameter and cannot be substituted")
        image = _coerce(image)
        if image is None:
            raise StructureError("substitution image must be a QExpr or a rational")
        out = ZERO
        for mono, c in self._terms.items():
            e = mono[pos] if pos < len(mono) else 0
            if e % root:
                raise StructureError(f"{_symbol_name(pos)}^{e} is not a power of {_symbol_name(pos)}^{root}")
            rest = list(mono)
            if pos < len(rest):
                rest[pos] = 0
            out = out + QExpr._raw({_strip(rest): c}) * image ** (e // root)
        return out

    def at_q_one(self) -> "QExpr":
        """Classical limit: set q = 1, keep the auxiliary symbols."""
        return QExpr(((0,) + m[1:] if m else m, c) for m, c in self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for mono, c in self.items():
            body = _fmt_mono(mono)
            size = abs(c)
            if not body:
                text = _fmt_scalar(size)
            elif size == 1:
                text = body
            else:
                text = f"{_fmt_scalar(size)}*{body}"
            pieces.append(("-" if c < 0 else "+", text))
        sign, text = pieces[0]
        out = ("-" if sign == "-" else "") + text
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"QExpr({self})"


def _fmt_scalar(c: Scalar) -> str:
    return str(_scalar(c))


def _bounds(x: QExpr, width: int):
    padded = [_pad(m, width) for m in x._terms]
    return [min(col) for col in zip(*padded)], [max(col) for col in zip(*padded)]


def _qexpr_mul(a: QExpr, b: QExpr) -> QExpr:
    if not a._terms or not b._terms:
        return ZERO
    out: Dict[Monomial, Scalar] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            m = _mono_mul(ma, mb)
            out[m] = out.get(m, 0) + ca * cb
    return QExpr._raw({m: _scalar(c) for m, c in out.items() if c})


ZERO = QExpr._raw({})
ONE = QExpr._raw({(): 1})
Q = QExpr.monomial(q=1)
W = QExpr.monomial(w=1)
U = QExpr.monomial(u=1)
LAMBDA = Q - Q ** -1


# ── RatFun ───────────────────────────────────────────────────────────────


def _reduce(num: QExpr, den: QExpr) -> Tuple[QExpr, QExpr]:
    if den.is_zero():
        raise CoefficientDivisionError(f"zero denominator under ({num})")
    if num.is_zero():
        return ZERO, ONE
    if den.is_one():
        return num, ONE
    quotient = num.divide_exact(den)
    if quotient is not None:
        return quotient, ONE
    if len(num) > 1:
        flipped = den.divide_exact(num)
        if flipped is not None:
            if flipped.is_monomial():
                return ONE.divide_exact(flipped), ONE
            num, den = ONE, flipped
    mono, c = den.leading()
    scale = QExpr._raw({_mono_pow(mono, -1): _scalar(Fraction(1) / Fraction(c))})
    return num * scale, den * scale


def _as_ratfun(x) -> Optional["RatFun"]:
    if isinstance(x, RatFun):
        return x
    x = _coerce(x)
    if x is None:
        return None
    return RatFun._make(x, ONE)


class RatFun:
    """Fraction ``num / den`` of QExpr values; the denominator's lexicographically
    greatest monomial is normalized to ``1``."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        n, d = _coerce(num), _coerce(den)
        if n is None or d is None:
            raise TypeError(f"RatFun parts must be QExpr or rational, got {type(num).__name__}, {type(den).__name__}")
        self.num, self.den = _reduce(n, d)

    @classmethod
    def _make(cls, num: QExpr, den: QExpr) -> "RatFun":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __neg__(self) -> "RatFun":
        return RatFun._make(-self.num, self.den)

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den.is_one() and other.den.is_one():
            return RatFun._make(self.num + other.num, ONE)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFun._make(ZERO, ONE)
        if self.den.is_one() and other.den.is_one():
            return RatFun._make(self.num * other.num, ONE)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.num.is_zero():
            raise CoefficientDivisionError("inverse of zero")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFun":
        if k < 0:
            return self.inverse() ** (-k)
        if self.den.is_one():
            return RatFun._make(self.num ** k, ONE)
        return RatFun(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return self.num == other.num
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def substitute(self, pos: int, image, root: int = 1) -> "RatFun":
        return RatFun(self.num.substitute(pos, image, root), self.den.substitute(pos, image, root))

    def at_q_one(self) -> "RatFun":
        return RatFun(self.num.at_q_one(), self.den.at_q_one())

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFun({self})"


# ── q-numbers ────────────────────────────────────────────────────────────


def qnum(m: int) -> QExpr:
    """[m] = (q^m - q^-m)/(q - q^-1) as a sum of monomials."""
    if m < 0:
        return -qnum(-m)
    return QExpr({(m - 1 - 2 * j,): 1 for j in range(m)})


def qfact(m: int) -> QExpr:
    if m < 0:
        raise ValueError(f"q-factorial needs m >= 0, got {m}")
    out = ONE
    for j in range(1, m + 1):
        out = out * qnum(j)
    return out


def pnum(shift: int = 0) -> RatFun:
    """[p + shift] with w = q^p."""
    return RatFun(Q ** shift * W - Q ** -shift * W ** -1, LAMBDA)


_FIELD_OPS = {
    "add": lambda a, b: a + b,
    "mul": lambda a, b: a * b,
    "inv": lambda a, b: a.inverse(),
    "neg": lambda a, b: -a,
}


def field_arith(a, b=None, op: str = "add") -> RatFun:
    """Field operation on RatFun operands; ``inv`` of zero raises CoefficientDivisionError."""
    try:
        fn = _FIELD_OPS[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}; expected one of {sorted(_FIELD_OPS)}") from None
    a = _as_ratfun(a)
    if b is not None:
        b = _as_ratfun(b)
    return fn(a, b)


# ── Numeric evaluation ───────────────────────────────────────────────────


def _eval_qexpr(x: QExpr, h: int, symbols: Sequence) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for mono, c in x._terms.items():
        c = Fraction(c)
        term = mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator)
        if mono:
            r = Fraction(mono[0])
            term *= mpmath.expjpi(-mpmath.mpf(r.numerator) / (r.denominator * h))
            for pos, e in enumerate(mono[1:], start=1):
                if not e:
                    continue
                if pos - 1 >= len(symbols):
                    raise NumericDomainError(f"no numeric value for {_symbol_name(pos)}")
                base = symbols[pos - 1]
                if base == 0 and e < 0:
                    raise NumericDomainError(f"{_symbol_name(pos)} = 0 under a negative power")
                term *= base ** e
        total += term
    return total


def eval_at_root(x, h: int, w_val=1, u_val=1, weights: Sequence = ()) -> mpmath.mpc:
    """Evaluate at q = exp(-i pi / h) with numeric values for w, u and w1, w2, ..."""
    if h < 2:
        raise NumericDomainError(f"root of unity order must be at least 2, got h={h}")
    with mpmath.workdps(NUMERIC_DPS):
        symbols = [mpmath.mpc(w_val), mpmath.mpc(u_val)] + [mpmath.mpc(v) for v in weights]
        if isinstance(x, RatFun):
            den = _eval_qexpr(x.den, h, symbols)
            if abs(den) < mpmath.mpf(10) ** (-(NUMERIC_DPS // 2)):
                raise NumericDomainError(f"denominator ({x.den}) vanishes at h={h}")
            value = _eval_qexpr(x.num, h, symbols) / den
        else:
            expr = _coerce(x)
            if expr is None:
                raise TypeError(f"cannot evaluate {type(x).__name__}")
            value = _eval_qexpr(expr, h, symbols)
        if not (mpmath.isfinite(value.real) and mpmath.isfinite(value.imag)):
            raise NumericDomainError(f"non-finite value for {x} at h={h}")
        return value
