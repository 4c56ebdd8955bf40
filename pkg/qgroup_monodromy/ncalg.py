"""Noncommutative polynomials and rule-driven rewriting.

Elements are finite sums of coefficient * word over an alphabet of Chevalley
generators ``E_i, F_i, k_i, k_i^-1`` and free matrix symbols ``m^a_b``.
Multiplication concatenates words and never rewrites; normal forms come from
an explicit ``RewriteSystem``.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .coeff import LAMBDA, QExpr, Q, RatFun, qnum
from .errors import RankError, RewriteBudgetExceeded, StructureError, UnknownGeneratorError
from .framework import Comparison
from .linalg import SparseMatrix, as_coefficient

__all__ = [
    "Generator",
    "Word",
    "word_key",
    "NCElem",
    "NCTensor",
    "nc_mul",
    "q_commutator",
    "RewriteRule",
    "RewriteSystem",
    "normal_form",
    "sl2_rewrite_system",
    "cartan_rewrite_system",
    "serre_relations",
    "sq_alt_forms",
    "check_serre",
    "classical_limit",
    "DEFAULT_BUDGET",
]

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 6

KIND_E, KIND_F, KIND_K, KIND_KINV, KIND_M = "E", "F", "k", "kinv", "m"
_KIND_ORDER = {KIND_F: 0, KIND_K: 1, KIND_KINV: 1, KIND_E: 2, KIND_M: 3}
_SCALARS = (int, Fraction, QExpr, RatFun)


class Generator(NamedTuple):
    """Alphabet letter: a Chevalley/Cartan generator or a free symbol m^a_b."""
    kind: str
    index: Tuple[int, ...]

    @classmethod
    def E(cls, i: int) -> "Generator":
        return cls(KIND_E, (i,))

    @classmethod
    def F(cls, i: int) -> "Generator":
        return cls(KIND_F, (i,))

    @classmethod
    def k(cls, i: int, inverse: bool = False) -> "Generator":
        return cls(KIND_KINV if inverse else KIND_K, (i,))

    @classmethod
    def m(cls, a: int, b: int) -> "Generator":
        return cls(KIND_M, (a, b))

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...], int]:
        # F < k < k^-1 < E < m
        return (_KIND_ORDER[self.kind], self.index, 1 if self.kind == KIND_KINV else 0)

    @property
    def is_torus(self) -> bool:
        return self.kind in (KIND_K, KIND_KINV)

    @property
    def name(self) -> str:
        if self.kind == KIND_M:
            return f"m{self.index[0]}_{self.index[1]}"
        if self.kind == KIND_KINV:
            return f"k{self.index[0]}^-1"
        return f"{self.kind}{self.index[0]}"

    def inverse(self) -> "Generator":
        if self.kind == KIND_K:
            return Generator(KIND_KINV, self.index)
        if self.kind == KIND_KINV:
            return Generator(KIND_K, self.index)
        raise StructureError(f"{self.name} is not invertible in the free algebra")

    def __str__(self) -> str:
        return self.name


Word = Tuple[Generator, ...]


def word_key(word: Sequence[Generator]):
    """Graded lexicographic key: length first, then letters."""
    return (len(word), tuple(g.sort_key for g in word))


def _word_text(word: Word) -> str:
    return " ".join(g.name for g in word) if word else "1"


def _merge_rank(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is not None and b is not None and a != b:
        raise RankError(f"operands belong to different ranks: {a} vs {b}")
    return a if a is not None else b


def _accumulate(out: Dict, key, c: RatFun) -> None:
    prev = out.get(key)
    out[key] = prev + c if prev is not None else c


def _drop_zeros(out: Dict) -> Dict:
    return {k: c for k, c in out.items() if not c.is_zero()}


# ── NCElem ───────────────────────────────────────────────────────────────


class NCElem:
    """Formal sum of coefficient * word; the empty word is the unit."""

    __slots__ = ("_terms", "rank")

    def __init__(self, terms: Optional[Mapping[Sequence[Generator], object]] = None, rank: Optional[int] = None):
        out: Dict[Word, RatFun] = {}
        for word, c in (terms or {}).items():
            _accumulate(out, tuple(word), as_coefficient(c))
        self._terms = _drop_zeros(out)
        self.rank = rank

    @classmethod
    def _raw(cls, terms: Dict[Word, RatFun], rank: Optional[int]) -> "NCElem":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.rank = rank
        return obj

    @classmethod
    def zero(cls, rank: Optional[int] = None) -> "NCElem":
        return cls._raw({}, rank)

    @classmethod
    def one(cls, rank: Optional[int] = None) -> "NCElem":
        return cls._raw({(): RatFun(1)}, rank)

    @classmethod
    def scalar(cls, c, rank: Optional[int] = None) -> "NCElem":
        return cls({(): c}, rank)

    @classmethod
    def word(cls, *gens: Generator, rank: Optional[int] = None, coeff=1) -> "NCElem":
        return cls({tuple(gens): coeff}, rank)

    # -- inspection ------------------------------------------------------

    def terms(self) -> List[Tuple[Word, RatFun]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def words(self) -> Iterator[Word]:
        return iter(self._terms)

    def coefficient(self, word: Sequence[Generator]) -> RatFun:
        return self._terms.get(tuple(word), RatFun(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not w for w in self._terms)

    def scalar_part(self) -> RatFun:
        return self.coefficient(())

    def generators(self) -> set:
        return {g for w in self._terms for g in w}

    # -- arithmetic ------------------------------------------------------

    def _lift(self, other) -> Optional["NCElem"]:
        if isinstance(other, NCElem):
            return other
        if isinstance(other, _SCALARS):
            return NCElem.scalar(other, self.rank)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        rank = _merge_rank(self.rank, other.rank)
        out = dict(self._terms)
        for w, c in other._terms.items():
            _accumulate(out, w, c)
        return NCElem._raw(_drop_zeros(out), rank)

    __radd__ = __add__

    def __neg__(self) -> "NCElem":
        return NCElem._raw({w: -c for w, c in self._terms.items()}, self.rank)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "NCElem":
        c = as_coefficient(c)
        if c.is_zero():
            return NCElem.zero(self.rank)
        return NCElem._raw({w: v * c for w, v in self._terms.items()}, self.rank)

    def __mul__(self, other):
        if isinstance(other, NCElem):
            return nc_mul(self, other)
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "NCElem":
        if k < 0:
            raise StructureError("negative powers are not defined in the free algebra")
        out = NCElem.one(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # -- maps ------------------------------------------------------------

    def evaluate(self, image, one, reverse: bool = False, cache: Optional[Dict] = None):
        """Algebra map sending each generator ``g`` to ``image(g)``.

        With ``reverse`` the words are read right to left, which turns a map
        of generators into an anti-homomorphism.  ``cache`` memoizes word
        values by the sequence actually multiplied.
        """
        if isinstance(image, Mapping):
            image = _mapping_lookup(image)
        cache = {} if cache is None else cache
        total = one * 0
        for word, c in self._terms.items():
            seq = word[::-1] if reverse else word
            total = total + c * _word_value(seq, image, one, cache)
        return total

    def map_coefficients(self, fn: Callable[[RatFun], object]) -> "NCElem":
        return NCElem({w: fn(c) for w, c in self._terms.items()}, self.rank)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for word, c in self.terms():
            if c.is_one():
                pieces.append(_word_text(word))
            elif not word:
                pieces.append(f"({c})")
            else:
                pieces.append(f"({c}) {_word_text(word)}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"NCElem({self})"


def _mapping_lookup(mapping: Mapping) -> Callable:
    def lookup(g: Generator):
        try:
            return mapping[g]
        except KeyError:
            raise UnknownGeneratorError(f"no image for generator {g.name}") from None
    return lookup


def _word_value(word: Word, image: Callable, one, cache: Dict):
    value = cache.get(word)
    if value is not None:
        return value
    i = len(word) - 1
    while i > 0 and word[:i] not in cache:
        i -= 1
    value = cache[word[:i]] if i > 0 else one
    for j in range(max(i, 0), len(word)):
        value = value * image(word[j])
        cache[word[:j + 1]] = value
    return value


def nc_mul(a: NCElem, b: NCElem) -> NCElem:
    """Concatenation product, bilinear in the coefficients."""
    rank = _merge_rank(a.rank, b.rank)
    out: Dict[Word, RatFun] = {}
    for wa, ca in a._terms.items():
        for wb, cb in b._terms.items():
            _accumulate(out, wa + wb, ca * cb)
    return NCElem._raw(_drop_zeros(out), rank)


def q_commutator(a: NCElem, b: NCElem, x=1) -> NCElem:
    """[a, b]_x = ab - x ba"""
    return a * b - (b * a).scale(x)


def classical_limit(x: NCElem) -> NCElem:
    """Set q = 1 in the coefficients and let the letters commute."""
    out: Dict[Word, RatFun] = {}
    for word, c in x._terms.items():
        _accumulate(out, tuple(sorted(word, key=lambda g: g.sort_key)), c.at_q_one())
    return NCElem(out, x.rank)


# ── Tensor square ────────────────────────────────────────────────────────


class NCTensor:
    """Element of the algebraic tensor square: sum of coefficient * (left word, right word)."""

    __slots__ = ("_terms", "rank")

    def __init__(self, terms: Optional[Mapping[Tuple[Word, Word], object]] = None, rank: Optional[int] = None):
        out: Dict[Tuple[Word, Word], RatFun] = {}
        for (wl, wr), c in (terms or {}).items():
            _accumulate(out, (tuple(wl), tuple(wr)), as_coefficient(c))
        self._terms = _drop_zeros(out)
        self.rank = rank

    @classmethod
    def _raw(cls, terms, rank) -> "NCTensor":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.rank = rank
        return obj

    @classmethod
    def one(cls, rank: Optional[int] = None) -> "NCTensor":
        return cls._raw({((), ()): RatFun(1)}, rank)

    @classmethod
    def pure(cls, a: NCElem, b: NCElem) -> "NCTensor":
        rank = _merge_rank(a.rank, b.rank)
        out: Dict[Tuple[Word, Word], RatFun] = {}
        for wa, ca in a._terms.items():
            for wb, cb in b._terms.items():
                _accumulate(out, (wa, wb), ca * cb)
        return cls._raw(_drop_zeros(out), rank)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return sorted(self._terms.items(), key=lambda t: (word_key(t[0][0]), word_key(t[0][1])), reverse=True)

    def __add__(self, other):
        if not isinstance(other, NCTensor):
            return NotImplemented
        out = dict(self._terms)
        for key, c in other._terms.items():
            _accumulate(out, key, c)
        return NCTensor._raw(_drop_zeros(out), _merge_rank(self.rank, other.rank))

    def __neg__(self) -> "NCTensor":
        return NCTensor._raw({k: -c for k, c in self._terms.items()}, self.rank)

    def __sub__(self, other):
        if not isinstance(other, NCTensor):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "NCTensor":
        c = as_coefficient(c)
        if c.is_zero():
            return NCTensor._raw({}, self.rank)
        return NCTensor._raw({k: v * c for k, v in self._terms.items()}, self.rank)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        if not isinstance(other, NCTensor):
            return NotImplemented
        out: Dict[Tuple[Word, Word], RatFun] = {}
        for (l1, r1), c1 in self._terms.items():
            for (l2, r2), c2 in other._terms.items():
                _accumulate(out, (l1 + l2, r1 + r2), c1 * c2)
        return NCTensor._raw(_drop_zeros(out), _merge_rank(self.rank, other.rank))

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, NCTensor):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def normal_form(self, rs: "RewriteSystem", budget: Optional[int] = None) -> "NCTensor":
        state = _RewriteState(rs, budget)
        out: Dict[Tuple[Word, Word], RatFun] = {}
        for (wl, wr), c in self._terms.items():
            for nl, cl in state.reduce(wl).items():
                for nr, cr in state.reduce(wr).items():
                    _accumulate(out, (nl, nr), c * cl * cr)
        return NCTensor._raw(_drop_zeros(out), self.rank)

    def contract(self, left: Callable[[Word], NCElem], right: Callable[[Word], NCElem]) -> NCElem:
        """Multiply the legs back together after mapping each: sum c * left(l) * right(r)."""
        total = NCElem.zero(self.rank)
        for (wl, wr), c in self._terms.items():
            total = total + (left(wl) * right(wr)).scale(c)
        return total

    def evaluate_pair(self, left_image, right_image, left_one: SparseMatrix, right_one: SparseMatrix) -> SparseMatrix:
        """Image under (rho1 tensor rho2) as a Kronecker-product matrix."""
        if isinstance(left_image, Mapping):
            left_image = _mapping_lookup(left_image)
        if isinstance(right_image, Mapping):
            right_image = _mapping_lookup(right_image)
        lcache: Dict = {}
        rcache: Dict = {}
        total = SparseMatrix.zero(left_one.dim * right_one.dim)
        for (wl, wr), c in self._terms.items():
            a = _word_value(wl, left_image, left_one, lcache)
            b = _word_value(wr, right_image, right_one, rcache)
            total = total + a.kron(b).scale(c)
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (wl, wr), c in self.items():
            body = f"{_word_text(wl)} (x) {_word_text(wr)}"
            pieces.append(body if c.is_one() else f"({c}) {body}")
        return " + ".join(pieces)


# ── Rewriting ────────────────────────────────────────────────────────────


class RewriteRule(NamedTuple):
    pattern: Tuple[Generator, Generator]
    replacement: NCElem


class RewriteSystem:
    """Ordered length-2 rules; every replacement word is smaller than its pattern."""

    def __init__(self, name: str, rules: Iterable[RewriteRule], budget: int = DEFAULT_BUDGET):
        self.name = name
        self.budget = budget
        self.rules: Tuple[RewriteRule, ...] = tuple(rules)
        self._index: Dict[Tuple[Generator, Generator], NCElem] = {}
        for rule in self.rules:
            pattern = tuple(rule.pattern)
            if len(pattern) != 2:
                raise StructureError(f"{name}: patterns must have length 2, got {_word_text(pattern)}")
            bound = word_key(pattern)
            for word in rule.replacement.words():
                if word_key(word) >= bound:
                    raise StructureError(
                        f"{name}: replacement word {_word_text(word)} is not smaller than {_word_text(pattern)}"
                    )
            self._index.setdefault(pattern, rule.replacement)

    def match(self, a: Generator, b: Generator) -> Optional[NCElem]:
        return self._index.get((a, b))

    def __repr__(self) -> str:
        return f"RewriteSystem({self.name!r}, {len(self.rules)} rules)"


class _RewriteState:
    """Memo table and rule counter for one normal-form computation."""

    def __init__(self, rs: RewriteSystem, budget: Optional[int] = None):
        self.rs = rs
        self.budget = rs.budget if budget is None else budget
        self.applied = 0
        self.memo: Dict[Word, Dict[Word, RatFun]] = {}

    def reduce(self, word: Word) -> Dict[Word, RatFun]:
        done = self.memo.get(word)
        if done is not None:
            return done
        replacement = None
        for i in range(len(word) - 1):
            replacement = self.rs.match(word[i], word[i + 1])
            if replacement is not None:
                break
        if replacement is None:
            result = {word: RatFun(1)}
            self.memo[word] = result
            return result
        self.applied += 1
        if self.applied > self.budget:
            logger.error("%s: rewrite budget of %d applications exhausted", self.rs.name, self.budget)
            raise RewriteBudgetExceeded(f"{self.rs.name}: more than {self.budget} rule applications")
        prefix, suffix = word[:i], word[i + 2:]
        out: Dict[Word, RatFun] = {}
        for w, c in replacement._terms.items():
            for w2, c2 in self.reduce(prefix + w + suffix).items():
                _accumulate(out, w2, c * c2)
        result = _drop_zeros(out)
        self.memo[word] = result
        return result


def normal_form(a: NCElem, rs: RewriteSystem, budget: Optional[int] = None) -> NCElem:
    """Fixed point of leftmost rule application."""
    state = _RewriteState(rs, budget)
    out: Dict[Word, RatFun] = {}
    for word, c in a._terms.items():
        for w, c2 in state.reduce(word).items():
            _accumulate(out, w, c * c2)
    return NCElem._raw(_drop_zeros(out), a.rank)


def _sl2_word(*gens, coeff=1) -> NCElem:
    return NCElem.word(*gens, rank=2, coeff=coeff)


def _sl2_torus_rules() -> List[RewriteRule]:
    e, f = Generator.E(1), Generator.F(1)
    k, ki = Generator.k(1), Generator.k(1, inverse=True)
    q_inv = Q ** -1
    return [
        RewriteRule((k, ki), NCElem.one(2)),
        RewriteRule((ki, k), NCElem.one(2)),
        RewriteRule((k, f), _sl2_word(f, k, coeff=q_inv)),
        RewriteRule((ki, f), _sl2_word(f, ki, coeff=Q)),
        RewriteRule((e, k), _sl2_word(k, e, coeff=q_inv)),
        RewriteRule((e, ki), _sl2_word(ki, e, coeff=Q)),
    ]


def sl2_rewrite_system() -> RewriteSystem:
    """PBW normal form F^a k^m E^b for U_q(sl2) with K = k^2."""
    e, f = Generator.E(1), Generator.F(1)
    k, ki = Generator.k(1), Generator.k(1, inverse=True)
    ef_rule = RewriteRule(
        (e, f),
        _sl2_word(f, e) + (_sl2_word(k, k) - _sl2_word(ki, ki)).scale(RatFun(1, LAMBDA)),
    )
    return RewriteSystem("sl2", _sl2_torus_rules() + [ef_rule])


def sl2_torus_rewrite_system() -> RewriteSystem:
    """Only the k-relations of U_q(sl2); E F is never rewritten, so [E, F] survives."""
    return RewriteSystem("sl2-torus", _sl2_torus_rules())


def cartan_rewrite_system(n: int) -> RewriteSystem:
    """Commuting torus k_1^{+-1} .. k_{n-1}^{+-1}: sort letters and cancel inverse pairs."""
    letters = [Generator.k(i, inverse=inv) for i in range(1, n) for inv in (False, True)]
    rules = []
    for a in letters:
        for b in letters:
            if a.index == b.index and a.kind != b.kind:
                rules.append(RewriteRule((a, b), NCElem.one(n)))
            elif a.sort_key > b.sort_key:
                rules.append(RewriteRule((a, b), NCElem.word(b, a, rank=n)))
    return RewriteSystem(f"torus{n}", rules)


# ── q-Serre relations ────────────────────────────────────────────────────


def _chev(kind: str, i: int, n: int) -> NCElem:
    return NCElem.word(Generator(kind, (i,)), rank=n)


def serre_relations(n: int) -> List[Tuple[str, NCElem]]:
    """Cubic relations for adjacent indices, commutators for distant ones."""
    two = qnum(2)
    rels = []
    for kind in (KIND_E, KIND_F):
        for i in range(1, n):
            for j in range(1, n):
                a, b = _chev(kind, i, n), _chev(kind, j, n)
                if abs(i - j) == 1:
                    rels.append((
                        f"{kind}{i}^2 {kind}{j} + {kind}{j} {kind}{i}^2 - [2] {kind}{i} {kind}{j} {kind}{i}",
                        a * a * b + b * a * a - (a * b * a).scale(two),
                    ))
                elif i < j - 1:
                    rels.append((f"[{kind}{i}, {kind}{j}]", a * b - b * a))
    return rels


def sq_alt_forms(n: int) -> List[Tuple[str, NCElem, NCElem]]:
    """Nested q-commutator forms paired with the cubic form they expand to."""
    two = qnum(2)
    q_inv = Q ** -1
    forms = []
    for kind in (KIND_E, KIND_F):
        for i in range(1, n - 1):
            a, b = _chev(kind, i, n), _chev(kind, i + 1, n)
            forms.append((
                f"[{kind}{i}, [{kind}{i}, {kind}{i + 1}]_q^-1]_q",
                q_commutator(a, q_commutator(a, b, q_inv), Q),
                a * a * b + b * a * a - (a * b * a).scale(two),
            ))
            forms.append((
                f"[{kind}{i + 1}, [{kind}{i + 1}, {kind}{i}]_q]_q^-1",
                q_commutator(b, q_commutator(b, a, Q), q_inv),
                b * b * a + a * b * b - (b * a * b).scale(two),
            ))
    return forms


def check_serre(n: int, reps: Sequence) -> List[Comparison]:
    """q-Serre relations in each representation, plus the free-algebra expansion of the nested form."""
    if n < 3:
        raise RankError(f"q-Serre relations need n >= 3, got n={n}")
    out = [
        Comparison("free", f"{label} expands to the cubic form", alt, cubic, tag="Sq-alt")
        for label, alt, cubic in sq_alt_forms(n)
    ]
    for rep in reps:
        zero = SparseMatrix.zero(rep.dim)
        for label, rel in serre_relations(n):
            out.append(Comparison(rep.label, label, rep.evaluate(rel), zero, tag="Sq"))
        for label, alt, _ in sq_alt_forms(n):
            out.append(Comparison(rep.label, label, rep.evaluate(alt), zero, tag="Sq-alt"))
    return out
