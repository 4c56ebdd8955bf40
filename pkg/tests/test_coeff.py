import random
from fractions import Fraction

import mpmath
import pytest

from qgroup_monodromy.coeff import (
    LAMBDA,
    Q,
    U,
    U_POS,
    W,
    W_POS,
    QExpr,
    RatFun,
    eval_at_root,
    field_arith,
    pnum,
    qfact,
    qnum,
    weight_symbol,
)
from qgroup_monodromy.errors import CoefficientDivisionError, NumericDomainError, StructureError


def test_qnum_is_symmetric_sum():
    """[m] expands to q^{m-1} + q^{m-3} + ... + q^{1-m}"""
    assert qnum(2) == Q + Q ** -1
    assert qnum(3) == Q ** 2 + 1 + Q ** -2
    assert qnum(1) == 1
    assert qnum(-2) == -qnum(2)


def test_qfact_multiplies_qnums():
    assert qfact(0) == 1
    assert qfact(3) == qnum(2) * qnum(3)
    with pytest.raises(ValueError):
        qfact(-1)


def test_qnum_times_lambda():
    """[m] (q - q^-1) = q^m - q^-m"""
    for m in range(-20, 21):
        assert qnum(m) * LAMBDA == Q ** m - Q ** -m


def test_qnum_is_odd_up_to_twenty():
    for m in range(-20, 21):
        assert qnum(-m) == -qnum(m)


def _random_qexpr(rng):
    x = QExpr()
    for _ in range(rng.randint(1, 4)):
        x = x + QExpr.monomial(
            q=Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))),
            w=rng.randint(-2, 2),
            u=rng.randint(-1, 1),
            coeff=Fraction(rng.choice((-3, -2, -1, 1, 2, 5)), rng.randint(1, 4)),
        )
    return x


def test_ring_axioms_on_random_triples():
    rng = random.Random(1234)
    for _ in range(60):
        a, b, c = (_random_qexpr(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()


def test_eval_at_root_is_a_ring_homomorphism():
    """Sums and products survive evaluation to within 1e-12 relative error"""
    rng = random.Random(99)
    tol = mpmath.mpf(10) ** -12
    for _ in range(60):
        a, b = _random_qexpr(rng), _random_qexpr(rng)
        point = dict(h=rng.randint(3, 9), w_val=rng.choice((2, 3)), u_val=rng.choice((1, -2)))
        with mpmath.workdps(30):
            va, vb = eval_at_root(a, **point), eval_at_root(b, **point)
            for exact, value in ((a + b, va + vb), (a * b, va * vb)):
                got = eval_at_root(exact, **point)
                assert abs(got - value) <= tol * max(1, abs(value))


def test_text_rendering():
    assert str(LAMBDA) == "q - q^-1"
    assert str(QExpr.monomial(q=Fraction(1, 2), coeff=3)) == "3*q^1/2"
    assert str(QExpr.monomial(q=-1, w=2, u=-1)) == "q^-1*w^2*u^-1"
    assert str(QExpr.monomial(weights=(2,))) == "w1^2"
    assert str(QExpr()) == "0"
    assert str(QExpr.const(Fraction(-1, 3))) == "-1/3"


def test_negative_power_needs_monomial():
    assert (Q ** 2 * W) ** -1 == QExpr.monomial(q=-2, w=-1)
    with pytest.raises(StructureError):
        LAMBDA ** -1


def test_exact_division():
    """q^2 - q^-2 is divisible by lambda; the quotient is [2]"""
    assert (Q ** 2 - Q ** -2).divide_exact(LAMBDA) == qnum(2)
    assert Q.divide_exact(qnum(2)) is None
    with pytest.raises(CoefficientDivisionError):
        Q.divide_exact(QExpr())


def test_ratfun_reduces_to_polynomial():
    r = RatFun(Q ** 2 - Q ** -2, LAMBDA)
    assert r.is_polynomial()
    assert r == qnum(2)


def test_ratfun_normalizes_denominator():
    """The leading denominator monomial is scaled to 1"""
    r = RatFun(1, qnum(2))
    assert str(r) == "(q^-1)/(1 + q^-2)"
    assert r * qnum(2) == 1
    assert str(RatFun(3)) == "3"


def test_ratfun_field_operations():
    a, b = RatFun(1, qnum(2)), RatFun(Q, LAMBDA)
    assert a + b - b == a
    assert (a * b) / b == a
    assert a.inverse() == qnum(2)
    assert -a + a == 0
    assert (a ** 2) * (a ** -2) == 1


def test_zero_division_raises():
    with pytest.raises(CoefficientDivisionError):
        RatFun(1, 0)
    with pytest.raises(CoefficientDivisionError):
        RatFun(0).inverse()
    with pytest.raises(CoefficientDivisionError):
        field_arith(RatFun(0), op="inv")


def test_ratfun_is_unhashable():
    with pytest.raises(TypeError):
        hash(RatFun(1))


def test_field_arith_rejects_unknown_op():
    with pytest.raises(ValueError):
        field_arith(RatFun(1), RatFun(2), op="pow")


def test_bracket_identity():
    """[p-1][p+1] = [p]^2 - 1 with w = q^p"""
    lhs = field_arith(pnum(-1), pnum(1), op="mul")
    rhs = field_arith(field_arith(pnum(0), pnum(0), op="mul"), -1)
    assert lhs == rhs


def test_substitute_symbols():
    assert (W ** 2 + W).substitute(W_POS, Q) == Q ** 2 + Q
    assert (U * Q).substitute(U_POS, 1) == Q
    w1_sq = QExpr.monomial(weights=(-2,))
    assert w1_sq.substitute(weight_symbol(1), W, root=2) == W ** -1


def test_substitute_rejects_bad_requests():
    with pytest.raises(StructureError):
        Q.substitute(0, W)
    with pytest.raises(StructureError):
        QExpr.monomial(weights=(1,)).substitute(weight_symbol(1), W, root=2)


def test_classical_limit():
    assert qnum(3).at_q_one() == 3
    assert RatFun(Q ** 2, qnum(2)).at_q_one() == RatFun(Fraction(1, 2))
    assert LAMBDA.at_q_one() == 0


def test_eval_at_root():
    """[2] at q = exp(-i pi/4) is 2 cos(pi/4)"""
    value = eval_at_root(qnum(2), 4)
    assert abs(value - mpmath.sqrt(2)) < 1e-20


def test_eval_at_root_with_units():
    value = eval_at_root(RatFun(W * U, 2), 3, w_val=3, u_val=5)
    assert abs(value - 7.5) < 1e-20


def test_eval_at_root_domain_errors():
    with pytest.raises(NumericDomainError):
        eval_at_root(RatFun(1, qnum(2)), 2)
    with pytest.raises(NumericDomainError):
        eval_at_root(Q, 1)
    with pytest.raises(NumericDomainError):
        eval_at_root(QExpr.monomial(weights=(1,)), 5)
