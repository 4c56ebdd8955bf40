import random

import pytest

from qgroup_monodromy.coeff import LAMBDA, Q, RatFun, qnum
from qgroup_monodromy.errors import RankError, RewriteBudgetExceeded, StructureError, UnknownGeneratorError
from qgroup_monodromy.linalg import SparseMatrix
from qgroup_monodromy.ncalg import (
    Generator,
    NCElem,
    NCTensor,
    RewriteRule,
    RewriteSystem,
    cartan_rewrite_system,
    check_serre,
    classical_limit,
    normal_form,
    q_commutator,
    serre_relations,
    sl2_rewrite_system,
    sl2_torus_rewrite_system,
)

E, F = Generator.E(1), Generator.F(1)
K, KI = Generator.k(1), Generator.k(1, inverse=True)


def w(*gens, coeff=1):
    return NCElem.word(*gens, rank=2, coeff=coeff)


def test_generator_names_and_order():
    assert [g.name for g in (E, F, K, KI, Generator.m(1, 2))] == ["E1", "F1", "k1", "k1^-1", "m1_2"]
    assert F.sort_key < K.sort_key < KI.sort_key < E.sort_key
    assert K.inverse() == KI
    with pytest.raises(StructureError):
        E.inverse()


def test_product_concatenates_words():
    x = w(E) + w(F, coeff=Q)
    y = x * w(K)
    assert y.coefficient((E, K)) == 1
    assert y.coefficient((F, K)) == Q
    assert len(y) == 2


def test_ranks_must_agree():
    with pytest.raises(RankError):
        w(E) * NCElem.word(E, rank=3)


def test_zero_coefficients_vanish():
    x = w(E, coeff=Q) - w(E, coeff=Q)
    assert x.is_zero()
    assert str(x) == "0"


def test_text_is_sorted_descending():
    x = w(F) + w(E, F) + 2
    assert str(x) == "E1 F1 + F1 + (2)"


def test_q_commutator():
    assert q_commutator(w(E), w(F), Q) == w(E, F) - w(F, E, coeff=Q)


def test_sl2_commutator_normal_form():
    """E F = F E + (k^2 - k^-2)/lambda"""
    rs = sl2_rewrite_system()
    expected = w(F, E) + (w(K, K) - w(KI, KI)).scale(RatFun(1, LAMBDA))
    assert normal_form(w(E, F), rs) == expected


def test_sl2_relation_reduces_to_zero():
    """[E, F] k - (K - K^-1)/lambda k vanishes in normal form"""
    rs = sl2_rewrite_system()
    big_k = w(K, K) - w(KI, KI)
    rel = (w(E, F) - w(F, E)) * w(K) - (big_k * w(K)).scale(RatFun(1, LAMBDA))
    assert normal_form(rel, rs).is_zero()


def test_sl2_torus_moves_left_of_e():
    rs = sl2_rewrite_system()
    assert normal_form(w(E, K), rs) == w(K, E, coeff=Q ** -1)
    assert normal_form(w(K, KI, F), rs) == w(F)


def test_normal_form_is_idempotent():
    rs = sl2_rewrite_system()
    once = normal_form(w(E, E, F, F, K), rs)
    assert normal_form(once, rs) == once


def _random_word(rng, longest):
    return w(*(rng.choice((E, F, K, KI)) for _ in range(rng.randint(0, longest))))


def test_sl2_normal_form_on_random_words():
    """Idempotent, and reducing factors first gives the same result"""
    rs = sl2_rewrite_system()
    rng = random.Random(2024)
    for _ in range(80):
        x = _random_word(rng, 6)
        once = normal_form(x, rs)
        assert normal_form(once, rs) == once
        a, b, c = (_random_word(rng, 2) for _ in range(3))
        nf = normal_form(a * b * c, rs)
        assert normal_form(a * (b * c), rs) == normal_form((a * b) * c, rs)
        assert normal_form(normal_form(a * b, rs) * normal_form(c, rs), rs) == nf
        assert normal_form(a * normal_form(b * c, rs), rs) == nf


def test_sl2_rules_lie_in_the_ideal():
    rs = sl2_rewrite_system()
    for rule in rs.rules:
        assert normal_form(w(*rule.pattern) - rule.replacement, rs).is_zero()


def test_sl2_torus_system_keeps_commutator():
    rs = sl2_torus_rewrite_system()
    assert normal_form(w(E, F), rs) == w(E, F)
    assert normal_form(w(F, E, K), rs) == w(F, K, E, coeff=Q ** -1)
    assert normal_form(w(K, F, KI), rs) == w(F, coeff=Q ** -1)


def test_rewrite_budget():
    with pytest.raises(RewriteBudgetExceeded):
        normal_form(w(E, E, F, F), sl2_rewrite_system(), budget=1)


def test_rules_must_decrease_words():
    with pytest.raises(StructureError):
        RewriteSystem("bad", [RewriteRule((F, E), w(E, F))])


def test_torus_sorting():
    rs = cartan_rewrite_system(3)
    k1, k2 = Generator.k(1), Generator.k(2)
    word = NCElem.word(k1.inverse(), k2, k1, rank=3)
    assert normal_form(word, rs) == NCElem.word(k2, rank=3)


def test_evaluate_and_reverse():
    images = {E: SparseMatrix.unit(2, 0, 1), F: SparseMatrix.unit(2, 1, 0)}
    one = SparseMatrix.identity(2)
    assert w(E, F).evaluate(images, one) == SparseMatrix.unit(2, 0, 0)
    assert w(E, F).evaluate(images, one, reverse=True) == SparseMatrix.unit(2, 1, 1)
    with pytest.raises(UnknownGeneratorError):
        w(K).evaluate(images, one)


def test_tensor_contract():
    t = NCTensor.pure(w(E), w(K)) + NCTensor.pure(NCElem.one(2), w(E))
    assert t.contract(lambda l: NCElem.word(*l, rank=2), lambda r: NCElem.word(*r, rank=2)) == w(E, K) + w(E)
    assert (t * NCTensor.one(2)) == t


def test_classical_limit_commutes_letters():
    x = w(E, F) - w(F, E, coeff=Q)
    assert classical_limit(x).is_zero()


def test_serre_relations_counts():
    """n = 4 gives cubic relations for adjacent pairs and commutators for distant ones"""
    labels = [label for label, _ in serre_relations(4)]
    assert len(labels) == 2 * (4 + 1)
    assert "[E1, E3]" in labels
    cubic = dict(serre_relations(3))["E1^2 E2 + E2 E1^2 - [2] E1 E2 E1"]
    e1, e2 = NCElem.word(Generator.E(1), rank=3), NCElem.word(Generator.E(2), rank=3)
    assert cubic == e1 * e1 * e2 + e2 * e1 * e1 - (e1 * e2 * e1).scale(qnum(2))


def test_check_serre(fund3, assert_holds):
    assert_holds(check_serre(3, fund3))


def test_check_serre_needs_rank_three():
    with pytest.raises(RankError):
        check_serre(2, ())


def test_serre_relations_at_rank_four(reps4, assert_holds):
    assert_holds(check_serre(4, reps4))
