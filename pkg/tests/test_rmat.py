from fractions import Fraction

import pytest

from qgroup_monodromy.coeff import LAMBDA, Q, QExpr, RatFun, qfact, qnum
from qgroup_monodromy.errors import RankError, StructureError
from qgroup_monodromy.ncalg import Generator, NCElem, classical_limit
from qgroup_monodromy.rmat import (
    TensorOp,
    basis_tuple,
    braided,
    check_braid,
    check_detq_free_golden,
    check_eps_contract,
    check_exchange_Mpm,
    check_far_commute,
    check_qdet_M,
    check_qdet_Mpm,
    check_qybe,
    check_reflection,
    dj_rmatrix,
    embed,
    index_of,
    permutation,
    q_eps,
    qdet_free,
    r_plus,
)


def m(a, b):
    return NCElem.word(Generator.m(a, b), rank=2)


def test_index_round_trip():
    assert index_of((1, 0, 1), 2) == 5
    assert basis_tuple(5, 2, 3) == (1, 0, 1)


def test_rhat_matches_golden(golden):
    assert str(braided(dj_rmatrix(2))) == golden("rhat_n2.txt")


def test_r_is_identity_at_q_one():
    for n in (2, 3):
        assert dj_rmatrix(n).at_q_one() == TensorOp.identity(n, 2)


def test_permutation_squares_to_one():
    p = permutation(3)
    assert p * p == TensorOp.identity(3, 2)


def test_embed_reversed_slots_transposes_legs():
    r = dj_rmatrix(2)
    p = permutation(2)
    assert embed(r, (2, 1), 2) == p * r * p
    assert embed(r, (1, 2), 2) == r


def test_embed_rejects_bad_slots():
    r = dj_rmatrix(2)
    with pytest.raises(StructureError):
        embed(r, (1, 1), 3)
    with pytest.raises(StructureError):
        embed(r, (1, 4), 3)


def test_operators_on_different_spaces():
    with pytest.raises(StructureError):
        dj_rmatrix(2) * dj_rmatrix(3)


def test_r_plus_inverts_r21():
    r21 = embed(dj_rmatrix(3), (2, 1), 2)
    assert r21 * r_plus(3) == TensorOp.identity(3, 2)


def test_q_eps_components():
    eps = q_eps(2)
    assert eps.get((0, 1)) == QExpr.monomial(q=Fraction(1, 2), coeff=-1)
    assert eps.get((1, 0)) == QExpr.monomial(q=Fraction(-1, 2))
    assert eps.get((0, 0)) == 0
    for n in (2, 3, 4, 5):
        assert q_eps(n).contract_self() == qfact(n)


def test_qdet_free_matches_golden(golden):
    assert str(qdet_free(2)) == golden("qdet_free_n2.txt")


def test_qdet_free_classical_limit():
    """At q = 1 with commuting entries the quantum determinant is the ordinary one"""
    assert classical_limit(qdet_free(2)) == m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)


def test_qdet_free_rank_limits():
    with pytest.raises(RankError):
        qdet_free(4)


def test_qdet_free_rank_three_classical_limit():
    det = classical_limit(qdet_free(3))
    assert len(det) == 6
    word = tuple(Generator.m(i, i) for i in (1, 2, 3))
    assert det.coefficient(word) == RatFun(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_qybe(n, assert_holds):
    assert_holds(check_qybe(n))


def test_braid_and_far_commute(assert_holds):
    assert_holds(check_braid(2))
    assert_holds(check_braid(3))
    assert_holds(check_far_commute(2))


def test_eps_contract(assert_holds):
    for n in (2, 3, 4):
        assert_holds(check_eps_contract(n))


def test_detq_free_golden(assert_holds):
    assert_holds(check_detq_free_golden(2))


def test_qdet_mpm(reps2, fund3, assert_holds):
    assert_holds(check_qdet_Mpm(2, reps2))
    assert_holds(check_qdet_Mpm(3, fund3))


def test_qdet_m(reps2, assert_holds):
    assert_holds(check_qdet_M(2, reps2))


def test_exchange_relations(reps2, fund3, assert_holds):
    assert_holds(check_exchange_Mpm(2, reps2))
    assert_holds(check_exchange_Mpm(3, fund3))


def test_reflection_equation(reps2, assert_holds):
    assert_holds(check_reflection(2, reps2))


def test_qdet_m_intermediate_keeps_commutator(assert_holds):
    """Substituting M into det_q gives the displayed form before [E, F] is reduced"""
    cmp, = [c for c in check_qdet_M(2, ()) if c.relation == "det_q(M) before the commutation relation"]
    assert_holds([cmp])
    e, f, k = Generator.E(1), Generator.F(1), Generator.k(1)
    assert cmp.lhs.coefficient((e, f, k, k)) == RatFun(-LAMBDA * LAMBDA, qnum(2))
    assert cmp.lhs.coefficient((k, k, k, k)) == RatFun(LAMBDA, qnum(2))
    assert cmp.lhs.scalar_part() == RatFun(2 * Q ** -1, qnum(2))


def test_rank_three_determinant_and_reflection(reps3, assert_holds):
    assert_holds(check_qdet_M(3, reps3))
    assert_holds(check_reflection(3, reps3))
    assert_holds(check_exchange_Mpm(3, reps3))


def test_rank_four_determinant_of_gauss_factors(reps4, assert_holds):
    assert_holds(check_qdet_Mpm(4, reps4))
