from fractions import Fraction

import pytest

from qgroup_monodromy.coeff import LAMBDA, Q, QExpr, RatFun
from qgroup_monodromy.errors import RankError, RepresentationError, StructureError, UnknownGeneratorError
from qgroup_monodromy.framework import Comparison
from qgroup_monodromy.harness import judge_exact
from qgroup_monodromy.linalg import SparseMatrix
from qgroup_monodromy.ncalg import Generator, NCElem, NCTensor
from qgroup_monodromy.uq import (
    AlgMatrix,
    Rep,
    antipode,
    build_M,
    build_Mpm,
    build_Npm,
    cartan,
    cartan_determinant,
    cartan_inverse_direct,
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
    coproduct,
    counit,
    fundamental_rep,
    invert_unipotent,
    k_weights,
    rep_eval,
    structure_comparisons,
    tensor_rep,
    trivial_rep,
)

E, F = Generator.E(1), Generator.F(1)
K, KI = Generator.k(1), Generator.k(1, inverse=True)
HALF = Fraction(1, 2)


def w(*gens, coeff=1):
    return NCElem.word(*gens, rank=2, coeff=coeff)


def test_cartan_inverse_closed_form():
    assert cartan(3).c_inv == ((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3)))
    for n in range(2, 11):
        assert cartan(n).c_inv == cartan_inverse_direct(n)
        assert cartan_determinant(n) == n


def test_k_weights_sum_to_zero():
    """(h^i)_alpha are traceless weights of the defining representation"""
    assert k_weights(2, 1) == [HALF, -HALF]
    for i in (1, 2):
        assert sum(k_weights(3, i)) == 0


def test_npm_tables_cover_small_ranks():
    n_plus, n_minus = build_Npm(3)
    f1 = NCElem.word(Generator.F(1), rank=3)
    f2 = NCElem.word(Generator.F(2), rank=3)
    assert n_plus.entry(1, 3) == f2 * f1 - (f1 * f2).scale(Q)
    assert n_plus.is_upper_triangular(strict=True)
    assert n_minus.is_lower_triangular(strict=True)
    with pytest.raises(RankError):
        build_Npm(5)


def test_mpm_for_sl2():
    """M+ = [[k^-1, -lambda F k], [0, k]] and M- = [[k, 0], [lambda k^-1 E, k^-1]]"""
    m_plus, m_minus = build_Mpm(2)
    assert m_plus == AlgMatrix([[w(KI), w(F, K, coeff=-LAMBDA)], [NCElem.zero(2), w(K)]])
    assert m_minus == AlgMatrix([[w(K), NCElem.zero(2)], [w(KI, E, coeff=LAMBDA), w(KI)]])


def test_invert_unipotent_requires_triangular():
    one, x = w(), w(E)
    assert invert_unipotent(AlgMatrix([[one, x], [NCElem.zero(2), one]])) == AlgMatrix([[one, -x], [NCElem.zero(2), one]])
    with pytest.raises(StructureError):
        invert_unipotent(AlgMatrix([[one, x], [x, one]]))


def test_fundamental_images():
    fund = fundamental_rep(2)
    assert fund.image(K) == SparseMatrix.diagonal([QExpr.monomial(q=HALF), QExpr.monomial(q=-HALF)])
    assert fund.image(E) == SparseMatrix.unit(2, 0, 1)
    with pytest.raises(UnknownGeneratorError):
        fund.image(Generator.m(1, 1))


def test_rep_eval_of_monodromy_entry():
    """m^1_1 of M for n = 2 is diagonal in the defining representation"""
    m11 = rep_eval(build_M(2).entry(1, 1), fundamental_rep(2))
    expected = SparseMatrix.diagonal([
        QExpr.monomial(q=Fraction(-5, 2)),
        QExpr.monomial(q=Fraction(3, 2)) - QExpr.monomial(q=-HALF) + QExpr.monomial(q=Fraction(-5, 2)),
    ])
    assert m11 == expected


def test_configured_reps_labels():
    reps = configured_reps(2, 3)
    assert [r.label for r in reps] == ["fund", "fund^2", "fund^3"]
    assert [r.dim for r in reps] == [2, 4, 8]
    with pytest.raises(RankError):
        configured_reps(2, 5)


def test_bad_images_are_rejected():
    fund = fundamental_rep(2)
    images = {g: fund.image(g) for g in (E, F, K, KI)}
    images[E] = images[E].scale(2)
    with pytest.raises(RepresentationError):
        Rep(2, images, "broken")


def test_tensor_rep_rank_mismatch():
    with pytest.raises(RankError):
        tensor_rep(fundamental_rep(2), fundamental_rep(3))


def test_trivial_rep_is_counit():
    triv = trivial_rep(2)
    assert triv.evaluate(w(E, F) + w(K)) == SparseMatrix.identity(1)


def test_hopf_maps_on_generators():
    assert coproduct(w(E)) == NCTensor.pure(w(E), w(K, K)) + NCTensor.pure(w(), w(E))
    assert coproduct(w(K)) == NCTensor.pure(w(K), w(K))
    assert counit(w(E) + w(K) * 3) == 3
    assert antipode(w(E)) == -(w(E, KI, KI))
    assert antipode(w(E, F)) == antipode(w(F)) * antipode(w(E))
    with pytest.raises(UnknownGeneratorError):
        counit(NCElem.word(Generator.m(1, 2), rank=2))


def test_hopf_axioms(reps2, assert_holds):
    assert_holds(check_hopf_axioms(2, reps2))


def test_matrix_coproduct(reps2, assert_holds):
    assert_holds(check_matrix_coproduct(2, reps2))


def test_counit_vacuum(reps2, assert_holds):
    assert_holds(check_counit_vacuum(2, reps2))


def test_rm_relations(reps2, assert_holds):
    assert_holds(check_rm_relations(2, reps2))


def test_dmpm_relations(reps2, assert_holds):
    assert_holds(check_dmpm_relations(2, reps2))


def test_rank_three_relations(fund3, assert_holds):
    assert_holds(check_rm_relations(3, fund3))
    assert_holds(check_mpm_qcomm(3, fund3))
    assert_holds(check_unipotent_inverse(3, fund3))


def test_structure_tables(assert_holds):
    assert_holds(structure_comparisons(2))
    assert_holds(structure_comparisons(3))


def test_cartan_checks(assert_holds):
    for n in (2, 3, 4):
        assert_holds(check_cartan_det(n))
        assert_holds(check_cartan_inverse(n))


def test_mismatch_is_reported():
    """A wrong entry surfaces as a witness, not an exception"""
    cmp = Comparison("scalar", "x = y", {"a": RatFun(Q)}, {"a": RatFun(1)})
    assert judge_exact(cmp) == "x = y [a]: lhs - rhs = q - 1"


@pytest.mark.parametrize("n", [3, 4])
def test_hopf_structure_at_higher_rank(n, reps3, reps4, assert_holds):
    reps = reps3 if n == 3 else reps4
    assert_holds(check_hopf_axioms(n, reps))
    assert_holds(check_matrix_coproduct(n, reps))
    assert_holds(check_counit_vacuum(n, reps))
    assert_holds(check_dmpm_relations(n, reps))


def test_rank_four_relations(reps4, assert_holds):
    assert_holds(check_mpm_qcomm(4, reps4))
    assert_holds(check_rm_relations(4, reps4))
    assert_holds(check_unipotent_inverse(4, reps4))
