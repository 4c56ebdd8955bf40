import pytest

from qgroup_monodromy.coeff import LAMBDA, Q, RatFun, W, W_POS, qnum
from qgroup_monodromy.errors import CoefficientDivisionError, StructureError
from qgroup_monodromy.linalg import SparseMatrix


def test_identity_and_units():
    one = SparseMatrix.identity(3)
    e12 = SparseMatrix.unit(3, 0, 1)
    assert one * e12 == e12
    assert e12 * e12 == SparseMatrix.zero(3)
    assert e12.transpose() == SparseMatrix.unit(3, 1, 0)
    assert one.nnz() == 3


def test_entry_bounds():
    with pytest.raises(StructureError):
        SparseMatrix(2, {(2, 0): 1})
    with pytest.raises(StructureError):
        SparseMatrix.identity(2) + SparseMatrix.identity(3)


def test_zero_entries_are_dropped():
    m = SparseMatrix(2, {(0, 0): 0, (1, 1): Q})
    assert m.nnz() == 1
    assert (m - m).is_zero()


def test_kron_orders_left_factor_first():
    """(e12 (x) 1)[i*d + k, j*d + k] is set for every k"""
    m = SparseMatrix.unit(2, 0, 1).kron(SparseMatrix.identity(2))
    assert [(i, j) for i, j, _ in m.items()] == [(0, 2), (1, 3)]


def test_inverse_over_coefficient_field():
    m = SparseMatrix(2, {(0, 0): Q, (0, 1): LAMBDA, (1, 1): qnum(2)})
    inv = m.inverse()
    assert m * inv == SparseMatrix.identity(2)
    assert inv * m == SparseMatrix.identity(2)
    assert inv.get(0, 1) == RatFun(-LAMBDA, Q * qnum(2))


def test_singular_inverse_raises():
    with pytest.raises(CoefficientDivisionError):
        SparseMatrix.unit(2, 0, 1).inverse()


def test_scalar_multiplication_and_maps():
    m = SparseMatrix.diagonal([W, Q])
    assert (Q * m).get(1, 1) == Q ** 2
    assert m.substitute(W_POS, Q) == SparseMatrix.diagonal([Q, Q])
    assert m.at_q_one() == SparseMatrix.diagonal([W, 1])
    assert str(SparseMatrix.unit(2, 1, 0, Q)) == "1,0: q"
