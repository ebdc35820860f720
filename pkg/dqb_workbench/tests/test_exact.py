from fractions import Fraction

import pytest

from dqb_workbench.base import FieldError, ShapeError
from dqb_workbench.exact import (Field, Quotient, SparseTensor, Subspace,
                                 compose, contract, echelon, identity,
                                 inverse, is_identity, kernel_basis, kron,
                                 matrices_equal, matrix, rows_of,
                                 solve_linear, solve_sparse)


def test_field_parse(Q, F7):
    assert Field.parse('Q') == Q
    assert Field.parse(' F7 ') == F7
    assert F7.name == 'F7'

    with pytest.raises(FieldError):
        Field.parse('F8')
    with pytest.raises(FieldError):
        Field.parse('R')


def test_scalars(Q, F7):
    assert Q.scalar('-3/6') == Q(Fraction(-1, 2))
    assert Q.format(Q.scalar('4/2')) == '2'
    assert Q.format(Q.scalar('-1/3')) == '-1/3'

    # reduced mod p
    assert F7.format(F7.scalar('-1')) == '6'
    assert F7.scalar('1/2') * F7(2) == F7.one
    assert F7.format(F7.scalar('9')) == '2'

    with pytest.raises(FieldError):
        F7.scalar('1/7')
    with pytest.raises(FieldError):
        Q.scalar('1/0')
    with pytest.raises(FieldError):
        Q.scalar('x')


def test_roots_of_unity(Q, F5, F7):
    assert Q.root_of_unity(2) == -Q.one
    assert Q.root_of_unity(3) is None
    zeta = F5.root_of_unity(4)
    assert zeta ** 4 == F5.one and zeta ** 2 != F5.one
    assert F7.root_of_unity(3) ** 3 == F7.one
    assert F5.root_of_unity(3) is None


def test_solve_linear(Q):
    A = matrix([[1, 1], [1, -1]], None, Q)
    assert solve_linear(A, [Q(2), Q(0)]) == [Q.one, Q.one]

    singular = matrix([[1, 1], [1, 1]], None, Q)
    assert solve_linear(singular, [Q(1), Q(2)]) is None
    # free variable pinned to zero
    assert solve_linear(singular, [Q(3), Q(3)]) == [Q(3), Q.zero]

    with pytest.raises(ShapeError):
        solve_linear(A, [Q(1)])


def test_solve_sparse_freedom(Q):
    solution, freedom = solve_sparse({0: {0: Q.one, 1: Q.one}},
                                     {0: Q(5)}, 3, Q)
    assert solution == {0: Q(5)}
    assert freedom == 2

    solution, _ = solve_sparse({0: {0: Q.one}, 1: {0: Q.one}},
                               {0: Q.one}, 1, Q)
    assert solution is None


def test_kernel_and_inverse(Q, F7):
    A = matrix([[1, 2, 3], [2, 4, 6]], None, Q)
    kernel = kernel_basis(A)
    assert len(kernel) == 2
    for vector in kernel:
        assert all(sum(a * x for a, x in zip(row, vector)) == 0
                   for row in [[1, 2, 3], [2, 4, 6]])

    B = matrix([[2, 1], [1, 1]], None, F7)
    B_inv = inverse(B, F7)
    assert is_identity(compose(B, B_inv))

    assert inverse(matrix([[1, 2], [2, 4]], None, Q), Q) is None
    with pytest.raises(ShapeError):
        inverse(A, Q)


def test_kron_index_order(Q):
    A = matrix([[1, 2], [3, 4]], None, Q)
    Id = identity(2, Q)
    K = kron(A, Id, Q)
    rows = rows_of(K)
    # (v, w) sits at v * 2 + w
    assert rows[0] == {0: Q(1), 2: Q(2)}
    assert rows[3] == {1: Q(3), 3: Q(4)}
    assert matrices_equal(kron(Id, Id, Q), identity(4, Q))

    with pytest.raises(ShapeError):
        compose(A, matrix([[1, 2, 3]], None, Q))


def test_subspace_and_quotient(Q):
    S = Subspace([{0: Q(2), 1: Q(2)}, {0: Q(1), 1: Q(1)}], 3, Q)
    assert S.dim == 1
    assert S.contains({0: Q(3), 1: Q(3)})
    assert not S.contains({0: Q.one})
    assert S.element(S.coordinates({0: Q(3), 1: Q(3)})) == \
        {0: Q(3), 1: Q(3)}

    R = Quotient([{0: Q.one, 1: -Q.one}], 3, Q)
    assert R.dim == 2
    assert R.project({0: Q.one}) == R.project({1: Q.one})
    assert R.project(R.lift({0: Q(4)})) == {0: Q(4)}
    assert is_identity(compose(R.projection, R.section))


def test_sparse_tensor(Q):
    t = SparseTensor((2, 2), {(0, 1): 3, (1, 0): 0}, Q)
    assert t.nnz == 1
    assert t[(0, 1)] == Q(3)
    assert t[(1, 1)] == Q.zero
    assert t.permute([1, 0])[(1, 0)] == Q(3)
    assert (t + t)[(0, 1)] == Q(6)

    full = SparseTensor((2,), {(0,): 1, (1,): 2}, Q)
    assert full.layout == 'dense'
    assert full.to_vector() == {0: Q(1), 1: Q(2)}

    with pytest.raises(ShapeError):
        SparseTensor((2,), {(2,): 1}, Q)
    with pytest.raises(ShapeError):
        t.to_vector()


def test_contract(Q):
    # matrix product as a contraction over the shared axis
    a = SparseTensor((2, 3), {(0, 0): 1, (0, 2): 2, (1, 1): -1}, Q)
    b = SparseTensor((3, 2), {(0, 1): 4, (2, 0): 1, (1, 1): 5}, Q)
    c = contract(a, b, [(1, 0)])
    assert c.shape == (2, 2)
    assert c.to_dict() == {(0, 0): Q(2), (0, 1): Q(4), (1, 1): Q(-5)}

    # free axes of the second factor follow those of the first
    v = SparseTensor((3,), {(1,): 1}, Q)
    assert contract(v, b, [(0, 0)]).to_dict() == {(1,): Q(5)}

    with pytest.raises(ShapeError):
        contract(a, a, [(1, 0)])
    with pytest.raises(ShapeError):
        contract(a, b, [(1, 0), (1, 0)])


def test_echelon(Q):
    basis, pivots = echelon([{0: 2, 1: 2}, {0: 1, 1: 1}, {1: 3}, {}], 2, Q)
    assert pivots == (0, 1)
    assert basis == [{0: Q(1)}, {1: Q(1)}]
