from fractions import Fraction

import numpy as np
import pytest
import sympy

from fgl_cobord.core.errors import ShapeError
from fgl_cobord.core.exact_linear import (
    ExactMatrix,
    hermite_normal_form,
    lattice_member,
    smith_normal_form,
    unimodular_inverse,
)


def test_matrix_drops_zeros_and_rejects_fractions():
    m = ExactMatrix(2, 2, {(0, 0): 3, (1, 1): 0})
    assert m.nnz == 1
    assert m[1, 1] == 0
    with pytest.raises(ShapeError):
        ExactMatrix(1, 1, {(0, 0): Fraction(1, 2)})
    with pytest.raises(ShapeError):
        ExactMatrix(1, 1, {(2, 0): 1})


def test_dense_numpy_and_product():
    a = ExactMatrix.from_dense([[1, 2], [3, 4]])
    b = ExactMatrix.from_dense(np.array([[0, 1], [1, 0]], dtype=object))
    assert (a @ b).to_dense() == [[2, 1], [4, 3]]
    assert a.transpose().to_dense() == [[1, 3], [2, 4]]
    assert a.to_numpy().shape == (2, 2)
    assert a.apply([1, 1]) == [3, 7]


def test_snf_of_diagonal_2_3():
    snf = smith_normal_form(ExactMatrix.from_dense([[2, 0], [0, 3]]))
    assert snf.diagonal == (1, 6)
    assert snf.torsion == (6,)
    assert snf.rank == 2


@pytest.mark.parametrize(
    "dense",
    [
        [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
        [[1, 2, 3], [2, 4, 6]],
        [[0, 0], [0, 0], [0, 5]],
        [[4, 6], [6, 9], [2, 3]],
    ],
)
def test_snf_transforms_reproduce_diagonal(dense):
    m = ExactMatrix.from_dense(dense)
    snf = smith_normal_form(m)
    assert snf.left_transform @ m @ snf.right_transform == snf.diagonal_matrix()
    nonzero = [d for d in snf.diagonal if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert unimodular_inverse(snf.left_transform) is not None
    assert unimodular_inverse(snf.right_transform) is not None


def test_snf_known_invariants():
    snf = smith_normal_form(ExactMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    assert snf.diagonal == (2, 6, 12)


def test_hnf_is_reduced_echelon():
    m = ExactMatrix.from_dense([[2, 3, 6], [4, 1, 8], [0, 5, 4]])
    hnf = hermite_normal_form(m)
    assert hnf.transform @ m == hnf.matrix
    h = hnf.matrix
    for r, c in enumerate(hnf.pivots):
        assert h[r, c] > 0
        assert all(0 <= h[i, c] < h[r, c] for i in range(r))
        assert all(h[r, k] == 0 for k in range(c))


def test_unimodular_inverse_rejects_non_unimodular():
    u = ExactMatrix.from_dense([[2, 1], [1, 1]])
    inverse = unimodular_inverse(u)
    assert u @ inverse == ExactMatrix.identity(2)
    with pytest.raises(ShapeError):
        unimodular_inverse(ExactMatrix.from_dense([[2, 0], [0, 1]]))
    with pytest.raises(ShapeError):
        unimodular_inverse(ExactMatrix(2, 3))


def test_lattice_membership_examples():
    member = lattice_member(ExactMatrix.from_dense([[2, 1], [0, 1]]), [3, 1])
    assert member
    assert member.coords == (1, 1)
    assert member.unique
    assert not lattice_member(ExactMatrix.from_dense([[2, 0], [0, 1]]), [1, 0])
    assert not lattice_member(ExactMatrix.from_dense([[1, 0], [0, 1]]), [Fraction(1, 2), 0])


def test_lattice_member_with_dependent_columns():
    basis = ExactMatrix.from_dense([[2, 4], [0, 0]])
    membership = lattice_member(basis, [6, 0])
    assert membership and not membership.unique
    assert basis.apply(list(membership.coords)) == [6, 0]
    assert not lattice_member(basis, [6, 1])


def test_lattice_member_shape_error():
    with pytest.raises(ShapeError, match="shape"):
        lattice_member(ExactMatrix.identity(2), [1, 2, 3])


def test_snf_edge_cases():
    assert smith_normal_form(ExactMatrix.from_dense([[6]])).diagonal == (6,)
    zero = smith_normal_form(ExactMatrix(2, 2))
    assert zero.diagonal == (0, 0)
    assert zero.rank == 0


def test_snf_ignores_insertion_order():
    entries = {(0, 0): 4, (0, 2): 6, (1, 1): 10, (2, 0): 2, (2, 2): 8}
    forward = ExactMatrix(3, 3, entries)
    backward = ExactMatrix(3, 3, dict(reversed(list(entries.items()))))
    assert smith_normal_form(forward) == smith_normal_form(backward)


def test_lattice_member_identity():
    member = lattice_member(ExactMatrix.identity(2), [1, -3])
    assert member.coords == (1, -3)


def test_lattice_member_matches_rational_solution_on_small_grid():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 4))
        dense = rng.integers(-3, 4, size=(n, n)).tolist()
        v = rng.integers(-3, 4, size=n).tolist()
        basis = ExactMatrix.from_dense(dense)
        membership = lattice_member(basis, v)
        if membership:
            assert basis.apply(list(membership.coords)) == v
        m = sympy.Matrix(dense)
        if m.det() != 0:
            solution = m.solve(sympy.Matrix(v))
            integral = all(x.is_integer for x in solution)
            assert bool(membership) == integral
            if integral:
                assert list(membership.coords) == [int(x) for x in solution]
