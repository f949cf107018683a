from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from isx.linalg import (
    Matrix,
    Subspace,
    complement_basis,
    format_fraction,
    image_basis,
    inverse,
    kernel_basis,
    left_inverse,
    quotient,
    rank,
    row_reduce,
    solve,
    subspace_annihilator,
    symmetric_signature,
    to_fraction,
)
from oracles import det, eigen_signature, invertible_matrices, matrices, minor_rank, symmetric_matrices

F = Fraction


def test_rational_parsing():
    assert to_fraction("3") == 3
    assert to_fraction("-2/6") == F(-1, 3)
    assert to_fraction(F(1, 2)) == F(1, 2)
    for bad in ("1.5", "abc", "1/"):
        with pytest.raises(ValueError):
            to_fraction(bad)
    for bad in (0.5, True):
        with pytest.raises(TypeError):
            to_fraction(bad)
    assert format_fraction(F(-4, 6)) == "-2/3"
    assert format_fraction(F(5)) == "5"


def test_matrix_shape_checks():
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        Matrix([[1, 2]]) @ Matrix([[1, 2]])
    assert Matrix.zeros(0, 3).T.shape == (3, 0)
    assert (Matrix.zeros(2, 0) @ Matrix.zeros(0, 3)) == Matrix.zeros(2, 3)


def test_row_reduce_examples():
    rref, piv, r = row_reduce(Matrix.identity(2))
    assert (rref, piv, r) == (Matrix.identity(2), [0, 1], 2)
    rref, piv, r = row_reduce(Matrix.zeros(2, 2))
    assert (rref, piv, r) == (Matrix.zeros(2, 2), [], 0)
    rref, piv, r = row_reduce(Matrix([[1, 2], [2, 4]]))
    assert rref == Matrix([[1, 2], [0, 0]]) and piv == [0] and r == 1
    assert minor_rank(Matrix([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3)).dim == 0
    assert kernel_basis(Matrix.zeros(3, 3)) == Subspace.full(3)
    k = kernel_basis(Matrix([[1, 1]]))
    assert k.dim == 1 and k == Subspace.span(Matrix([[1], [-1]]))


def test_annihilator_examples():
    g = Matrix.identity(2)
    assert subspace_annihilator(Subspace.zero(2), g) == Subspace.full(2)
    assert subspace_annihilator(Subspace.full(2), g).dim == 0
    assert subspace_annihilator(Subspace.span(Matrix([[1], [0]])), g) == Subspace.span(Matrix([[0], [1]]))
    with pytest.raises(ValueError):
        subspace_annihilator(Subspace.full(3), g)


def test_signature_examples():
    assert symmetric_signature(Matrix.identity(3)) == (3, 0, 0)
    assert symmetric_signature(Matrix([[0, 1], [1, 0]])) == (1, 1, 0)
    assert symmetric_signature(Matrix.zeros(3, 3)) == (0, 0, 3)
    assert symmetric_signature(Matrix.zeros(0, 0)) == (0, 0, 0)
    with pytest.raises(ValueError):
        symmetric_signature(Matrix([[0, 1], [0, 0]]))


def test_solve_examples():
    b = Matrix([[1], [2]])
    assert solve(Matrix.identity(2), b) == b
    assert solve(Matrix.zeros(2, 2), b) is None
    assert solve(Matrix([[2]]), Matrix([[1]])) == Matrix([[F(1, 2)]])


def test_inverse_singular():
    with pytest.raises(ValueError):
        inverse(Matrix([[1, 2], [2, 4]]))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_minor_oracle(m):
    assert rank(m) == minor_rank(m)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_properties(m):
    rref, piv, r = row_reduce(m)
    assert piv == sorted(set(piv)) and r == len(piv)
    assert row_reduce(rref)[0] == rref
    assert rank(m) == rank(m.T)
    # kernel and row space fill the domain; coker and ker of the transpose agree
    k = kernel_basis(m)
    assert (m @ k.basis).is_zero() and k.dim + r == m.cols
    assert quotient(image_basis(m)).dim == kernel_basis(m.T).dim


@settings(max_examples=100, deadline=None)
@given(matrices(min_rows=1), st.data())
def test_solve_exact(m, data):
    x = data.draw(matrices(rows=m.cols, cols=1))
    b = m @ x
    y = solve(m, b)
    assert y is not None and m @ y == b
    # a vector outside the column space has no solution
    comp = complement_basis(image_basis(m))
    if comp.cols:
        assert solve(m, comp.select_columns([0])) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4).flatmap(lambda n: invertible_matrices(n)))
def test_inverse(m):
    inv = inverse(m)
    assert m @ inv == Matrix.identity(m.rows) == inv @ m
    if m.rows:
        assert det(inv.tolist()) * det(m.tolist()) == 1


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_subspace_algebra(m):
    s = image_basis(m)
    comp = complement_basis(s)
    assert (s + Subspace.span(comp)) == Subspace.full(m.rows)
    assert s.intersection(Subspace.span(comp)).dim == 0
    q = quotient(s)
    assert q.proj @ q.section == Matrix.identity(q.dim)
    assert (q.proj @ s.basis).is_zero()
    if s.dim:
        assert left_inverse(s.basis) @ s.basis == Matrix.identity(s.dim)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_annihilator_dimension(m, data):
    s = image_basis(m)
    g = data.draw(matrices(rows=m.rows, min_cols=0, max_cols=4))
    ann = subspace_annihilator(s, g)
    assert (s.basis.T @ g @ ann.basis).is_zero()
    assert ann.dim == g.cols - minor_rank(g.T @ s.basis)


@settings(max_examples=150, deadline=None)
@given(symmetric_matrices())
def test_signature_matches_eigenvalue_oracle(g):
    assert symmetric_signature(g) == eigen_signature(g)


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(max_size=3), st.data())
def test_signature_congruence_invariant(g, data):
    p = data.draw(invertible_matrices(g.rows))
    assert symmetric_signature(p.T @ g @ p) == symmetric_signature(g)


def test_hyperbolic_step_needed():
    # zero diagonal everywhere forces the two-by-two step
    g = Matrix([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    assert symmetric_signature(g) == eigen_signature(g) == (1, 2, 0)
