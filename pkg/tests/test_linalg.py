import pytest
from hypothesis import given, settings, strategies as st

from gnlc.linalg import (
    LinalgError,
    Matrix,
    SubspaceBasis,
    ZERO,
    ONE,
    gram_is_spd,
    image_basis,
    kernel_basis,
    orthogonal_complement,
    quotient_coordinates,
    rank,
    rat,
    row_space_basis,
    rref,
    solve,
    solve_many,
    subspace_contains,
    subspace_intersection,
    subspace_sum,
)

entries = st.integers(min_value=-6, max_value=6).map(rat)
small_matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda r: st.integers(min_value=1, max_value=5).flatmap(
        lambda c: st.lists(
            st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r
        ).map(Matrix.from_rows)
    )
)


def test_rat_parses_fractions():
    assert rat("2/4") == rat("1/2")
    assert rat(3) == rat("3")
    with pytest.raises(ZeroDivisionError):
        rat("1/0")


def test_matrix_basic_ops():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[0, 1], [1, 0]])
    assert (a * b).to_lists() == Matrix.from_rows([[2, 1], [4, 3]]).to_lists()
    assert (a + b - b) == a
    assert a.transpose().transpose() == a
    assert a.apply([1, 1]) == [rat(3), rat(7)]
    assert a.scale(2).entry(1, 1) == rat(8)


def test_stack_shapes():
    a = Matrix.from_rows([[1, 2]])
    with pytest.raises(LinalgError):
        a.stack_right(Matrix.from_rows([[1], [2]]))
    assert a.stack_below(Matrix.from_rows([[3, 4]])).rows == 2


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).dim == m.cols


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_kernel_vectors_annihilate(m):
    for v in kernel_basis(m).vectors:
        assert all(c == 0 for c in m.apply(list(v)))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_rref_is_idempotent_and_canonical(m):
    pivots, rows = rref(m)
    reduced = Matrix(len(rows), m.cols, [dict(r) for r in rows])
    pivots2, rows2 = rref(reduced)
    assert pivots == pivots2
    assert rows == rows2


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_solve_against_known_image(m):
    x = [ONE] * m.cols
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None
    assert m.apply(sol) == b


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_solve_many_matches_solve(m):
    bs = [m.apply([ONE] * m.cols), m.apply([rat(2)] * m.cols)]
    many = solve_many(m, bs)
    assert many is not None
    for sol, b in zip(many, bs):
        assert m.apply(sol) == b


def test_solve_inconsistent():
    m = Matrix.from_rows([[1, 0], [1, 0]])
    assert solve(m, [1, 2]) is None
    assert solve_many(m, [[1, 1], [1, 2]]) is None


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_image_and_row_space_dims(m):
    assert image_basis(m).dim == rank(m)
    assert row_space_basis(m).dim == rank(m)


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_quotient_coordinates_kernel_is_span(m):
    w = image_basis(m.transpose())  # row space as a subspace of R^cols
    q = quotient_coordinates(w)
    assert q.rows == m.cols - w.dim
    for v in w.vectors:
        assert all(c == 0 for c in q.apply(list(v)))
    assert rank(q) == q.rows


def test_subspace_algebra():
    a = SubspaceBasis(3, [[1, 0, 0], [0, 1, 0]])
    b = SubspaceBasis(3, [[0, 1, 0], [0, 0, 1]])
    assert subspace_sum(a, b).dim == 3
    inter = subspace_intersection(a, b)
    assert inter.dim == 1
    assert subspace_contains(inter, [0, 5, 0])
    assert not subspace_contains(a, [0, 0, 1])


def test_orthogonal_complement_splits():
    s = SubspaceBasis(3, [[1, 1, 0]])
    comp = orthogonal_complement(s, Matrix.identity(3))
    assert comp.dim == 2
    assert subspace_sum(s, comp).dim == 3


def test_gram_is_spd():
    assert gram_is_spd(Matrix.identity(3))
    assert not gram_is_spd(Matrix.from_rows([[1, 0], [0, -1]]))
    assert not gram_is_spd(Matrix.from_rows([[0, 1], [1, 0]]))
