import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stablecoh.linalg import (DimensionError, FpMatrix, RightInverse, Subspace, intersect,
                              kernel_basis, mat_mul, rank, rref, solve)


def mats(p, max_rows=7, max_cols=7):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: st.lists(st.lists(st.integers(0, p - 1), min_size=s[1], max_size=s[1]),
                           min_size=s[0], max_size=s[0])).map(lambda rows: FpMatrix(rows, p))


primes = st.sampled_from([2, 3, 5, 7])
any_matrix = primes.flatmap(mats)


def brute_rank(A: FpMatrix) -> int:
    # rank as log_p of the number of distinct row combinations
    p = A.p
    seen = {tuple([0] * A.cols)}
    for row in A.a:
        seen = {tuple((np.array(v) + c * row) % p) for v in seen for c in range(p)}
    return round(np.log(len(seen)) / np.log(p))


def test_cycle_matrix_over_f2():
    # incidence of the 4-cycle: each column is an edge between consecutive vertices
    A = FpMatrix([[1, 0, 0, 1], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], 2)
    assert rank(A) == 3
    K = kernel_basis(A)
    assert K.dim == 1
    assert K.basis.tolist() == [[1, 1, 1, 1]]


def test_rref_is_canonical():
    A = FpMatrix([[2, 1, 0], [1, 2, 1], [0, 0, 1]], 3)
    R, piv = rref(A)
    assert piv == [0, 2]
    # zero rows are dropped
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_operators_and_shapes():
    A = FpMatrix([[1, 2], [3, 4]], 5)
    assert (A + A).tolist() == [[2, 4], [1, 3]]
    assert (A - A).is_zero()
    assert (-A + A).is_zero()
    assert (A @ FpMatrix.identity(2, 5)) == A
    assert A.T.tolist() == [[1, 3], [2, 4]]
    with pytest.raises(DimensionError):
        A @ FpMatrix.zeros(3, 1, 5)
    with pytest.raises(ValueError):
        FpMatrix([[1]], 4)


def test_solve_and_inconsistency():
    A = FpMatrix([[1, 1], [0, 1]], 3)
    B = FpMatrix([[2], [1]], 3)
    X = solve(A, B)
    assert (A @ X) == B
    C = FpMatrix([[1, 1], [2, 2]], 3)
    assert solve(C, FpMatrix([[1], [1]], 3)) is None
    with pytest.raises(DimensionError):
        solve(A, FpMatrix([[1]], 3))


def test_intersect_coordinate_planes():
    U = Subspace.from_rows([[1, 0, 0], [0, 1, 0]], 3, 2)
    V = Subspace.from_rows([[0, 1, 0], [0, 0, 1]], 3, 2)
    W = intersect([U, V])
    assert W.basis.tolist() == [[0, 1, 0]]
    with pytest.raises(DimensionError):
        intersect([U, Subspace.full(2, 2)])


def test_right_inverse_rejects_outside_image():
    A = FpMatrix([[1, 0], [0, 0]], 2)
    ri = RightInverse(A)
    y = np.array([[1], [0]], dtype=np.uint8)
    assert np.array_equal(mat_mul(A.a, ri(y), 2), y)
    with pytest.raises(ArithmeticError):
        ri(np.array([[0], [1]], dtype=np.uint8))


@settings(max_examples=60, deadline=None)
@given(any_matrix)
def test_rank_matches_brute_force(A):
    assert rank(A) == brute_rank(A)


@settings(max_examples=60, deadline=None)
@given(any_matrix)
def test_rank_nullity_and_kernel(A):
    K = kernel_basis(A)
    assert rank(A) + K.dim == A.cols
    if K.dim:
        assert (A @ K.basis.T).is_zero()


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(mats(p, 5, 5), mats(p, 5, 5))))
def test_solve_roundtrip(pair):
    A, X0 = pair
    if A.cols != X0.rows:
        X0 = FpMatrix(np.resize(X0.a, (A.cols, X0.cols)), A.p)
    B = A @ X0
    X = solve(A, B)
    assert X is not None and (A @ X) == B


@settings(max_examples=40, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(mats(p, 4, 5), mats(p, 4, 5))))
def test_intersection_is_largest_common_subspace(pair):
    A, B = pair
    if A.cols != B.cols:
        return
    U, V = Subspace.span(A), Subspace.span(B)
    W = intersect([U, V])
    assert W.is_subspace_of(U) and W.is_subspace_of(V)
    # dim U + dim V = dim(U+V) + dim(U∩V)
    both = Subspace.span(FpMatrix(np.concatenate([A.a, B.a]), A.p))
    assert U.dim + V.dim == both.dim + W.dim


@settings(max_examples=40, deadline=None)
@given(any_matrix)
def test_complement_completes_basis(A):
    U = Subspace.span(A)
    F = Subspace.full(A.cols, A.p)
    comp = U.complement_in(F)
    assert comp.rows + U.dim == A.cols
    if comp.rows:
        joined = Subspace.span(FpMatrix(np.concatenate([U.basis.a, comp.a]), A.p))
        assert joined == F
