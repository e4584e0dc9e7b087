import itertools

import numpy as np
import pytest

from stablecoh.catalog import elementary_abelian
from stablecoh.invariants import (MatrixGroup2, Poly2, action_matrix, compare_invariants_vs_limit,
                                  dickson_generators, invariant_basis, matrix_to_automorphism,
                                  monomials, polynomial_model, polys_in_degree, swap_group)
from stablecoh.linalg import FpMatrix, rank
from stablecoh.resolution import induced_maps, resolution_for


def series_coefficients(degrees, N):
    # coefficients of 1/prod(1 - t^d) up to t^N
    c = [1] + [0] * N
    for d in degrees:
        for n in range(d, N + 1):
            c[n] += c[n - d]
    return c


def test_poly_arithmetic():
    x, y = Poly2.var(2, 0), Poly2.var(2, 1)
    assert str((x + y) ** 2) == "x1^2 + x2^2"
    assert str(x * x + x * y + y * y) == "x1^2 + x1*x2 + x2^2"
    assert (x + x).is_zero()
    v = (x * y).vector(2)
    assert Poly2.from_vector(2, 2, v) == x * y


def test_action_matrix_example():
    g = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    A = action_matrix(g, 2)
    # columns in the order x1^2, x1*x2, x2^2
    assert A.tolist() == [[1, 1, 1], [0, 1, 0], [0, 0, 1]]


def test_gl_orders():
    assert MatrixGroup2.gl(2).order == 6
    assert MatrixGroup2.gl(3).order == 168
    assert MatrixGroup2.gl(2).is_closed()


def test_gl2_invariants_follow_hilbert_series():
    H = MatrixGroup2.gl(2)
    dims = [invariant_basis(H, d).dim for d in range(13)]
    assert dims == series_coefficients([2, 3], 12)


@pytest.mark.parametrize("n,degrees", [(1, [1]), (2, [2, 3]), (3, [4, 6, 7]), (4, [8, 12, 14, 15])])
def test_dickson_degrees(n, degrees):
    assert [d for _, d in dickson_generators(n)] == degrees


@pytest.mark.parametrize("n", [2, 3])
def test_dickson_invariant_and_independent(n):
    H = MatrixGroup2.gl(n)
    gens = dickson_generators(n)
    degs = [d for _, d in gens]
    for c, d in gens:
        assert invariant_basis(H, d).contains(c.vector(d))
    top = 8 if n == 2 else 10
    want = series_coefficients(degs, top)
    for d in range(top + 1):
        polys = polys_in_degree(gens, d)
        # monomials in the generators are linearly independent and span the invariants
        if polys:
            assert rank(FpMatrix([p.vector(d) for p in polys], 2)) == len(polys) == want[d]
        assert invariant_basis(H, d).dim == want[d]


def test_swap_invariants():
    dims = [invariant_basis(swap_group(), d).dim for d in range(9)]
    assert dims == series_coefficients([1, 2], 8)


def test_matrix_automorphism_transport():
    P = elementary_abelian(2)
    R = resolution_for(P, 2, 4)
    model = polynomial_model(P, R, 4)
    for g in MatrixGroup2.gl(2).elements:
        phi = matrix_to_automorphism(P, g)
        mats = induced_maps(phi, R, R, 4)
        for d in range(5):
            assert model.transport(d, mats[d]) == action_matrix(g, d)


@pytest.mark.parametrize("n,which,N", [(1, "trivial", 6), (2, "gl", 8), (2, "swap", 8), (3, "gl", 7)])
def test_limit_equals_fixed_space(n, which, N):
    H = {"gl": MatrixGroup2.gl, "trivial": MatrixGroup2.trivial}.get(which, lambda n: swap_group())(n)
    rep = compare_invariants_vs_limit(n, H, N)
    assert rep.ok
    assert rep.limit_dims == rep.invariant_dims


def test_monomial_order():
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
