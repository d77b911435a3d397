import numpy as np
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ

from equibar import intmat

small_matrices = st.integers(0, 5).flatmap(
    lambda m: st.integers(0, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                           min_size=m, max_size=m).map(lambda rows: (rows, m, n))))


def _sympy_factors(rows, m, n):
    if m == 0 or n == 0:
        return []
    D = sympy_snf(sympy.Matrix(rows), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(m, n)) if D[i, i] != 0)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_smith_form_identities_and_factors(data):
    rows, m, n = data
    M = intmat.as_int_matrix(rows, shape=(m, n))
    form = intmat.smith_normal_form(M)  # verify=True checks U M V = D and unimodularity
    assert np.array_equal(intmat.matmul(intmat.matmul(form.U, M), form.V), form.D)
    ours = sorted(d for d in form.diagonal if d)
    assert ours == _sympy_factors(rows, m, n)


def test_smith_form_known_example():
    M = intmat.as_int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    form = intmat.smith_normal_form(M)
    assert form.diagonal == [2, 6, 12]
    assert form.rank == 3
    assert form.invariant_factors() == [2, 6, 12]


def test_smith_form_handles_big_entries():
    big = 10 ** 30
    M = intmat.as_int_matrix([[big, 0], [0, big * 3]])
    assert intmat.smith_normal_form(M).diagonal == [big, 3 * big]


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_kernel_basis_is_kernel(data):
    rows, m, n = data
    M = intmat.as_int_matrix(rows, shape=(m, n))
    K = intmat.kernel_basis(M)
    assert K.shape[0] == n
    if K.shape[1] and m:
        assert not np.any(intmat.matmul(M, K))
    rank = sympy.Matrix(rows).rank() if m and n else 0
    assert K.shape[1] == n - rank


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_determinant_matches_sympy(rows):
    assert intmat.determinant(rows) == sympy.Matrix(rows).det()


def test_solve():
    M = intmat.as_int_matrix([[2, 0], [0, 3]])
    assert intmat.solve(M, [4, 9]) == [2, 3]
    assert intmat.solve(M, [1, 0]) is None


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_lattice_basis_spans_same_lattice(data):
    rows, m, n = data
    M = intmat.as_int_matrix(rows, shape=(m, n))
    B = intmat.lattice_basis(M)
    assert B.shape[0] == m
    # every column of M is an integer combination of B and vice versa
    for j in range(n):
        assert intmat.solve(B, M[:, j]) is not None if B.shape[1] else not any(M[:, j])
    for j in range(B.shape[1]):
        assert intmat.solve(M, B[:, j]) is not None
    # a basis: independent columns
    if B.shape[1]:
        assert sympy.Matrix(intmat.to_lists(B)).rank() == B.shape[1]
