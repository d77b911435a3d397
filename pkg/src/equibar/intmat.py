"""Exact integer matrices and the Smith normal form.

Matrices are numpy arrays of dtype ``object`` holding Python integers, so
entries never overflow.  Row and column operations are vectorised through
numpy while the arithmetic itself stays arbitrary precision.
"""
from dataclasses import dataclass

import numpy as np


def as_int_matrix(rows, shape=None):
    """Copy ``rows`` into an object array of Python ints."""
    arr = np.array(rows, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    if arr.ndim != 2:
        if arr.size == 0 and shape is None:
            return np.zeros((0, 0), dtype=object)
        raise ValueError("expected a two-dimensional matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = int(v)
    return out


def zeros(m, n):
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(a, b):
    """Exact product; handles empty dimensions."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.dot(a, b)


def to_lists(a):
    return [[int(x) for x in row] for row in a]


@dataclass
class SmithForm:
    """``U @ M @ V == D`` with ``U @ Uinv == I`` and ``V @ Vinv == I``."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray

    @property
    def diagonal(self):
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    def invariant_factors(self):
        """Nonzero diagonal entries different from 1."""
        return [d for d in self.diagonal if d not in (0, 1)]


def _argmin_abs(block):
    best = None
    for idx, v in np.ndenumerate(block):
        if v != 0 and (best is None or abs(v) < best[0]):
            best = (abs(v), idx)
            if best[0] == 1:
                break
    return None if best is None else best[1]


def smith_normal_form(matrix, verify=True):
    """Smith normal form with unimodular transforms and their inverses.

    Pivots are chosen with minimal absolute value.  When ``verify`` is true
    (the default) the identities ``U M V = D``, ``U Uinv = I`` and
    ``V Vinv = I`` are checked exactly before returning.
    """
    M = matrix if isinstance(matrix, np.ndarray) and matrix.dtype == object else as_int_matrix(matrix)
    if M.ndim != 2:
        M = as_int_matrix(matrix)
    m, n = M.shape
    A = M.copy()
    U, Uinv, V, Vinv = identity(m), identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            U[[i, j]] = U[[j, i]]
            Uinv[:, [i, j]] = Uinv[:, [j, i]]

    def swap_cols(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]
            Vinv[[i, j]] = Vinv[[j, i]]

    def add_row(target, source, q):
        # row_target += q * row_source
        A[target] += q * A[source]
        U[target] += q * U[source]
        Uinv[:, source] -= q * Uinv[:, target]

    def add_col(target, source, q):
        # col_target += q * col_source
        A[:, target] += q * A[:, source]
        V[:, target] += q * V[:, source]
        Vinv[source] -= q * Vinv[target]

    for t in range(min(m, n)):
        idx = _argmin_abs(A[t:, t:])
        if idx is None:
            break
        swap_rows(t, t + idx[0])
        swap_cols(t, t + idx[1])
        while True:
            p = A[t, t]
            for i in range(t + 1, m):
                if A[i, t]:
                    add_row(i, t, -(A[i, t] // p))
            for j in range(t + 1, n):
                if A[t, j]:
                    add_col(j, t, -(A[t, j] // p))
            rest_col = [(abs(A[i, t]), i) for i in range(t + 1, m) if A[i, t]]
            rest_row = [(abs(A[t, j]), j) for j in range(t + 1, n) if A[t, j]]
            if rest_col or rest_row:
                best_c = min(rest_col) if rest_col else None
                best_r = min(rest_row) if rest_row else None
                if best_r is None or (best_c is not None and best_c[0] <= best_r[0]):
                    swap_rows(t, best_c[1])
                else:
                    swap_cols(t, best_r[1])
                continue
            bad = None
            for (i, j), v in np.ndenumerate(A[t + 1:, t + 1:]):
                if v % p:
                    bad = t + 1 + i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
            Uinv[:, t] = -Uinv[:, t]

    form = SmithForm(U, A, V, Uinv, Vinv)
    if verify:
        _verify(M, form)
    return form


def _verify(M, form):
    m, n = M.shape
    if not np.array_equal(matmul(matmul(form.U, M), form.V), form.D):
        raise ArithmeticError("Smith normal form check U M V = D failed")
    if not np.array_equal(matmul(form.U, form.Uinv), identity(m)):
        raise ArithmeticError("row transform is not unimodular")
    if not np.array_equal(matmul(form.V, form.Vinv), identity(n)):
        raise ArithmeticError("column transform is not unimodular")
    D = form.D
    for i in range(m):
        for j in range(n):
            if i != j and D[i, j] != 0:
                raise ArithmeticError("Smith form is not diagonal")
    diag = form.diagonal
    for a, b in zip(diag, diag[1:]):
        if a < 0 or (a == 0 and b != 0) or (a and b % a):
            raise ArithmeticError(f"divisibility chain broken: {diag}")


def kernel_basis(matrix):
    """Columns spanning the integer kernel (a saturated lattice)."""
    M = as_int_matrix(matrix) if not isinstance(matrix, np.ndarray) else matrix
    form = smith_normal_form(M)
    return form.V[:, form.rank:]


def solve(matrix, rhs):
    """An integer solution ``x`` of ``matrix @ x == rhs`` or ``None``."""
    M = as_int_matrix(matrix) if not isinstance(matrix, np.ndarray) else matrix
    b = np.array([int(v) for v in rhs], dtype=object)
    form = smith_normal_form(M)
    c = form.U.dot(b) if M.shape[0] else b
    y = np.zeros(M.shape[1], dtype=object)
    y.fill(0)
    for i, v in enumerate(c):
        d = form.D[i, i] if i < min(M.shape) else 0
        if d == 0:
            if v != 0:
                return None
        else:
            if v % d:
                return None
            y[i] = v // d
    x = form.V.dot(y) if M.shape[1] else y
    return [int(v) for v in x]


def determinant(matrix):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in row] for row in matrix]
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def lattice_basis(matrix):
    """Columns forming a basis of the lattice spanned by the columns of ``matrix``.

    Columns are inserted one at a time into an echelon basis; each insertion
    replaces a pair of vectors by a unimodular combination of them, so the
    span never changes.
    """
    k = matrix.shape[0]
    pivots = {}
    for j in range(matrix.shape[1]):
        v = [int(x) for x in matrix[:, j]]
        for i in range(k):
            if v[i] == 0:
                continue
            if i not in pivots:
                if v[i] < 0:
                    v = [-x for x in v]
                pivots[i] = v
                break
            b = pivots[i]
            g, x, y = _egcd(b[i], v[i])
            bi, vi = b[i] // g, v[i] // g
            pivots[i] = [x * p + y * q for p, q in zip(b, v)]
            v = [bi * q - vi * p for p, q in zip(b, v)]
    cols = [pivots[i] for i in sorted(pivots)]
    out = zeros(k, len(cols))
    for j, col in enumerate(cols):
        for i, val in enumerate(col):
            out[i, j] = val
    return out
