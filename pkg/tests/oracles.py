"""Slow, independent reference computations used by the tests.

Nothing here imports the package's chain, reduction or Smith-form code:
chain complexes are rebuilt from tuples with itertools and homology is
read off sympy's Smith normal form.
"""
import itertools

import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ


def bar_boundary(mul, unit, q):
    """Normalized bar complex of a monoid: boundary ``C_q -> C_{q-1}`` as a sympy matrix.

    Basis of ``C_q`` = tuples of length ``q`` without the unit, lexicographic.
    """
    n = len(mul)
    elems = [m for m in range(n) if m != unit]

    def basis(k):
        return list(itertools.product(elems, repeat=k))

    rows, cols = basis(q - 1), basis(q)
    index = {t: i for i, t in enumerate(rows)}
    M = sympy.zeros(len(rows), len(cols))
    for j, t in enumerate(cols):
        for i in range(q + 1):
            if i == 0:
                face = t[1:]
            elif i == q:
                face = t[:-1]
            else:
                face = t[: i - 1] + (mul[t[i - 1]][t[i]],) + t[i + 1:]
            if unit in face:
                continue
            M[index[face], j] += (-1) ** i
    return M, len(cols)


def _rank_and_factors(M):
    if M.rows == 0 or M.cols == 0:
        return 0, []
    D = sympy_snf(M, domain=ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    nonzero = [d for d in diag if d]
    return len(nonzero), sorted(d for d in nonzero if d != 1)


def bar_homology(mul, unit, top):
    """``[(free_rank, torsion_list)]`` for ``H_0 .. H_top`` of ``B M``."""
    out = []
    dims, ranks, torsion = {}, {}, {}
    for q in range(top + 2):
        if q == 0:
            dims[0] = 1
            ranks[0], torsion[0] = 0, []
            continue
        M, dim = bar_boundary(mul, unit, q)
        dims[q] = dim
        ranks[q], torsion[q] = _rank_and_factors(M)
    for q in range(top + 1):
        free = dims[q] - ranks[q] - ranks[q + 1]
        out.append((free, torsion[q + 1]))
    return out


def chain_homology(matrices, dims, top):
    """Homology from explicit integer boundary matrices ``matrices[q]: C_q -> C_{q-1}``."""
    ranks, torsion = {0: 0}, {0: []}
    for q in range(1, top + 2):
        ranks[q], torsion[q] = _rank_and_factors(sympy.Matrix(matrices[q]))
    return [(dims[q] - ranks[q] - ranks[q + 1], torsion[q + 1]) for q in range(top + 1)]


def composable_chains(source, target, n):
    """All composable chains of length ``n`` by brute force (objects for ``n = 0``)."""
    m = len(source)
    if n == 0:
        return [(c,) for c in sorted(set(source) | set(target))]
    return [t for t in itertools.product(range(m), repeat=n)
            if all(target[t[k]] == source[t[k + 1]] for k in range(n - 1))]


def pullback_count(f, m, sigma, n):
    """Number of pairs ``(x, theta)`` with ``f(x) = theta^*(sigma)`` in degree ``n``.

    ``theta^*`` is evaluated by composing single faces and degeneracies read
    off the epi-mono factorization by hand.
    """
    X, Y = f.source, f.target
    count = 0
    for theta in itertools.combinations_with_replacement(range(m + 1), n + 1):
        s = sigma
        # face part: delete the vertices of [m] missed by theta, top down
        for v in reversed(range(m + 1)):
            if v not in theta:
                deg = _current_degree(m, theta, v)
                s = int(Y.face(deg, _position(v, theta, m))[s])
        # degeneracy part: repeat vertices hit more than once
        image = sorted(set(theta))
        k = len(image) - 1
        for pos in range(n):
            if theta[pos] == theta[pos + 1]:
                s = int(Y.degeneracy(k, pos)[s])
                k += 1
        for x in range(X.count(n)):
            if int(f.maps[n][x]) == s:
                count += 1
    return count


def _current_degree(m, theta, v):
    # degree of the face before deleting vertex v (vertices above v already deleted)
    missing_above = sum(1 for u in range(v + 1, m + 1) if u not in theta)
    return m - missing_above


def _position(v, theta, m):
    # index of vertex v among the vertices of [m] still present (those below v all present
    # or not yet deleted because we delete top down)
    return v
