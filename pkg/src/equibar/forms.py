"""Symmetric and alternating bilinear forms over the integers.

A form is a Gram matrix ``G`` together with a sign ``epsilon`` such that
``G^T = epsilon G``.  Signatures are computed exactly from the characteristic
polynomial (a symmetric integer matrix has only real eigenvalues, so
Descartes' rule of signs counts positive and negative roots exactly).
"""
import itertools
from dataclasses import dataclass

import numpy as np
import sympy

from .errors import FormError
from .intmat import determinant

__all__ = [
    "BilinearForm", "FormInvariants", "K0Element", "validate_form", "orthogonal_sum",
    "hyperbolic", "standard_hyperbolic", "unit_form", "zero_form", "evaluate", "invariants",
    "stably_isomorphic", "find_congruence", "congruent", "k0_is_invertible",
    "hyperbolic_evenness_check",
    "symplectic_normalize", "random_unimodular", "witt_monoid_report",
]


def _matrix(rows):
    return tuple(tuple(int(v) for v in row) for row in rows)


@dataclass(frozen=True)
class BilinearForm:
    """Gram matrix (tuple of tuples of ints) and symmetry sign."""

    gram: tuple
    epsilon: int = 1

    @property
    def rank(self):
        return len(self.gram)

    @property
    def determinant(self):
        return determinant(self.gram)

    @property
    def nondegenerate(self):
        return abs(self.determinant) == 1

    def array(self):
        return np.array(self.gram, dtype=object).reshape(self.rank, self.rank)

    def congruent_by(self, P):
        """The form ``P^T G P``."""
        P = np.array(P, dtype=object).reshape(self.rank, -1)
        return BilinearForm(_matrix(P.T.dot(self.array()).dot(P)), self.epsilon)

    def to_json(self):
        return {"epsilon": self.epsilon, "gram": [list(r) for r in self.gram]}


def validate_form(gram, epsilon=1):
    """Check shape, ``G^T = epsilon G`` and (for ``epsilon = -1``) a zero diagonal."""
    if epsilon not in (1, -1):
        raise FormError(f"epsilon must be +1 or -1, got {epsilon}")
    rows = [list(r) for r in gram]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise FormError("Gram matrix is not square")
    G = _matrix(rows)
    for i in range(n):
        for j in range(n):
            if G[j][i] != epsilon * G[i][j]:
                raise FormError(f"Gram matrix violates G^T = {epsilon:+d} G at ({i}, {j})")
    if epsilon == -1 and any(G[i][i] for i in range(n)):
        raise FormError("alternating form has a nonzero diagonal entry")
    return BilinearForm(G, epsilon)


def zero_form(epsilon=1):
    return BilinearForm((), epsilon)


def unit_form():
    """The rank one form ``<1>``."""
    return BilinearForm(((1,),), 1)


def orthogonal_sum(F, G):
    if F.epsilon != G.epsilon:
        raise FormError("orthogonal sum of forms with different signs")
    n, m = F.rank, G.rank
    rows = [list(r) + [0] * m for r in F.gram] + [[0] * n + list(r) for r in G.gram]
    return BilinearForm(_matrix(rows), F.epsilon)


def hyperbolic(f, epsilon=1):
    """The hyperbolic form with Gram matrix ``[[0, f^T], [epsilon f, 0]]``."""
    f = [list(r) for r in f]
    n = len(f)
    if any(len(r) != n for r in f):
        raise FormError("hyperbolic form needs a square matrix")
    top = [[0] * n + [f[j][i] for j in range(n)] for i in range(n)]
    bottom = [[epsilon * v for v in f[i]] + [0] * n for i in range(n)]
    return validate_form(top + bottom, epsilon)


def standard_hyperbolic(n, epsilon=1):
    """``H^n`` (``epsilon = 1``) or the standard symplectic form (``epsilon = -1``)."""
    return hyperbolic(np.eye(n, dtype=int).tolist(), epsilon) if n else zero_form(epsilon)


def evaluate(F, x, y):
    if len(x) != F.rank or len(y) != F.rank:
        raise FormError("vector length does not match the rank")
    return sum(int(x[i]) * F.gram[i][j] * int(y[j])
               for i in range(F.rank) for j in range(F.rank))


@dataclass(frozen=True)
class FormInvariants:
    rank: int
    determinant: int
    signature: tuple
    parity: str

    def to_json(self):
        return {"rank": self.rank, "determinant": self.determinant,
                "signature": None if self.signature is None else list(self.signature),
                "parity": self.parity}


def _sign_changes(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def characteristic_polynomial(F):
    """Integer coefficients of ``det(x I - G)``, leading coefficient first."""
    if F.rank == 0:
        return [1]
    x = sympy.Symbol("x")
    poly = sympy.Matrix(F.gram).charpoly(x)
    return [int(c) for c in poly.all_coeffs()]


def invariants(F):
    """Rank, determinant, signature ``(p, q)`` and parity (``None`` when alternating)."""
    coeffs = characteristic_polynomial(F)
    if F.epsilon == 1:
        pos = _sign_changes(coeffs)
        n = len(coeffs) - 1
        neg = _sign_changes([c * (-1) ** (n - k) for k, c in enumerate(coeffs)])
        signature = (pos, neg)
        parity = "even" if all(F.gram[i][i] % 2 == 0 for i in range(F.rank)) else "odd"
    else:
        signature = None
        parity = None
    return FormInvariants(F.rank, F.determinant, signature, parity)


def stably_isomorphic(F, G):
    """Whether ``F ⊥ H^k`` and ``G ⊥ H^k`` are isometric for some ``k``.

    For unimodular symmetric forms this holds exactly when rank, signature and
    parity agree (after stabilization both sides are indefinite, where these
    invariants classify).
    """
    for X in (F, G):
        if X.epsilon != 1:
            raise FormError("stable classification is implemented for symmetric forms")
        if not X.nondegenerate:
            raise FormError("stable classification needs unimodular forms")
    a, b = invariants(F), invariants(G)
    return (a.rank, a.signature, a.parity) == (b.rank, b.signature, b.parity)


def find_congruence(F, G, bound=1):
    """A unimodular ``P`` with entries in ``[-bound, bound]`` and ``P^T F P = G``, or ``None``.

    Exhaustive backtracking over columns; independent of the invariant theory.
    """
    if F.rank != G.rank or F.epsilon != G.epsilon:
        return None
    n = F.rank
    if n == 0:
        return []
    A = F.array()
    vectors = [np.array(v, dtype=object) for v in itertools.product(range(-bound, bound + 1),
                                                                    repeat=n)]
    by_norm = {}
    for v in vectors:
        by_norm.setdefault(int(v.dot(A).dot(v)), []).append(v)
    cols = []

    def extend(j):
        if j == n:
            P = np.array(cols, dtype=object).T
            return abs(determinant(P.tolist())) == 1
        for v in by_norm.get(G.gram[j][j], []):
            if all(int(c.dot(A).dot(v)) == G.gram[i][j] for i, c in enumerate(cols)):
                cols.append(v)
                if extend(j + 1):
                    return True
                cols.pop()
        return False

    if extend(0):
        return [[int(cols[j][i]) for j in range(n)] for i in range(n)]
    return None


def congruent(F, G, P):
    """Check ``P^T F P = G`` exactly."""
    return F.congruent_by(P).gram == G.gram


# ---------------------------------------------------------------------------
# the Grothendieck-Witt monoid localized at hyperbolic forms


@dataclass(frozen=True)
class K0Element:
    """The formal difference ``[form] - m [H]``."""

    form: BilinearForm
    m: int = 0

    def normal_form(self):
        inv = invariants(self.form)
        if self.form.epsilon == 1:
            p, q = inv.signature
            return ("symmetric", p - self.m, q - self.m, inv.parity)
        return ("alternating", inv.rank // 2 - self.m)

    def __add__(self, other):
        return K0Element(orthogonal_sum(self.form, other.form), self.m + other.m)


def _negated(F):
    return BilinearForm(_matrix([[-v for v in r] for r in F.gram]), F.epsilon)


def k0_is_invertible(element):
    """Decide invertibility after inverting hyperbolic classes; returns ``(bool, witness)``.

    Every vector ``v`` of a hyperbolic form satisfies ``H(v, v) = 2 x·y``, an
    even number, and orthogonal sums of even forms are even.  So a class whose
    form has a vector of odd length cannot be cancelled by anything.  An even
    unimodular ``F`` is cancelled by ``-F``: ``F ⊥ -F`` is even, indefinite
    and of signature zero, hence stably hyperbolic.
    """
    F = element.form
    if not F.nondegenerate:
        raise FormError("K0 classes are represented by unimodular forms")
    if F.epsilon == -1:
        # F is isometric to rank/2 copies of the hyperbolic plane
        return True, {"inverse": {"form": zero_form(-1).to_json(), "m": F.rank // 2 - element.m},
                      "reason": "alternating unimodular forms are hyperbolic"}
    odd = [i for i in range(F.rank) if F.gram[i][i] % 2]
    if odd:
        i = odd[0]
        v = [1 if k == i else 0 for k in range(F.rank)]
        return False, {"odd_vector": v, "self_pairing": evaluate(F, v, v),
                       "reason": "hyperbolic forms pair every vector with itself evenly; "
                                 "no sum with this form can be hyperbolic"}
    inverse = K0Element(_negated(F), F.rank - element.m)
    total = element + inverse
    ok = total.normal_form() == K0Element(zero_form(1), 0).normal_form()
    if not ok:
        raise FormError("even form failed to cancel against its negative")
    return True, {"inverse": {"form": inverse.form.to_json(), "m": inverse.m},
                  "reason": "F + (-F) is even of signature zero"}


def hyperbolic_evenness_check(rng, trials=1000, max_rank=5, bound=10):
    """Sample ``H^n`` (``n <= max_rank``) and random vectors; every ``H(x, x)`` must be even.

    Returns ``(all_even, samples)`` where ``samples`` counts the vectors tried.
    """
    forms = [standard_hyperbolic(n, 1) for n in range(1, max_rank + 1)]
    for _ in range(trials):
        H = forms[int(rng.integers(len(forms)))]
        x = [int(v) for v in rng.integers(-bound, bound + 1, size=H.rank)]
        if evaluate(H, x, x) % 2:
            return False, {"form_rank": H.rank, "vector": x}
    return True, {"samples": trials}


# ---------------------------------------------------------------------------
# symplectic normalization


def _congruence_step(A, P, E):
    return E.T.dot(A).dot(E), P.dot(E)


def _identity(n):
    return np.array([[1 if r == c else 0 for c in range(n)] for r in range(n)],
                    dtype=object).reshape(n, n)


def _elementary(n, i, j, c):
    # right multiplication adds c times column i to column j
    E = _identity(n)
    E[i, j] += c
    return E


def _swap(n, i, j):
    E = _identity(n)
    E[[i, j]] = E[[j, i]]
    return E


def symplectic_normalize(F):
    """Unimodular ``P`` with ``P^T G P = [[0, I_n], [-I_n, 0]]``; returns ``(P, n)``.

    Works block by block: gcd steps on row ``k`` move a unit into position
    ``(k, k+1)``, then the rest of rows ``k`` and ``k+1`` is cleared.  The
    result is verified by exact multiplication.
    """
    if F.epsilon != -1:
        raise FormError("symplectic normalization needs epsilon = -1")
    validate_form(F.gram, -1)
    size = F.rank
    if size % 2:
        raise FormError("alternating unimodular forms have even rank")
    if not F.nondegenerate:
        raise FormError("form is degenerate")
    A = F.array().copy()
    P = _identity(size)
    for k in range(0, size, 2):
        while True:
            nz = [(abs(A[k, j]), j) for j in range(k + 1, size) if A[k, j]]
            if not nz:
                raise FormError("form is degenerate")
            _, j = min(nz)
            if j != k + 1:
                A, P = _congruence_step(A, P, _swap(size, j, k + 1))
            p = A[k, k + 1]
            done = True
            for j in range(k + 2, size):
                if A[k, j]:
                    q = A[k, j] // p
                    A, P = _congruence_step(A, P, _elementary(size, k + 1, j, -q))
                    if A[k, j]:
                        done = False
            if done:
                break
        if A[k, k + 1] not in (1, -1):
            raise FormError("form is degenerate")
        if A[k, k + 1] == -1:
            E = _identity(size)
            E[k + 1, k + 1] = -1
            A, P = _congruence_step(A, P, E)
        for j in range(k + 2, size):
            c = A[k + 1, j]
            if c:
                A, P = _congruence_step(A, P, _elementary(size, k, j, c))
    n = size // 2
    order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    Q = np.zeros((size, size), dtype=object)
    Q.fill(0)
    for new, old in enumerate(order):
        Q[old, new] = 1
    P = P.dot(Q)
    result = F.congruent_by(P)
    if result.gram != standard_hyperbolic(n, -1).gram or abs(determinant(P.tolist())) != 1:
        raise FormError("symplectic normalization failed its own verification")
    return [[int(v) for v in row] for row in P], n


def random_unimodular(n, rng, steps=None, bound=2):
    """A random unimodular integer matrix from elementary operations."""
    P = np.eye(n, dtype=np.int64)
    steps = 3 * n if steps is None else steps
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False) if n > 1 else (0, 0)
        if n > 1:
            P[:, j] += int(rng.integers(-bound, bound + 1)) * P[:, i]
        if rng.random() < 0.2:
            P[:, i] *= -1
    return [[int(v) for v in row] for row in P]


# ---------------------------------------------------------------------------
# summary of the two monoids


def witt_monoid_report(max_rank=4):
    """Invariant data for stable classes of unimodular forms over the integers."""
    from .localization import FreeCommutative, localize_monoid

    symmetric = []
    seen = set()
    one, minus, H = unit_form(), BilinearForm(((-1,),), 1), standard_hyperbolic(1, 1)
    for a in range(max_rank + 1):
        for b in range(max_rank + 1 - a):
            for h in range((max_rank - a - b) // 2 + 1):
                F = zero_form(1)
                for piece in [one] * a + [minus] * b + [H] * h:
                    F = orthogonal_sum(F, piece)
                key = K0Element(F).normal_form()
                # stable classes: normal form after subtracting h hyperbolics
                stable = K0Element(F, h).normal_form()
                if stable in seen:
                    continue
                seen.add(stable)
                invertible, _ = k0_is_invertible(K0Element(F, h))
                symmetric.append({"form": f"{a}<1> + {b}<-1> + {h}H", "class": list(key[1:]),
                                  "stable_class": list(stable[1:]), "invertible": invertible})
    alternating = []
    for n in range(max_rank // 2 + 1):
        J = standard_hyperbolic(n, -1)
        alternating.append({"rank": J.rank, "rank_map": n})
    return {
        "symmetric": symmetric,
        "unit_form_invertible": k0_is_invertible(K0Element(unit_form()))[0],
        "alternating": alternating,
        "alternating_monoid": "N (rank/2)",
        "alternating_group_completion": localize_monoid(FreeCommutative(1)).describe(),
        "scope": ("stable classes are separated by rank, signature and parity; this relies "
                  "on the classification of indefinite unimodular forms and is cross-checked "
                  "by exhaustive congruence search in small rank. Definite forms are not "
                  "classified and no complete presentation of the symmetric monoid is claimed."),
    }
