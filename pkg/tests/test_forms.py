import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equibar.errors import FormError
from equibar.forms import (BilinearForm, K0Element, congruent, evaluate, find_congruence,
                           hyperbolic, hyperbolic_evenness_check, invariants,
                           k0_is_invertible, orthogonal_sum, random_unimodular,
                           stably_isomorphic, standard_hyperbolic, symplectic_normalize,
                           unit_form, validate_form, witt_monoid_report, zero_form)


def _diag(*entries):
    n = len(entries)
    return validate_form([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def test_unit_form_invariants():
    inv = invariants(unit_form())
    assert (inv.rank, inv.determinant, inv.signature, inv.parity) == (1, 1, (1, 0), "odd")
    assert inv.to_json()["signature"] == [1, 0]


def test_alternating_invariants_serialize():
    inv = invariants(standard_hyperbolic(2, -1))
    assert inv.signature is None and inv.to_json()["signature"] is None


def test_hyperbolic_form():
    H = hyperbolic([[1]], 1)
    assert H.gram == ((0, 1), (1, 0))
    assert hyperbolic([[1]], -1).gram == ((0, 1), (-1, 0))
    inv = invariants(standard_hyperbolic(2, 1))
    assert inv.signature == (2, 2) and inv.parity == "even" and inv.determinant == 1


def test_validation():
    with pytest.raises(FormError):
        validate_form([[0, 1], [1, 0]], -1)
    with pytest.raises(FormError):
        validate_form([[1, 2], [3, 1]])
    with pytest.raises(FormError):
        validate_form([[1, 0]])


def test_orthogonal_sum_and_evaluate():
    F = orthogonal_sum(unit_form(), standard_hyperbolic(1, 1))
    assert F.rank == 3
    assert evaluate(F, [1, 1, 1], [1, 1, 1]) == 3


def test_unit_class_is_not_invertible():
    ok, witness = k0_is_invertible(K0Element(unit_form()))
    assert not ok
    assert witness["self_pairing"] % 2 == 1
    even, info = hyperbolic_evenness_check(np.random.default_rng(0), trials=1000, max_rank=5)
    assert even and info["samples"] == 1000


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_hyperbolic_classes_are_invertible(m):
    ok, witness = k0_is_invertible(K0Element(standard_hyperbolic(m, 1)))
    assert ok
    inverse = K0Element(BilinearForm(tuple(map(tuple, witness["inverse"]["form"]["gram"])), 1),
                        witness["inverse"]["m"])
    total = K0Element(standard_hyperbolic(m, 1)) + inverse
    assert total.normal_form() == ("symmetric", 0, 0, "even")


def test_stable_classification_against_exhaustive_search():
    # <1> + <-1> + H and 2<1> + 2<-1> are congruent (odd indefinite, same signature)
    a = orthogonal_sum(_diag(1, -1), standard_hyperbolic(1, 1))
    b = _diag(1, 1, -1, -1)
    P = find_congruence(a, b, bound=1)
    assert P is not None and congruent(a, b, P)
    assert stably_isomorphic(a, b)
    # H and <1> + <-1> are not congruent: parity differs
    assert find_congruence(standard_hyperbolic(1, 1), _diag(1, -1), bound=2) is None
    assert not stably_isomorphic(standard_hyperbolic(1, 1), _diag(1, -1))


def test_symplectic_example_with_off_diagonal_three():
    F = validate_form([[0, 1, 0, 3], [-1, 0, 0, 0], [0, 0, 0, 1], [-3, 0, -1, 0]], -1)
    P, n = symplectic_normalize(F)
    assert n == 2
    assert congruent(F, standard_hyperbolic(2, -1), P)


def test_symplectic_rejects_bad_input():
    with pytest.raises(FormError):
        symplectic_normalize(unit_form())
    with pytest.raises(FormError):
        symplectic_normalize(validate_form([[0, 2], [-2, 0]], -1))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_symplectic_normalize_random_congruences(n, seed):
    rng = np.random.default_rng(seed)
    J = standard_hyperbolic(n, -1)
    A = J.congruent_by(random_unimodular(2 * n, rng))
    P, found = symplectic_normalize(A)
    assert found == n
    assert congruent(A, J, P)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=4), st.integers(0, 2 ** 32 - 1))
def test_invariants_are_congruence_invariant(diag, seed):
    F = _diag(*diag)
    G = F.congruent_by(random_unimodular(F.rank, np.random.default_rng(seed)))
    assert invariants(F) == invariants(G)


def test_k0_rejects_degenerate():
    with pytest.raises(FormError):
        k0_is_invertible(K0Element(_diag(2)))


def test_witt_report():
    rep = witt_monoid_report(3)
    assert rep["unit_form_invertible"] is False
    assert rep["alternating_group_completion"] == "Z"
    assert zero_form().rank == 0
