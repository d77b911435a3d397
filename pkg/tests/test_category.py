import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equibar.bar import bar, real_bar
from equibar.category import (CategoryWithDuality, FiniteCategory, StrictDuality,
                              category_corpus, compare_sd_nerve, compare_sym, d_construction,
                              from_monoid, load_category, nerve, poset, real_nerve,
                              sd_category, sd_duality, sym_category)
from equibar.errors import CategoryError
from equibar.monoid import cyclic, symmetric3, trivial
from equibar.simplicial import point, representable

from oracles import composable_chains


@pytest.mark.parametrize("name", sorted(category_corpus()))
def test_nerve_counts_against_brute_force(name):
    C = category_corpus()[name].category
    N = nerve(C, 4)
    N.check_identities()
    for n in range(5):
        chains = composable_chains(C.source.tolist(), C.target.tolist(), n)
        assert N.count(n) == len(chains)
        if n:
            assert [tuple(c) for c in N.chains[n].tolist()] == chains


def test_small_nerves():
    assert nerve(from_monoid(trivial()).category, 3).same_structure(point(3))
    assert nerve(poset(1).category, 3).same_structure(representable(1, 3))
    assert nerve(from_monoid(cyclic(2)).category, 4).same_structure(bar(cyclic(2), 4))
    assert nerve(from_monoid(symmetric3()).category, 3).same_structure(bar(symmetric3(), 3))


def test_real_nerve_matches_real_bar():
    rn = real_nerve(from_monoid(cyclic(2)), 4)
    rb = real_bar(cyclic(2), 4)
    assert rn.base.same_structure(rb.base)
    assert all(np.array_equal(a, b) for a, b in zip(rn.w, rb.w))
    triv = real_nerve(from_monoid(trivial()), 3)
    assert all(np.array_equal(w, np.arange(len(w))) for w in triv.w)


def test_order_preserving_identity_is_not_a_duality():
    C = poset(1).category
    with pytest.raises(CategoryError):
        StrictDuality(C, [0, 1], list(range(C.n_morphisms)))
    # the reversal is accepted
    real_nerve(poset(1), 3)


def test_non_involutive_duality_is_not_strict():
    # inversion composed with conjugation on S3 is contravariant but does not square to id
    M = symmetric3()
    C = from_monoid(M).category
    g = M.names.index("(012)")
    gi = M.inverse(g)
    Tm = [int(M.mul[M.mul[g, M.inverse(m)], gi]) for m in range(M.size)]
    with pytest.raises(CategoryError):
        StrictDuality(C, [0], Tm)


def test_sd_category_examples():
    assert sd_category(from_monoid(trivial()).category).n_morphisms == 1
    S = sd_category(poset(1).category)
    assert S.n_objects == 3
    S2 = sd_category(from_monoid(cyclic(2)).category)
    assert S2.n_objects == 2
    assert S2.n_morphisms == bar(cyclic(2), 3).count(3)


def test_sd_composition_rule_by_hand():
    C = from_monoid(symmetric3()).category
    S = sd_category(C)
    chains = [tuple(c) for c in S.chains.tolist()]
    for b in range(0, S.n_morphisms, 7):
        for a in np.nonzero(S.comp[b] >= 0)[0][:5]:
            h1, g1, i1 = chains[a]
            h2, g2, i2 = chains[b]
            want = (C.comp[h2, h1], g2, C.comp[i1, i2])
            assert chains[S.comp[b, a]] == want


@pytest.mark.parametrize("name", sorted(category_corpus()))
def test_sd_nerve_equals_nerve_sd(name):
    res = compare_sd_nerve(category_corpus()[name].category, 3)
    assert res.ok, res.failure


@pytest.mark.parametrize("name,objects", [("trivial", 1), ("C2", 2), ("S3", 4)])
def test_sym_counts(name, objects):
    sym = sym_category(category_corpus()[name])
    assert sym.n_objects == objects


@pytest.mark.parametrize("name", sorted(category_corpus()))
def test_sym_constructions_agree(name):
    res = compare_sym(category_corpus()[name])
    assert res.objects_agree and res.morphisms_agree and res.composition_agrees


def test_sd_duality_is_involution():
    D = category_corpus()["S3"]
    F = sd_duality(D)
    assert F.after(F).is_identity()


@pytest.mark.parametrize("name", sorted(category_corpus()))
def test_d_construction(name):
    D = category_corpus()[name]
    dc = d_construction(D)
    assert dc.duality.is_strict
    assert dc.K.functor.after(dc.I.functor).is_identity()


def test_d_construction_of_c2():
    dc = d_construction(category_corpus()["C2"])
    assert dc.category.n_objects == 2
    trivial_dc = d_construction(category_corpus()["trivial"])
    assert trivial_dc.category.n_objects == 1 and trivial_dc.category.n_morphisms == 1


def test_d_construction_strictifies_a_non_strict_duality():
    # one-object C3 with T = inversion and eta = g: T T = id but eta is not the identity
    M = cyclic(3, involution="inverse")
    C = from_monoid(M).category
    g = M.names.index("g")
    D = CategoryWithDuality(C, [0], M.inv, eta=[g])
    assert not D.is_strict
    dc = d_construction(D)
    assert dc.duality.is_strict
    Tm = dc.duality.on_morphisms
    assert np.array_equal(Tm[Tm], np.arange(dc.category.n_morphisms))


def test_bad_eta_is_rejected():
    # C4 with T = id: eta = g is natural (C4 is abelian) but T(g) g = g^2 is not the identity
    M = cyclic(4)
    C = from_monoid(M).category
    with pytest.raises(CategoryError):
        CategoryWithDuality(C, [0], M.inv, eta=[M.names.index("g")])
    # S3 with inversion: eta = (01) is not central, so not natural
    S = symmetric3()
    with pytest.raises(CategoryError):
        CategoryWithDuality(from_monoid(S).category, [0], S.inv, eta=[S.names.index("(01)")])
    # C2 with eta = g passes both conditions
    M2 = cyclic(2)
    assert not CategoryWithDuality(from_monoid(M2).category, [0], M2.inv, eta=[1]).is_strict


def test_category_validation():
    C = poset(1).category
    comp = C.comp.copy()
    comp[0, 0] = -1
    with pytest.raises(CategoryError):
        FiniteCategory(C.objects, C.morphisms, C.source, C.target, comp, C.identities)


def test_json_round_trip(tmp_path):
    D = category_corpus()["poset2"]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(D.to_json()))
    E = load_category(str(path))
    assert E.category.same_as(D.category)
    assert np.array_equal(E.on_morphisms, D.on_morphisms)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 3))
def test_posets(n):
    D = poset(n)
    assert compare_sd_nerve(D.category, 2).ok
    assert compare_sym(D).ok
    # symmetric forms of [n]: arrows i <= n - i, fixed by reversal
    assert sym_category(D).n_objects == n // 2 + 1


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 5), st.sampled_from(["identity", "inverse"]))
def test_cyclic_monoid_categories(n, involution):
    D = from_monoid(cyclic(n, involution=involution))
    assert compare_sd_nerve(D.category, 2).ok
    res = compare_sym(D)
    assert res.ok
    assert res.direct.n_objects == len(cyclic(n, involution=involution).fixed_elements())
