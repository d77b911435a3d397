import pytest

from equibar.bar import (bar, find_cofinal_generator, fixed_point_bijection_b,
                         ji_contraction_check, projection_to_bar, real_bar, telescope_stage_bar,
                         two_sided_bar, verify_group_completion)
from equibar.errors import MonoidError
from equibar.homology import homology_groups
from equibar.monoid import (corpus, cyclic, max_monoid, regular, symmetric3,
                            twisted_fixed_set)


def test_bar_faces_by_hand():
    M = symmetric3()
    B = bar(M, 3)
    for k in range(B.count(3)):
        m = B.label(3, k)
        assert B.label(2, B.face(3, 0)[k]) == m[1:]
        assert B.label(2, B.face(3, 3)[k]) == m[:2]
        assert B.label(2, B.face(3, 1)[k]) == (M.mul[m[0], m[1]], m[2])
        assert B.label(2, B.face(3, 2)[k]) == (m[0], M.mul[m[1], m[2]])


@pytest.mark.parametrize("name", sorted(corpus()))
def test_real_bar_reverses_and_conjugates(name):
    M = corpus()[name]
    R = real_bar(M, 4)
    for p in range(5):
        for k in range(R.base.count(p)):
            label = R.base.label(p, k)
            flipped = tuple(M.inv[x] for x in reversed(label))
            assert R.base.label(p, R.w[p][k]) == flipped


def test_two_sided_bar_counts():
    M = cyclic(3)
    Y = twisted_fixed_set(M)
    E = two_sided_bar(regular(M, "right"), M, Y, 3)
    E.check_identities()
    assert list(E.counts) == [3 * 3 ** p * 3 for p in range(4)]


@pytest.mark.parametrize("name", sorted(corpus()))
def test_fixed_point_bijection(name):
    M = corpus()[name]
    res = fixed_point_bijection_b(M, 3)
    assert res.ok
    fixed = len(M.fixed_elements())
    # a fixed (2q+1)-tuple is determined by its first q entries and a fixed middle entry
    assert res.fixed_counts == [M.size ** q * fixed for q in range(4)]
    assert res.target_counts == res.fixed_counts


@pytest.mark.parametrize("name", ["C2", "C4", "S3", "max"])
def test_ji_retraction(name):
    res = ji_contraction_check(corpus()[name], 2)
    assert res.retraction_exact
    assert all(d["inverse_isomorphisms"] for d in res.degrees)


def test_cofinal_generators():
    assert find_cofinal_generator(cyclic(4)).name == "e"
    gen = find_cofinal_generator(max_monoid())
    assert gen.name == "1"
    M = max_monoid()
    for x, (y, n) in gen.certificate.items():
        assert M.mul[M.names.index(x), M.names.index(y)] == M.power(gen.element, n)
    with pytest.raises(MonoidError):
        find_cofinal_generator(symmetric3())


def test_telescope_translation_is_simplicial():
    M = max_monoid()
    stage = telescope_stage_bar(M, 1, 2, "point", 3)
    stage.translation.check()
    with pytest.raises(ValueError):
        telescope_stage_bar(M, 1, 1, "other", 2)


@pytest.mark.parametrize("name", ["C2", "C4"])
def test_group_completion_group_like(name):
    rep = verify_group_completion(corpus()[name], 2, 4)
    assert rep["status"] == "PASS"
    assert [d["status"] for d in rep["degrees"]] == ["MATCH"] * 3
    assert all(d["bar_side"]["stabilized_at"] == 0 for d in rep["degrees"])


def test_group_completion_max_monoid():
    rep = verify_group_completion(max_monoid(), 2, 4)
    assert rep["status"] == "PASS"
    assert rep["pi0_localized_classes"] == 1
    h0 = rep["degrees"][0]["bar_side"]
    assert h0["stabilized_at"] <= 2 and h0["colimit"] == {"rank": 1, "torsion": []}
    assert [d["status"] for d in rep["degrees"]] == ["MATCH"] * 3


def test_group_completion_skips_non_commutative():
    rep = verify_group_completion(symmetric3(), 2, 4)
    assert rep["status"] == "SKIPPED"
    assert "not central" in rep["reason"]
    assert rep["retraction"] == "PASS"


def test_projection_homology():
    # d B(M, M, *) is contractible
    p = projection_to_bar(cyclic(2), 3)
    groups = homology_groups(p.source, 2)
    assert [str(g) for g in groups] == ["Z", "0", "0"]
