import json
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equibar.bar import bar
from equibar.errors import NotSimplicialError, RelationError, TruncationError
from equibar.monoid import cyclic
from equibar.simplicial import (BisimplicialSet, SimplicialMap, SimplicialSet,
                                attach_real_structure, circle, diagonal, discrete,
                                disjoint_union, fixed_points, monotone_maps, pi0, point,
                                product, representable, sd, sd_action, sd_h, sd_v,
                                subdivide_operator)


def test_representable_counts():
    # monotone maps [n] -> [m] number C(m + n + 1, n + 1)
    x = representable(2, 4)
    assert list(x.counts) == [comb(2 + n + 1, n + 1) for n in range(5)]
    assert [len(x.nondegenerate(n)) for n in range(5)] == [3, 3, 1, 0, 0]
    x.check_identities()


def test_point_and_circle():
    p = point(3)
    assert p.counts == (1, 1, 1, 1)
    s = circle(4)
    s.check_identities()
    # one nondegenerate simplex in degrees 0 and 1, n + 1 simplices in degree n
    assert list(s.counts) == [1, 2, 3, 4, 5]
    assert [len(s.nondegenerate(n)) for n in range(5)] == [1, 1, 0, 0, 0]


def test_broken_identity_is_located():
    x = representable(1, 2)
    faces = [[]] + [[x.face(n, i).copy() for i in range(n + 1)] for n in (1, 2)]
    faces[2][0] = faces[2][1].copy()
    degens = [[x.degeneracy(n, j) for j in range(n + 1)] for n in range(2)] + [[]]
    broken = SimplicialSet(x.counts, faces, degens)
    with pytest.raises(RelationError) as info:
        broken.check_identities()
    assert info.value.degree == 2


def test_truncation_is_enforced():
    x = point(2)
    with pytest.raises(TruncationError):
        x.face(3, 0)
    with pytest.raises(TruncationError):
        x.degeneracy(2, 0)


def test_json_round_trip():
    x = circle(3)
    y = SimplicialSet.from_json(json.loads(json.dumps(x.to_json())))
    assert y.same_structure(x)


def test_operator_matches_composite_faces():
    x = representable(3, 3)
    # theta = (0, 2): d_3 d_1 on a 3-simplex keeps vertices 0 and 2
    ids = np.arange(x.count(3))
    via_operator = x.operator((0, 2), 3)[ids]
    via_faces = x.face(2, 1)[x.face(3, 3)[ids]]
    assert np.array_equal(via_operator, via_faces)


def test_subdivided_operator():
    # Sd sends theta: [1] -> [2] to the map [3] -> [5] of the doubled order
    assert subdivide_operator((0, 2), 2) == (0, 2, 3, 5)
    assert subdivide_operator((1,), 2) == (1, 4)


def test_sd_of_simplex_is_simplex_in_double_degree():
    for m in range(3):
        x = representable(m, 7)
        s = sd(x, 3)
        s.check_identities()
        assert list(s.counts) == [x.count(2 * n + 1) for n in range(4)]


def test_sd_needs_enough_degrees():
    with pytest.raises(TruncationError):
        sd(point(4), 3)


def test_product_and_union():
    a, b = representable(1, 3), circle(3)
    p = product(a, b)
    p.check_identities()
    assert list(p.counts) == [a.count(n) * b.count(n) for n in range(4)]
    u = disjoint_union(a, b)
    u.check_identities()
    assert len(pi0(u)) == 2


def test_map_check_rejects_non_simplicial():
    x, y = representable(1, 2), representable(1, 2)
    maps = [np.arange(x.count(n)) for n in range(3)]
    maps[0] = maps[0][::-1].copy()
    with pytest.raises(NotSimplicialError):
        SimplicialMap(x, y, maps)


def _reversal(m, d):
    x = representable(m, d)
    w = []
    for n in range(d + 1):
        w.append([x.index(n, tuple(m - v for v in reversed(x.label(n, k))))
                  for k in range(x.count(n))])
    return x, w


def test_real_structure_on_simplex():
    x, w = _reversal(2, 4)
    real = attach_real_structure(x, w)
    action = sd_action(real, 1)
    fixed = fixed_points(action)
    fixed.check_identities()
    # fixed vertices of Sd Delta^2: edges (a, 2 - a) of Delta^2, i.e. (0, 2) and (1, 1)
    assert fixed.count(0) == 2


def test_identity_is_not_a_real_structure_on_an_edge():
    x = representable(1, 2)
    w = [np.arange(x.count(n)) for n in range(3)]
    with pytest.raises(RelationError) as info:
        attach_real_structure(x, w)
    assert info.value.degree == 1


def test_pi0():
    x = disjoint_union(discrete(3, 2), representable(2, 2))
    assert len(pi0(x)) == 4


def _bisimplicial_from_bar():
    b = bar(cyclic(2), 7)
    return BisimplicialSet.external_product(b, representable(1, 7))


def test_diagonal_of_double_subdivision_is_subdivision_of_diagonal():
    B = _bisimplicial_from_bar()
    B.check_identities()
    lhs = diagonal(sd_h(sd_v(B, 3), 3), 3)
    rhs = sd(diagonal(B, 7), 3)
    assert lhs.same_structure(rhs)


def test_horizontal_and_vertical_subdivision_commute():
    B = _bisimplicial_from_bar()
    assert sd_h(sd_v(B, 2), 2).same_structure(sd_v(sd_h(B, 2), 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_monotone_map_counts(n, m):
    maps = monotone_maps(n, m)
    assert len(maps) == comb(n + m + 1, n + 1)
    assert all(all(a <= b for a, b in zip(t, t[1:])) for t in maps)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2))
def test_products_of_simplices_satisfy_identities(a, b):
    product(representable(a, 3), representable(b, 3)).check_identities()
