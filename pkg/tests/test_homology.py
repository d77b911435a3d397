import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from equibar.abelian import AbelianGroup, stable_colimit
from equibar.bar import bar
from equibar.errors import EquibarError, TruncationError
from equibar.homology import (ChainComplex, homology_groups, induced_map,
                              is_homology_equivalence, normalized_chains)
from equibar.monoid import corpus
from equibar.simplicial import (SimplicialMap, circle, disjoint_union, point, product,
                                representable, sd)

from oracles import bar_homology, chain_homology


def _pairs(groups):
    return [(g.rank, list(g.torsion)) for g in groups]


# frozen from the tuple-enumeration / sympy oracle in tests/oracles.py
BAR_HOMOLOGY = {
    "trivial": [(1, []), (0, []), (0, []), (0, []), (0, [])],
    "C2": [(1, []), (0, [2]), (0, []), (0, [2]), (0, []), (0, [2])],
    "C3": [(1, []), (0, [3]), (0, []), (0, [3]), (0, [])],
    "C4": [(1, []), (0, [4]), (0, []), (0, [4]), (0, [])],
    "S3": [(1, []), (0, [2]), (0, []), (0, [6])],
    "max": [(1, []), (0, []), (0, []), (0, []), (0, [])],
}


@pytest.mark.parametrize("name", sorted(BAR_HOMOLOGY))
def test_bar_homology_frozen(name):
    M = corpus()[name]
    top = len(BAR_HOMOLOGY[name]) - 1
    assert _pairs(homology_groups(bar(M, top + 1), top)) == BAR_HOMOLOGY[name]


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
def test_bar_homology_matches_live_oracle(name):
    M = corpus()[name]
    top = 3
    assert _pairs(homology_groups(bar(M, top + 1), top)) == bar_homology(M.mul.tolist(), M.unit, top)


def test_spaces():
    assert _pairs(homology_groups(point(3), 2)) == [(1, []), (0, []), (0, [])]
    assert _pairs(homology_groups(representable(2, 4), 3)) == [(1, [])] + [(0, [])] * 3
    assert _pairs(homology_groups(circle(4), 3)) == [(1, []), (1, []), (0, []), (0, [])]
    torus = product(circle(4), circle(4))
    assert _pairs(homology_groups(torus, 3)) == [(1, []), (2, []), (1, []), (0, [])]
    two = disjoint_union(point(3), circle(3))
    assert _pairs(homology_groups(two, 2)) == [(2, []), (1, []), (0, [])]


def test_subdivision_preserves_homology():
    assert _pairs(homology_groups(sd(circle(7), 3), 2)) == [(1, []), (1, []), (0, [])]


def test_homology_needs_one_more_degree():
    with pytest.raises(TruncationError):
        normalized_chains(point(2), 2)


def test_chain_complex_from_matrices():
    # Z --2--> Z : H_0 = Z/2, H_1 = 0
    cc = ChainComplex.from_matrices([np.array([[2]]), np.zeros((1, 0), dtype=np.int64)])
    assert str(cc.homology(0)) == "Z/2"
    assert str(cc.homology(1)) == "0"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_chain_complex_against_sympy(a, b, c, data):
    # random d2, then d1 built from the left kernel of d2 so that d1 d2 = 0
    entries = st.integers(-3, 3)
    d2 = np.array(data.draw(st.lists(st.lists(entries, min_size=c, max_size=c),
                                     min_size=b, max_size=b)), dtype=np.int64)
    left = sympy.Matrix(d2.tolist()).T.nullspace()
    rows = [[int(v) for v in (vec.T * sympy.lcm([x.q for x in vec]))] for vec in left][:a]
    d1 = np.array(rows, dtype=np.int64).reshape(len(rows), b)
    matrices = {1: d1, 2: d2, 3: np.zeros((c, 0), dtype=np.int64)}
    cc = ChainComplex.from_matrices([matrices[1], matrices[2], matrices[3]])
    dims = {0: d1.shape[0], 1: b, 2: c, 3: 0}
    expected = chain_homology(matrices, dims, 2)
    assert [(g.rank, list(g.torsion)) for g in (cc.homology(q) for q in range(3))] == expected


def test_induced_maps():
    s = circle(4)
    ident = SimplicialMap.identity(s)
    h1 = induced_map(ident, 1)
    assert h1.is_isomorphism()
    # collapsing the circle to a point kills H_1
    p = point(4)
    collapse = SimplicialMap(s, p, [np.zeros(s.count(n), dtype=np.int64) for n in range(5)])
    assert induced_map(collapse, 1).is_zero()
    ok, witness = is_homology_equivalence(collapse, 2)
    assert not ok and witness["failing_degree"] == 1


def test_stable_colimit_cases():
    times_two = stable_colimit([0], [[2]], 3)
    assert not times_two.stabilized
    assert all(s.transition_injective for s in times_two.stages)
    assert times_two.stages[0].cokernel == AbelianGroup(0, (2,))
    with pytest.raises(EquibarError):
        times_two.colimit
    proj = stable_colimit([0, 2], [[1, 0], [0, 0]], 3)
    assert proj.stabilized_at == 1 and proj.colimit == AbelianGroup(1)
    ident = stable_colimit([0, 3], [[1, 0], [0, 1]], 2)
    assert ident.stabilized_at == 0 and ident.colimit == AbelianGroup(1, (3,))
    with pytest.raises(ValueError):
        stable_colimit([0], [[1]], 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=0, max_size=4))
def test_abelian_group_from_orders(orders):
    G = AbelianGroup.from_orders(orders)
    assert G.rank == orders.count(0)
    size = 1
    for o in orders:
        if o:
            size *= o
    prod = 1
    for t in G.torsion:
        prod *= t
    assert prod == size
