"""Bar constructions for finite monoids with anti-involution.

Simplices of ``B(X, M, Y)`` in degree ``p`` are tuples ``(x, m_1, ..., m_p, y)``
encoded in mixed radix, so every structure map is a vectorised numpy
expression on digit arrays.  ``B M`` is the case ``X = Y = *``; its labels
drop the two point coordinates.
"""
from dataclasses import dataclass, field

import numpy as np

from . import homology as hom
from .errors import MonoidError
from .localization import localize_pi0_set, localized_graded_module
from .monoid import point_set, regular, twisted_fixed_set
from .simplicial import (BisimplicialSet, SimplicialMap, SimplicialSet, attach_real_structure,
                         discrete, fixed_points, sd_action)


def _shape(left, size, right, p):
    return (left,) + (size,) * p + (right,)


def _bar_tables(X, M, Y, d):
    """Counts and structure tables of ``B(X, M, Y)`` through degree ``d``."""
    n, e, mul = M.size, M.unit, M.mul
    shapes = [_shape(X.size, n, Y.size, p) for p in range(d + 1)]
    counts = [int(np.prod(s)) for s in shapes]
    digits = [np.unravel_index(np.arange(counts[p]), shapes[p]) for p in range(d + 1)]
    faces = [[]]
    for p in range(1, d + 1):
        D = list(digits[p])
        row = []
        for i in range(p + 1):
            if i == 0:
                new = [X.table[D[1], D[0]]] + D[2:]
            elif i == p:
                new = D[:p] + [Y.table[D[p], D[p + 1]]]
            else:
                new = D[:i] + [mul[D[i], D[i + 1]]] + D[i + 2:]
            row.append(np.ravel_multi_index(new, shapes[p - 1]))
        faces.append(row)
    degens = []
    for p in range(d):
        D = list(digits[p])
        unit = np.full(counts[p], e, dtype=np.int64)
        degens.append([np.ravel_multi_index(D[: j + 1] + [unit] + D[j + 1:], shapes[p + 1])
                       for j in range(p + 1)])
    degens.append([])
    return counts, faces, degens, shapes


def two_sided_bar(X, M, Y, d, name=None):
    """``B(X, M, Y)`` for a right ``M``-set ``X`` and a left ``M``-set ``Y``.

    Since all three inputs are discrete this simplicial set is the diagonal
    of the bisimplicial bar construction (see :func:`two_sided_bar_bisimplicial`).
    Labels are tuples ``(x, m_1, ..., m_p, y)`` of indices.
    """
    if X.side != "right" or Y.side != "left":
        raise MonoidError("B(X, M, Y) needs a right M-set X and a left M-set Y")
    if X.monoid is not M or Y.monoid is not M:
        raise MonoidError("actions are over a different monoid")
    counts, faces, degens, shapes = _bar_tables(X, M, Y, d)

    def decode(p, k):
        return tuple(int(v) for v in np.unravel_index(k, shapes[p]))

    def encode(p, label):
        return int(np.ravel_multi_index(tuple(label), shapes[p]))

    out = SimplicialSet(counts, faces, degens, decode=decode, encode=encode,
                        name=name or f"B({X.name},{M.name},{Y.name})")
    out.shapes = shapes
    return out


def two_sided_bar_bisimplicial(X, M, Y, d, vertical=None):
    """The bisimplicial bar construction of discrete data: constant vertically."""
    return BisimplicialSet.constant_vertical(two_sided_bar(X, M, Y, d),
                                             d if vertical is None else vertical)


def bar(M, d):
    """The simplicial set ``B M`` with labels ``(m_1, ..., m_p)``."""
    X, Y = point_set(M, "right"), point_set(M, "left")
    counts, faces, degens, shapes = _bar_tables(X, M, Y, d)

    def decode(p, k):
        return tuple(int(v) for v in np.unravel_index(k, shapes[p]))[1:-1]

    def encode(p, label):
        return int(np.ravel_multi_index((0,) + tuple(label) + (0,), shapes[p]))

    out = SimplicialSet(counts, faces, degens, decode=decode, encode=encode, name=f"B{M.name}")
    out.shapes = shapes
    return out


def bar_involution(M, d):
    """Tables of ``w_p(m_1, ..., m_p) = (bar m_p, ..., bar m_1)``."""
    w = []
    for p in range(d + 1):
        shape = (M.size,) * p
        count = M.size ** p
        if p == 0:
            w.append(np.zeros(1, dtype=np.int64))
            continue
        D = np.unravel_index(np.arange(count), shape)
        w.append(np.ravel_multi_index([M.inv[D[p - 1 - k]] for k in range(p)], shape))
    return w


def real_bar(M, d):
    """``B^{1,1} M``: the bar construction with its order-reversing involution."""
    return attach_real_structure(bar(M, d), bar_involution(M, d))


# ---------------------------------------------------------------------------
# fixed points of the subdivided real bar construction


@dataclass
class FixedPointBijection:
    monoid: str
    degree: int
    fixed_counts: list
    target_counts: list
    bijective: list
    commutes: bool
    failure: str = None
    maps: list = field(default=None, repr=False)

    @property
    def ok(self):
        return all(self.bijective) and self.commutes

    def to_json(self):
        return {"monoid": self.monoid, "degree": self.degree,
                "fixed_counts": self.fixed_counts, "target_counts": self.target_counts,
                "bijective": self.bijective, "commutes": self.commutes,
                "failure": self.failure}


def fixed_point_bijection_b(M, p):
    """Compare ``(Sd B^{1,1} M)^{C2}`` with ``B(*, M, M^{C2})`` through degree ``p``.

    A fixed simplex of subdivided degree ``q`` is a tuple
    ``(m_1, ..., m_{2q+1})`` with ``m_k = bar m_{2q+2-k}``; ``b`` keeps the
    first ``q + 1`` entries.  Bijectivity is checked degreewise and
    compatibility with every face and degeneracy through
    :class:`~equibar.simplicial.SimplicialMap`.
    """
    real = real_bar(M, 2 * p + 1)
    action = sd_action(real, p)
    fixed = fixed_points(action)
    Yfix = twisted_fixed_set(M)
    target = two_sided_bar(point_set(M, "right"), M, Yfix, p,
                           name=f"B(*,{M.name},{M.name}^C2)")
    where = np.full(M.size, -1, dtype=np.int64)
    where[Yfix.elements] = np.arange(Yfix.size)
    ambient_shapes = real.base.shapes
    maps, bijective = [], []
    for q in range(p + 1):
        ids = fixed.embedding[q]
        D = np.unravel_index(ids, ambient_shapes[2 * q + 1])
        middle = D[1: 2 * q + 2]
        head = [np.zeros(ids.size, dtype=np.int64)] + list(middle[:q]) + [where[middle[q]]]
        if ids.size and (head[-1] < 0).any():
            return FixedPointBijection(M.name, p, [], [], [], False,
                                       failure=f"middle entry not fixed in degree {q}")
        table = np.ravel_multi_index(head, target.shapes[q]) if ids.size else ids
        maps.append(table)
        onto = np.unique(table).size == target.counts[q]
        bijective.append(bool(onto and ids.size == target.counts[q]))
    failure = None
    try:
        SimplicialMap(fixed, target, maps)
        commutes = True
    except Exception as exc:  # report the witness instead of aborting
        commutes = False
        failure = str(exc)
    return FixedPointBijection(M.name, p, list(fixed.counts), list(target.counts[: p + 1]),
                               bijective, commutes, failure, maps)


# ---------------------------------------------------------------------------
# cofinal generators and telescope stages


@dataclass
class CofinalGenerator:
    element: int
    name: str
    certificate: dict

    def to_json(self):
        return {"t": self.name, "certificate": {k: list(v) for k, v in self.certificate.items()}}


def find_cofinal_generator(M):
    """An element ``t`` with: every ``x`` has ``y`` and ``n <= |M|`` with ``x y = t^n``.

    For groups ``t = e`` is returned.  Otherwise ``t`` is the product of a
    greedy generating set.  The certificate maps each element name to a
    witnessing pair ``(y, n)``.
    """
    swap = M.commutativity_witness()
    if swap is not None:
        a, b = swap
        raise MonoidError("cofinal generators need a commutative monoid",
                          witness=(M.names[a], M.names[b]))
    if M.is_group():
        t = M.unit
    else:
        gens = []
        for m in range(M.size):
            if m not in M.submonoid_generated(gens):
                gens.append(m)
        t = M.product(gens)
    powers = [M.power(t, k) for k in range(M.size + 1)]
    certificate = {}
    for x in range(M.size):
        hit = None
        for n_, tn in enumerate(powers):
            ys = np.nonzero(M.mul[x] == tn)[0]
            if ys.size:
                hit = (M.names[int(ys[0])], n_)
                break
        if hit is None:
            raise MonoidError("candidate generator is not cofinal", witness=(M.names[x],))
        certificate[M.names[x]] = hit
    return CofinalGenerator(t, M.names[t], certificate)


@dataclass
class TelescopeStage:
    space: object
    translation: SimplicialMap
    stage: int
    variant: str


def _translation(M, E, t, d):
    maps = []
    for p in range(d + 1):
        D = list(np.unravel_index(np.arange(E.counts[p]), E.shapes[p]))
        D[0] = M.mul[t, D[0]]
        maps.append(np.ravel_multi_index(D, E.shapes[p]))
    return SimplicialMap(E, E, maps)


def telescope_stage_bar(M, t, k, variant, d):
    """``d B(M, M, X)`` with the ``k``-fold left translation by ``t``.

    ``variant`` is ``"point"`` (``X = *``) or ``"fixed"`` (``X = M^{C2}``).
    """
    if not 0 <= t < M.size:
        raise MonoidError("generator is not an element")
    if variant == "point":
        Y = point_set(M, "left")
    elif variant == "fixed":
        Y = twisted_fixed_set(M)
    else:
        raise ValueError("variant must be 'point' or 'fixed'")
    E = two_sided_bar(regular(M, "right"), M, Y, d)
    return TelescopeStage(E, _translation(M, E, M.power(t, k), d), k, variant)


# ---------------------------------------------------------------------------
# the retraction r and inclusion i


def _inclusion_i(M, Y, E, d):
    Ydisc = discrete(Y.size, d, labels=Y.names, name=Y.name)
    maps = []
    for p in range(d + 1):
        digits = [np.full(Y.size, M.unit, dtype=np.int64) for _ in range(p + 1)]
        maps.append(np.ravel_multi_index(digits + [np.arange(Y.size)], E.shapes[p]))
    return Ydisc, SimplicialMap(Ydisc, E, maps)


def _retraction_r(M, Y, E, Ydisc, d):
    maps = []
    for p in range(d + 1):
        D = np.unravel_index(np.arange(E.counts[p]), E.shapes[p])
        prod = D[0]
        for k in range(1, p + 1):
            prod = M.mul[prod, D[k]]
        maps.append(Y.table[prod, D[p + 1]])
    return SimplicialMap(E, Ydisc, maps)


@dataclass
class RetractionReport:
    monoid: str
    degree_budget: int
    retraction_exact: bool
    degrees: list

    @property
    def ok(self):
        return self.retraction_exact and all(d["inverse_isomorphisms"] for d in self.degrees)

    def to_json(self):
        return {"monoid": self.monoid, "degree_budget": self.degree_budget,
                "retraction_exact": self.retraction_exact, "degrees": self.degrees}


def _is_identity(hmap):
    M = hmap.matrix
    if M.shape[0] != M.shape[1]:
        return False
    for i in range(M.shape[0]):
        for j in range(M.shape[1]):
            want = 1 if i == j else 0
            o = hmap.target_orders[i]
            if (M[i, j] - want) % o if o else M[i, j] != want:
                return False
    return True


def ji_contraction_check(M, degree_budget):
    """Check ``r ∘ i = id`` on the nose and that ``i``, ``r`` are inverse on homology.

    Here ``i: M^{C2} -> d B(M, M, M^{C2})`` sends ``m`` to ``(e, ..., e, m)``
    and ``r(m_0, ..., m_p, m) = m_0 ... m_p · m · bar m_p ... bar m_0``.
    """
    d = degree_budget + 1
    Y = twisted_fixed_set(M)
    E = two_sided_bar(regular(M, "right"), M, Y, d)
    Ydisc, i_map = _inclusion_i(M, Y, E, d)
    r_map = _retraction_r(M, Y, E, Ydisc, d)
    ri = r_map.compose(i_map)
    exact = all(np.array_equal(ri.maps[p], np.arange(Y.size)) for p in range(d + 1))
    degrees = []
    for q in range(degree_budget + 1):
        i_star = hom.induced_map(i_map, q)
        r_star = hom.induced_map(r_map, q)
        both = (i_star.is_isomorphism() and r_star.is_isomorphism()
                and _is_identity(r_star.compose_after(i_star))
                and _is_identity(i_star.compose_after(r_star)))
        degrees.append({"degree": q, "fixed_set": str(i_star.source),
                        "bar": str(i_star.target), "inverse_isomorphisms": both})
    return RetractionReport(M.name, degree_budget, exact, degrees)


# ---------------------------------------------------------------------------
# degree-zero homology ring


def homology_ring_degree0(M):
    """``H_0(M) = Z[M]`` for a discrete monoid: basis, structure constants, centrality."""
    return {
        "basis": list(M.names),
        "unit": M.names[M.unit],
        "product": [[M.names[int(M.mul[a, b])] for b in range(M.size)] for a in range(M.size)],
        "pi0_central": M.is_commutative(),
    }


# ---------------------------------------------------------------------------
# the group completion comparison


def _twist_matrix(Y, t):
    k = Y.size
    T = [[0] * k for _ in range(k)]
    for y in range(k):
        T[int(Y.table[t, y])][y] = 1
    return T


def verify_group_completion(M, degree_budget, stage_budget):
    """Compare the telescope of ``d B(M, M, M^{C2})`` with the localized fixed set.

    Both sides are computed independently:

    * the bar side takes ``H_q(d B(M, M, M^{C2}))`` with the endomorphism
      induced by left translation by the cofinal generator ``t`` and iterates
      it until it stabilizes;
    * the localized side iterates ``y -> t y bar(t)`` on ``H_*(M^{C2})`` and on
      the set ``M^{C2}`` itself.

    Each degree is reported as ``MATCH``, ``MISMATCH`` or ``UNSTABILIZED``.
    Failing hypotheses are reported as ``SKIPPED`` with the reason.
    """
    report = {"monoid": M.name, "degree_budget": degree_budget, "stage_budget": stage_budget}
    ji = ji_contraction_check(M, degree_budget)
    report["retraction"] = "PASS" if ji.ok else "FAIL"
    swap = M.commutativity_witness()
    if swap is not None:
        report["status"] = "SKIPPED"
        report["reason"] = ("pi0 is not central in degree-zero homology: "
                            f"{M.names[swap[0]]}·{M.names[swap[1]]} differs from "
                            f"{M.names[swap[1]]}·{M.names[swap[0]]}")
        return report
    gen = find_cofinal_generator(M)
    t = gen.element
    report["generator"] = gen.name
    bij = fixed_point_bijection_b(M, degree_budget)
    report["fixed_point_bijection"] = "PASS" if bij.ok else "FAIL"

    stage = telescope_stage_bar(M, t, 1, "fixed", degree_budget + 1)
    E, T = stage.space, stage.translation
    Y = twisted_fixed_set(M)
    Ydisc = discrete(Y.size, degree_budget + 1)
    r_map = _retraction_r(M, Y, E, Ydisc, degree_budget + 1)
    tau = np.array([Y.table[t, y] for y in range(Y.size)], dtype=np.int64)
    intertwines = all(np.array_equal(r_map.maps[p][T.maps[p]], tau[r_map.maps[p]])
                      for p in range(degree_budget + 2))
    report["intertwining"] = "PASS" if intertwines else "FAIL"

    local_orders = [[0] * Y.size] + [[] for _ in range(degree_budget)]
    local_maps = [_twist_matrix(Y, t)] + [[] for _ in range(degree_budget)]
    localized = localized_graded_module(local_orders, local_maps, stage_budget)
    pi0_side = localize_pi0_set(tau, stage_budget)
    report["pi0_localized_classes"] = pi0_side.size

    degrees = []
    overall = "PASS" if (ji.ok and bij.ok and intertwines) else "FAIL"
    for q in range(degree_budget + 1):
        Tq = hom.induced_map(T, q)
        bar_side = hom.stable_colimit(Tq.source_orders, Tq.matrix, stage_budget)
        loc_side = localized[q]
        entry = {"degree": q, "bar_side": bar_side.to_json(), "localized_side": loc_side.to_json()}
        if not (bar_side.stabilized and loc_side.stabilized):
            entry["status"] = "UNSTABILIZED"
            if overall == "PASS":
                overall = "UNSTABILIZED"
        elif bar_side.colimit == loc_side.colimit:
            entry["status"] = "MATCH"
        else:
            entry["status"] = "MISMATCH"
            overall = "FAIL"
        degrees.append(entry)
    report["degrees"] = degrees
    if degrees and degrees[0]["status"] == "MATCH":
        h0 = hom.stable_colimit(hom.induced_map(T, 0).source_orders,
                                hom.induced_map(T, 0).matrix, stage_budget).colimit
        pi0_match = h0.rank == pi0_side.size and not h0.torsion
        report["pi0"] = "MATCH" if pi0_match else "MISMATCH"
        if not pi0_match:
            overall = "FAIL"
    report["status"] = overall
    return report


def projection_to_bar(M, d):
    """``p: d B(M, M, *) -> B M`` forgetting the left factor."""
    E = two_sided_bar(regular(M, "right"), M, point_set(M, "left"), d)
    B = bar(M, d)
    maps = []
    for p in range(d + 1):
        D = np.unravel_index(np.arange(E.counts[p]), E.shapes[p])
        maps.append(np.ravel_multi_index([np.zeros_like(D[0])] + list(D[1:]), B.shapes[p]))
    return SimplicialMap(E, B, maps)
