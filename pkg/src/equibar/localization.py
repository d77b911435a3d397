"""Localization of commutative monoids and of sets with an endomorphism.

Finite monoids are localized by saturating the fraction relation on pairs
``(x, s)``.  Sets with a self-map ``t`` are localized by passing to the colimit
of ``S -> S -> ...``; on a finite set this is the eventual image on which ``t``
acts bijectively.  The free commutative monoid ``N^k`` and translations of
``N`` are handled by closed forms.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .abelian import AbelianGroup, stable_colimit
from .errors import MonoidError


@dataclass(frozen=True)
class FreeCommutative:
    """The free commutative monoid ``N^rank``."""

    rank: int


@dataclass(frozen=True)
class AffineNaturals:
    """``N`` with the self-map ``n -> n + shift``."""

    shift: int


@dataclass
class LocalizedMonoid:
    """Classes of fractions ``x / s`` with their multiplication table."""

    monoid: object
    multiplicative: list
    classes: list
    class_of_pair: dict
    mul: np.ndarray
    unit: int
    closed_form: str = None

    @property
    def size(self):
        return len(self.classes)

    def canonical(self, x):
        """Image of ``x`` under ``N -> N[S^{-1}]``."""
        return self.class_of_pair[(x, self.monoid.unit)]

    def inverse(self, c):
        hits = np.nonzero(self.mul[c] == self.unit)[0]
        return int(hits[0]) if hits.size else None

    def is_group(self):
        return all(self.inverse(c) is not None for c in range(self.size))

    def describe(self):
        if self.closed_form:
            return self.closed_form
        return f"{self.size} classes" + (" (group)" if self.is_group() else "")


def _powers(M, t):
    seen, out, x = set(), [], M.unit
    while x not in seen:
        seen.add(x)
        out.append(x)
        x = int(M.mul[x, t])
    return out


def localize_monoid(N, S="all"):
    """``N[S^{-1}]`` for a finite commutative monoid, or ``Z^k`` for ``N^k``.

    ``S`` is ``"all"`` (the Grothendieck construction) or an element ``t``
    whose powers form the multiplicative set.
    """
    if isinstance(N, FreeCommutative):
        if S != "all":
            raise MonoidError("only the full multiplicative set is supported for N^k")
        return LocalizedMonoid(N, [], [], {}, np.zeros((0, 0), dtype=np.int64), -1,
                               closed_form="Z" if N.rank == 1 else f"Z^{N.rank}")
    swap = N.commutativity_witness()
    if swap is not None:
        raise MonoidError("localization needs a commutative monoid",
                          witness=(N.names[swap[0]], N.names[swap[1]]))
    mult = list(range(N.size)) if S == "all" else _powers(N, int(S))
    pairs = [(x, s) for x in range(N.size) for s in mult]
    mul = N.mul

    def related(p, q):
        (x, s), (y, r) = p, q
        return any(mul[mul[u, x], r] == mul[mul[u, y], s] for u in mult)

    # the relation is already an equivalence for commutative monoids; we
    # saturate anyway and then confirm transitivity of the raw relation
    dsu = DisjointSet(pairs)
    for i, p in enumerate(pairs):
        for q in pairs[i + 1:]:
            if related(p, q):
                dsu.merge(p, q)
    for p in pairs:
        for q in pairs:
            if dsu.connected(p, q) and not related(p, q):
                raise MonoidError("fraction relation is not transitive", witness=(p, q))
    roots = {}
    class_of = {}
    for p in pairs:
        root = dsu[p]
        if root not in roots:
            roots[root] = len(roots)
        class_of[p] = roots[root]
    reps = [None] * len(roots)
    for p in pairs:
        if reps[class_of[p]] is None:
            reps[class_of[p]] = p
    k = len(reps)
    table = np.zeros((k, k), dtype=np.int64)
    for a, (x, s) in enumerate(reps):
        for b, (y, r) in enumerate(reps):
            table[a, b] = class_of[(int(mul[x, y]), int(mul[s, r]))]
    unit = class_of[(N.unit, N.unit)]
    return LocalizedMonoid(N, mult, reps, class_of, table, unit)


@dataclass
class LocalizedSet:
    """Colimit of a set along a self-map.

    For finite input ``representatives`` is the eventual image and
    ``class_of[s]`` is the representative that ``s`` becomes equal to in the
    colimit (after shifting stages).  For translations of ``N`` only the
    closed form and a stage profile are recorded.
    """

    kind: str
    size: object
    stabilized_at: int = None
    representatives: list = field(default_factory=list)
    class_of: list = field(default_factory=list)
    profile: list = field(default_factory=list)
    closed_form: str = None

    def to_json(self):
        out = {"kind": self.kind, "size": self.size, "profile": self.profile}
        if self.kind == "finite":
            out.update(stabilized_at=self.stabilized_at,
                       representatives=self.representatives, class_of=self.class_of)
        if self.closed_form:
            out["closed_form"] = self.closed_form
        return out


def localize_pi0_set(action, stage_budget=None):
    """Colimit of ``S -t-> S -t-> ...``.

    ``action`` is an integer array (a self-map of ``{0, ..., n-1}``) or an
    :class:`AffineNaturals`.  Finite sets always stabilize by stage ``n``, so
    the budget is only consulted for reporting.
    """
    if isinstance(action, AffineNaturals):
        c = int(action.shift)
        if c < 0:
            raise ValueError("translation must be non-negative")
        budget = 3 if stage_budget is None else stage_budget
        # image of the k-fold map misses exactly {0, ..., k c - 1}
        profile = [{"stage": k, "injective": True, "surjective": c == 0, "missed": k * c}
                   for k in range(budget + 1)]
        if c == 0:
            return LocalizedSet("affine", "N", 0, profile=profile, closed_form="N")
        # (k, n) ~ (k + 1, n + c); n - c k is a complete invariant with values in Z
        return LocalizedSet("affine", "Z", None, profile=profile, closed_form="Z")
    t = np.asarray(action, dtype=np.int64)
    n = t.size
    image = np.arange(n)
    profile = []
    stage = 0
    while True:
        nxt = np.unique(t[image])
        injective = nxt.size == image.size
        profile.append({"stage": stage, "size": int(image.size), "injective": bool(injective)})
        if injective:
            break
        image = nxt
        stage += 1
    reps = [int(v) for v in image]
    # in the colimit s is identified with t^stage(s) shifted back by the
    # inverse of the bijection t|image
    inverse = {int(t[v]): int(v) for v in image}
    class_of = []
    for s in range(n):
        x = s
        for _ in range(stage):
            x = int(t[x])
        for _ in range(stage):
            x = inverse[x]
        class_of.append(x)
    return LocalizedSet("finite", len(reps), stage, reps, class_of, profile)


def localized_graded_module(orders, maps, stage_budget):
    """Per-degree directed systems for a graded group with one endomorphism per degree."""
    out = []
    for q, (o, T) in enumerate(zip(orders, maps)):
        if not o:
            system = stable_colimit([], [], max(stage_budget, 1))
        else:
            system = stable_colimit(o, T, stage_budget)
        out.append(system)
    return out


def grothendieck_group_of_free(rank):
    return AbelianGroup(rank)
