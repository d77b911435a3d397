"""Finitely generated abelian groups, subgroups of presented groups, and
colimits of directed systems ``A -> A -> A -> ...`` given by one endomorphism.

A presented group is ``Z^k / R`` where ``R`` is spanned by ``orders[i] * e_i``
(an order of 0 means a free coordinate).  This is exactly the shape produced
by the homology engine.
"""
from dataclasses import dataclass, field

import numpy as np

from . import intmat
from .errors import EquibarError


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank`` plus cyclic torsion summands given by invariant factors."""

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x <= 1 for x in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not an invariant factor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, orders):
        """Group ``⊕ Z/orders[i]`` (order 0 = free, order 1 = trivial)."""
        form = intmat.smith_normal_form(_relation_matrix(orders))
        diag = form.diagonal
        return cls(sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def presented_invariants(orders):
    return AbelianGroup.from_orders(orders)


def _relation_matrix(orders):
    k = len(orders)
    R = intmat.zeros(k, k)
    for i, o in enumerate(orders):
        R[i, i] = int(o)
    return R


def subgroup_invariants(generators, orders):
    """Invariants of the subgroup of ``Z^k / R`` spanned by the columns of ``generators``."""
    G = generators
    k, g = G.shape
    if g == 0:
        return AbelianGroup(0)
    big = np.concatenate([G, _relation_matrix(orders)], axis=1)
    K = intmat.kernel_basis(big)
    relations = K[:g, :]
    form = intmat.smith_normal_form(relations)
    diag = form.diagonal + [0] * (g - min(relations.shape))
    return AbelianGroup(sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))


def contains(generators, orders, vector):
    """Whether ``vector`` lies in the span of ``generators`` modulo relations."""
    big = np.concatenate([generators, _relation_matrix(orders)], axis=1)
    return intmat.solve(big, vector) is not None


def is_isomorphism(matrix, source_orders, target_orders):
    """Whether the map ``Z^s/R_s -> Z^t/R_t`` given by ``matrix`` is bijective."""
    src = AbelianGroup.from_orders(source_orders)
    tgt = AbelianGroup.from_orders(target_orders)
    if src != tgt:
        return False
    return is_surjective(matrix, target_orders)


def is_surjective(matrix, target_orders):
    t = len(target_orders)
    if t == 0:
        return True
    big = np.concatenate([matrix, _relation_matrix(target_orders)], axis=1)
    form = intmat.smith_normal_form(big)
    return all(d == 1 for d in form.diagonal[:t]) and len(form.diagonal) >= t


@dataclass
class ColimitStage:
    index: int
    image: AbelianGroup
    transition_injective: bool
    transition_surjective: bool
    cokernel: AbelianGroup

    def to_json(self):
        return {
            "stage": self.index,
            "image": self.image.to_json(),
            "transition_injective": self.transition_injective,
            "transition_surjective": self.transition_surjective,
            "cokernel": self.cokernel.to_json(),
        }


@dataclass
class DirectedSystem:
    """Outcome of iterating an endomorphism ``T`` on a presented group.

    ``stages[k]`` describes the image ``I_k = T^k(A)`` and the transition
    ``T: I_k -> I_{k+1}``.  ``stabilized_at`` is the first stage on which ``T``
    restricts to an automorphism of ``I_k``; the colimit is then ``I_k``.
    """

    group: AbelianGroup
    stages: list = field(default_factory=list)
    stabilized_at: int = None

    @property
    def stabilized(self):
        return self.stabilized_at is not None

    @property
    def colimit(self):
        if not self.stabilized:
            raise EquibarError("directed system did not stabilize within the budget; "
                               "no finitely presented colimit is claimed")
        return self.stages[self.stabilized_at].image

    def to_json(self):
        out = {
            "group": self.group.to_json(),
            "stabilized": self.stabilized,
            "stages": [s.to_json() for s in self.stages],
        }
        if self.stabilized:
            out["stabilized_at"] = self.stabilized_at
            out["colimit"] = self.colimit.to_json()
        else:
            out["status"] = "non-stabilizing within budget"
        return out


def _reduce_columns(G, orders):
    out = G.copy()
    for i, o in enumerate(orders):
        if o:
            for j in range(out.shape[1]):
                out[i, j] = out[i, j] % o
    return out


def stable_colimit(orders, T, stage_budget):
    """Iterate ``T`` on ``Z^k / R`` for up to ``stage_budget`` transitions.

    The report lists image invariants, injectivity and surjectivity of every
    transition, and stops at the first stage where ``T`` is an automorphism of
    the current image.
    """
    if stage_budget <= 0:
        raise ValueError("stage budget must be positive")
    orders = [int(o) for o in orders]
    k = len(orders)
    T = intmat.as_int_matrix(T, shape=(k, k)) if k else intmat.zeros(0, 0)
    system = DirectedSystem(AbelianGroup.from_orders(orders))
    G = intmat.identity(k)
    current = subgroup_invariants(G, orders)
    for stage in range(stage_budget + 1):
        nxt_gens = _reduce_columns(intmat.matmul(T, G), orders)
        nxt = subgroup_invariants(nxt_gens, orders)
        # T: I_k -> I_{k+1} is onto; for f.g. groups it is injective iff the
        # two images are isomorphic.
        injective = nxt == current
        surjective = all(contains(nxt_gens, orders, G[:, j]) for j in range(G.shape[1]))
        coker = _quotient_invariants(G, nxt_gens, orders)
        system.stages.append(ColimitStage(stage, current, injective, surjective, coker))
        if injective and surjective:
            system.stabilized_at = stage
            break
        if stage == stage_budget:
            break
        G, current = nxt_gens, nxt
    return system


def _quotient_invariants(big_gens, small_gens, orders):
    """Invariants of ``span(big) / span(small)`` inside ``Z^k/R`` (small ⊆ big)."""
    k, g = big_gens.shape
    if g == 0:
        return AbelianGroup(0)
    # express small generators and relations in terms of big generators
    cols = []
    R = _relation_matrix(orders)
    basis = np.concatenate([big_gens, R], axis=1)
    for j in range(small_gens.shape[1]):
        x = intmat.solve(basis, small_gens[:, j])
        if x is None:
            raise EquibarError("image of the transition is not contained in the stage")
        cols.append(x[:g])
    kernel = intmat.kernel_basis(basis)[:g, :]
    rel_cols = [list(kernel[:, j]) for j in range(kernel.shape[1])]
    all_cols = cols + rel_cols
    if not all_cols:
        return AbelianGroup(g)
    rel = intmat.as_int_matrix(np.array(all_cols, dtype=object).T, shape=(g, len(all_cols)))
    form = intmat.smith_normal_form(rel)
    diag = form.diagonal + [0] * (g - min(rel.shape))
    return AbelianGroup(sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))
