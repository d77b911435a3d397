"""Finite monoids with anti-involution and finite sets with monoid actions."""
import itertools
import json

import numpy as np

from .errors import MonoidError


class FiniteMonoid:
    """A finite monoid with an anti-involution ``bar``.

    Elements are the integers ``0..n-1``; ``names`` only matters for
    printing and JSON.  ``mul[a, b]`` is the product ``a·b`` and ``inv[a]`` is
    ``bar(a)``.

    The axioms checked by :meth:`validate` are associativity, the two-sided
    unit, ``bar(bar(a)) = a``, ``bar(a·b) = bar(b)·bar(a)`` and ``bar(e) = e``.
    """

    def __init__(self, names, unit, mul, inv, name=None, validate=True):
        self.names = [str(n) for n in names]
        self.unit = int(unit)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.inv = np.asarray(inv, dtype=np.int64)
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)
        self.name = name
        n = len(self.names)
        if self.mul.shape != (n, n) or self.inv.shape != (n,):
            raise MonoidError(f"tables must have shapes ({n}, {n}) and ({n},)")
        if not 0 <= self.unit < n:
            raise MonoidError("unit is not an element")
        if n and (self.mul.min() < 0 or self.mul.max() >= n or self.inv.min() < 0
                  or self.inv.max() >= n):
            raise MonoidError("tables contain entries that are not elements")
        if validate:
            self.validate()

    @property
    def size(self):
        return len(self.names)

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"<FiniteMonoid {self.name or ''} order={self.size}>"

    def validate(self):
        n, e, mul, inv = self.size, self.unit, self.mul, self.inv
        bad = np.nonzero((mul[e, :] != np.arange(n)) | (mul[:, e] != np.arange(n)))[0]
        if bad.size:
            raise MonoidError("unit law fails", witness=(self.names[bad[0]],))
        # (ab)c == a(bc) for all triples, vectorised
        left = mul[mul[:, :, None], np.arange(n)[None, None, :]]
        right = mul[np.arange(n)[:, None, None], mul[None, :, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            a, b, c = bad[0]
            raise MonoidError("associativity fails", witness=tuple(self.names[k] for k in (a, b, c)))
        bad = np.nonzero(inv[inv] != np.arange(n))[0]
        if bad.size:
            raise MonoidError("involution does not square to the identity",
                              witness=(self.names[bad[0]],))
        # bar(ab) versus bar(b) bar(a); rows index a, columns index b
        lhs = inv[mul]
        rhs = mul[inv[np.newaxis, :], inv[:, np.newaxis]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b = bad[0]
            raise MonoidError("anti-involution law bar(ab) = bar(b) bar(a) fails",
                              witness=(self.names[a], self.names[b]))
        if inv[e] != e:
            raise MonoidError("anti-involution does not fix the unit", witness=(self.names[e],))
        return self

    # -- structure ------------------------------------------------------
    def product(self, elements):
        out = self.unit
        for m in elements:
            out = int(self.mul[out, m])
        return out

    def power(self, m, k):
        return self.product([m] * k)

    def commutativity_witness(self):
        bad = np.argwhere(self.mul != self.mul.T)
        return None if not bad.size else (int(bad[0][0]), int(bad[0][1]))

    def is_commutative(self):
        return self.commutativity_witness() is None

    def inverse(self, m):
        hits = np.nonzero((self.mul[m, :] == self.unit) & (self.mul[:, m] == self.unit))[0]
        return int(hits[0]) if hits.size else None

    def is_group(self):
        return all(self.inverse(m) is not None for m in range(self.size))

    def fixed_elements(self):
        """Elements with ``bar(m) = m``, in increasing order."""
        return [int(m) for m in np.nonzero(self.inv == np.arange(self.size))[0]]

    def twist(self, m, n):
        """The twisted action ``m·n·bar(m)``."""
        return int(self.mul[self.mul[m, n], self.inv[m]])

    def submonoid_generated(self, gens):
        seen = {self.unit}
        frontier = [self.unit]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = int(self.mul[a, g])
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    # -- serialization --------------------------------------------------
    def to_json(self):
        return {"elements": self.names, "unit": self.unit,
                "mul": self.mul.tolist(), "inv": self.inv.tolist()}

    @classmethod
    def from_json(cls, data, name=None):
        for key in ("elements", "unit", "mul", "inv"):
            if key not in data:
                raise MonoidError(f"monoid JSON lacks key {key!r}")
        return cls(data["elements"], data["unit"], data["mul"], data["inv"],
                   name=name or data.get("name"))

    @classmethod
    def from_function(cls, elements, unit, mul, inv, name=None, validate=True):
        """Build from Python callables on arbitrary hashable elements."""
        elements = list(elements)
        index = {x: k for k, x in enumerate(elements)}
        table = [[index[mul(a, b)] for b in elements] for a in elements]
        return cls([_name(x) for x in elements], index[unit], table,
                   [index[inv(a)] for a in elements], name=name, validate=validate)


def _name(x):
    if isinstance(x, tuple):
        return "(" + "".join(str(v) for v in x) + ")"
    return str(x)


# ---------------------------------------------------------------------------
# corpus


def trivial():
    return FiniteMonoid(["e"], 0, [[0]], [0], name="trivial")


def cyclic(n, involution="identity"):
    """Cyclic group of order ``n``; the involution is ``identity`` or ``inverse``.

    Since the group is abelian both choices are anti-involutions.
    """
    names = ["e"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
    mul = [[(a + b) % n for b in range(n)] for a in range(n)]
    if involution == "identity":
        inv = list(range(n))
    elif involution == "inverse":
        inv = [(-a) % n for a in range(n)]
    else:
        raise ValueError("involution must be 'identity' or 'inverse'")
    return FiniteMonoid(names, 0, mul, inv, name=f"C{n}")


_S3 = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
_S3_NAMES = ["e", "(01)", "(02)", "(12)", "(012)", "(021)"]


def _compose(p, q):
    # (p q)(i) = p(q(i))
    return tuple(p[q[i]] for i in range(3))


def _invert(p):
    out = [0, 0, 0]
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def symmetric3(involution="inverse", validate=True):
    """The symmetric group on three letters, anti-involution ``g -> g^{-1}`` by default."""
    index = {p: k for k, p in enumerate(_S3)}
    mul = [[index[_compose(p, q)] for q in _S3] for p in _S3]
    if involution == "inverse":
        inv = [index[_invert(p)] for p in _S3]
    elif involution == "identity":
        inv = list(range(6))
    else:
        raise ValueError("involution must be 'inverse' or 'identity'")
    return FiniteMonoid(_S3_NAMES, 0, mul, inv, name="S3", validate=validate)


def max_monoid():
    """``({0, 1}, max)`` with unit 0 and identity involution."""
    return FiniteMonoid(["0", "1"], 0, [[0, 1], [1, 1]], [0, 1], name="max{0,1}")


def corpus():
    """The monoids used throughout the test suite and verification runs."""
    return {
        "trivial": trivial(),
        "C2": cyclic(2),
        "C3": cyclic(3),
        "C4": cyclic(4),
        "S3": symmetric3(),
        "max": max_monoid(),
    }


# ---------------------------------------------------------------------------
# M-sets


class MonoidAction:
    """A finite set with a left or right action of a monoid.

    ``table[m, x]`` is ``m·x`` for a left action and ``x·m`` for a right
    action (the monoid index always comes first).
    """

    def __init__(self, monoid, names, table, side, name=None, validate=True):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.monoid = monoid
        self.names = [str(n) for n in names]
        self.table = np.asarray(table, dtype=np.int64).reshape(monoid.size, len(self.names))
        self.table.setflags(write=False)
        self.side = side
        self.name = name
        if validate:
            self.validate()

    @property
    def size(self):
        return len(self.names)

    def validate(self):
        M, t = self.monoid, self.table
        if t.size and (t.min() < 0 or t.max() >= self.size):
            raise MonoidError("action leaves the set")
        bad = np.nonzero(t[M.unit] != np.arange(self.size))[0]
        if bad.size:
            raise MonoidError("unit does not act trivially", witness=(self.names[bad[0]],))
        for a, b in itertools.product(range(M.size), repeat=2):
            if self.side == "left":
                lhs, rhs = t[M.mul[a, b]], t[a][t[b]]
            else:
                lhs, rhs = t[M.mul[a, b]], t[b][t[a]]
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                raise MonoidError(f"{self.side} action law fails",
                                  witness=(M.names[a], M.names[b], self.names[bad[0]]))
        return self


def point_set(monoid, side):
    return MonoidAction(monoid, ["*"], np.zeros((monoid.size, 1)), side, name="*")


def regular(monoid, side):
    """``M`` acting on itself by multiplication."""
    table = monoid.mul if side == "left" else monoid.mul.T
    return MonoidAction(monoid, monoid.names, table, side, name=monoid.name)


def twisted_fixed_set(monoid):
    """``M^{C2} = {m : bar(m) = m}`` with the left action ``(m, n) -> m·n·bar(m)``."""
    fixed = monoid.fixed_elements()
    where = {m: k for k, m in enumerate(fixed)}
    table = [[where[monoid.twist(m, n)] for n in fixed] for m in range(monoid.size)]
    action = MonoidAction(monoid, [monoid.names[m] for m in fixed], table, "left",
                          name=f"{monoid.name}^C2")
    action.elements = fixed
    return action


def load_monoid(path_or_data):
    if isinstance(path_or_data, dict):
        return FiniteMonoid.from_json(path_or_data)
    with open(path_or_data) as fh:
        return FiniteMonoid.from_json(json.load(fh))
