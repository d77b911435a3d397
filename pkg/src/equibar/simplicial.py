"""Truncated simplicial and bisimplicial sets.

A simplicial set is stored up to a truncation degree as dense integer ids per
degree together with face and degeneracy tables (numpy integer arrays).  A
table ``X.face(n, i)`` maps ids of degree ``n`` to ids of degree ``n - 1``;
composites of structure maps are therefore fancy-indexing chains.

Degenerate simplices are stored explicitly.  All constructions fail loudly
with :class:`TruncationError` when they would need simplices above the stored
degree.
"""
import itertools

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotSimplicialError, RelationError, TruncationError

__all__ = [
    "SimplicialSet",
    "BisimplicialSet",
    "SimplicialMap",
    "RealStructure",
    "monotone_maps",
    "subdivide_operator",
    "point",
    "discrete",
    "empty",
    "representable",
    "circle",
    "disjoint_union",
    "product",
    "diagonal",
    "sd",
    "sd_h",
    "sd_v",
    "attach_real_structure",
    "sd_action",
    "fixed_points",
    "pi0",
]


def _table(values):
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    arr.setflags(write=False)
    return arr


def monotone_maps(source, target):
    """All order-preserving maps ``[source] -> [target]`` as tuples."""
    return list(itertools.combinations_with_replacement(range(target + 1), source + 1))


def subdivide_operator(theta, target):
    """The map ``theta ⊔ theta^op : [2m+1] -> [2n+1]`` for ``theta: [m] -> [n]``."""
    m = len(theta) - 1
    first = tuple(theta)
    second = tuple(2 * target + 1 - theta[2 * m + 1 - k] for k in range(m + 1, 2 * m + 2))
    return first + second


def _coface(n, i):
    # delta^i : [n-1] -> [n]
    return tuple(k if k < i else k + 1 for k in range(n))


def _codegeneracy(n, j):
    # sigma^j : [n+1] -> [n]
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def _apply_operator(face, degeneracy, count, theta, target):
    """Compose structure tables into the action of ``theta: [m] -> [target]``.

    ``face(n, i)`` and ``degeneracy(n, j)`` return tables; ``count`` is the
    number of simplices in degree ``target``.
    """
    image = sorted(set(theta))
    if image and (image[0] < 0 or image[-1] > target):
        raise ValueError(f"operator {theta} does not land in [{target}]")
    if any(a > b for a, b in zip(theta, theta[1:])):
        raise ValueError(f"operator {theta} is not monotone")
    result = np.arange(count, dtype=np.int64)
    degree = target
    for i in reversed([k for k in range(target + 1) if k not in image]):
        result = face(degree, i)[result]
        degree -= 1
    position = {v: k for k, v in enumerate(image)}
    epi = [position[v] for v in theta]
    for p in range(len(epi) - 1):
        if epi[p] == epi[p + 1]:
            result = degeneracy(degree, p)[result]
            degree += 1
    return result


class SimplicialSet:
    """A degreewise-finite simplicial set truncated at ``max_degree``.

    Parameters
    ----------
    counts : sequence of int
        Number of simplices in each degree ``0..max_degree``.
    faces : list
        ``faces[n][i]`` is the table of ``d_i`` on degree ``n`` (``n >= 1``).
        ``faces[0]`` is ignored.
    degeneracies : list
        ``degeneracies[n][j]`` is the table of ``s_j`` on degree ``n`` for
        ``n < max_degree``.
    labels : list of lists, optional
        Human readable labels per degree; ids are positions in these lists.
    decode : callable, optional
        ``decode(n, k)`` producing a label lazily (used by large bar
        constructions instead of ``labels``).
    encode : callable, optional
        Inverse of ``decode``.
    """

    def __init__(self, counts, faces, degeneracies, labels=None, decode=None,
                 encode=None, name=None):
        self.counts = tuple(int(c) for c in counts)
        if not self.counts:
            raise ValueError("a truncated simplicial set needs at least degree 0")
        d = self.max_degree
        self._faces = [[]] + [[_table(t) for t in faces[n]] for n in range(1, d + 1)]
        self._degens = [[_table(t) for t in degeneracies[n]] for n in range(d)] + [[]]
        self._labels = labels
        self._decode = decode
        self._encode = encode
        self._index = None
        self._nondeg = {}
        self.name = name
        self._check_tables()

    # -- basic access -------------------------------------------------
    @property
    def max_degree(self):
        return len(self.counts) - 1

    def count(self, n):
        self._require(n)
        return self.counts[n]

    def face(self, n, i):
        self._require(n)
        return self._faces[n][i]

    def degeneracy(self, n, j):
        if n + 1 > self.max_degree:
            raise TruncationError(f"s_{j} on degree {n} needs degree {n + 1}, "
                                  f"truncation is {self.max_degree}")
        return self._degens[n][j]

    def label(self, n, k):
        if self._labels is not None:
            return self._labels[n][k]
        if self._decode is not None:
            return self._decode(n, k)
        return k

    def index(self, n, label):
        if self._encode is not None:
            return self._encode(n, label)
        if self._labels is None:
            return int(label)
        if self._index is None:
            self._index = [{lab: k for k, lab in enumerate(level)} for level in self._labels]
        return self._index[n][label]

    def labels(self, n):
        return [self.label(n, k) for k in range(self.count(n))]

    def _require(self, n):
        if n < 0:
            raise ValueError("negative degree")
        if n > self.max_degree:
            raise TruncationError(f"degree {n} requested, truncation is {self.max_degree}")

    def _check_tables(self):
        for n in range(1, self.max_degree + 1):
            if len(self._faces[n]) != n + 1:
                raise ValueError(f"degree {n} needs {n + 1} face tables")
            for i, t in enumerate(self._faces[n]):
                self._check_range(t, n, self.counts[n - 1], f"d_{i}")
        for n in range(self.max_degree):
            if len(self._degens[n]) != n + 1:
                raise ValueError(f"degree {n} needs {n + 1} degeneracy tables")
            for j, t in enumerate(self._degens[n]):
                self._check_range(t, n, self.counts[n + 1], f"s_{j}")

    def _check_range(self, table, n, bound, what):
        if table.shape != (self.counts[n],):
            raise ValueError(f"{what} on degree {n} has {table.shape[0]} entries, "
                             f"expected {self.counts[n]}")
        bad = np.nonzero((table < 0) | (table >= bound))[0]
        if bad.size:
            raise RelationError(f"{what} sends simplex {bad[0]} of degree {n} outside the set",
                                degree=n, simplex=int(bad[0]))

    # -- derived data -------------------------------------------------
    def degenerate_mask(self, n):
        self._require(n)
        mask = np.zeros(self.counts[n], dtype=bool)
        if n > 0:
            for t in self._degens[n - 1]:
                mask[t] = True
        return mask

    def nondegenerate(self, n):
        """Ids of nondegenerate simplices of degree ``n`` (sorted)."""
        if n not in self._nondeg:
            ids = np.nonzero(~self.degenerate_mask(n))[0]
            ids.setflags(write=False)
            self._nondeg[n] = ids
        return self._nondeg[n]

    def operator(self, theta, target):
        """Table of ``theta^*: X_target -> X_m`` for monotone ``theta: [m] -> [target]``."""
        m = len(theta) - 1
        self._require(max(m, target))
        return _apply_operator(self.face, self.degeneracy, self.counts[target], theta, target)

    def check_identities(self):
        """Exhaustively verify the simplicial identities; raise on the first failure."""
        d = self.max_degree
        for n in range(2, d + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = self._faces[n - 1][i][self._faces[n][j]]
                    rhs = self._faces[n - 1][j - 1][self._faces[n][i]]
                    _expect_equal(lhs, rhs, n, (i, j), "d_i d_j = d_{j-1} d_i")
        for n in range(d - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = self._degens[n + 1][i][self._degens[n][j]]
                    rhs = self._degens[n + 1][j + 1][self._degens[n][i]]
                    _expect_equal(lhs, rhs, n, (i, j), "s_i s_j = s_{j+1} s_i")
        ident = None
        for n in range(d):
            ident = np.arange(self.counts[n])
            for j in range(n + 1):
                lifted = self._degens[n][j]
                for i in range(n + 2):
                    lhs = self._faces[n + 1][i][lifted]
                    if i in (j, j + 1):
                        rhs = ident
                    elif i < j:
                        rhs = self._degens[n - 1][j - 1][self._faces[n][i]]
                    else:
                        rhs = self._degens[n - 1][j][self._faces[n][i - 1]]
                    _expect_equal(lhs, rhs, n, (i, j), "d_i s_j")
        return True

    def truncate(self, degree):
        if degree > self.max_degree:
            raise TruncationError(f"cannot truncate degree {self.max_degree} set to {degree}")
        labels = None if self._labels is None else self._labels[: degree + 1]
        return SimplicialSet(self.counts[: degree + 1], self._faces[: degree + 1],
                             self._degens[:degree] + [[]], labels=labels,
                             decode=self._decode, encode=self._encode, name=self.name)

    def same_structure(self, other):
        """True iff counts and every structure table agree exactly."""
        if self.counts != other.counts:
            return False
        for n in range(1, self.max_degree + 1):
            for a, b in zip(self._faces[n], other._faces[n]):
                if not np.array_equal(a, b):
                    return False
        for n in range(self.max_degree):
            for a, b in zip(self._degens[n], other._degens[n]):
                if not np.array_equal(a, b):
                    return False
        return True

    def __repr__(self):
        name = f" {self.name}" if self.name else ""
        return f"<SimplicialSet{name} counts={list(self.counts)}>"

    # -- serialization ------------------------------------------------
    def to_json(self):
        return {
            "max_degree": self.max_degree,
            "simplices": list(self.counts),
            "faces": {str(n): [t.tolist() for t in self._faces[n]]
                      for n in range(1, self.max_degree + 1)},
            "degeneracies": {str(n): [t.tolist() for t in self._degens[n]]
                             for n in range(self.max_degree)},
        }

    @classmethod
    def from_json(cls, data):
        d = int(data["max_degree"])
        counts = data["simplices"]
        if len(counts) != d + 1:
            raise ValueError("'simplices' must list one count per degree")
        faces = [[]] + [data["faces"][str(n)] for n in range(1, d + 1)]
        degens = [data["degeneracies"][str(n)] for n in range(d)] + [[]]
        return cls(counts, faces, degens, name=data.get("name"))

    @classmethod
    def from_labels(cls, simplices, face, degeneracy, name=None):
        """Build from explicit labels and structure maps on labels.

        ``simplices[n]`` lists the labels of degree ``n``; ``face(n, i, x)`` and
        ``degeneracy(n, j, x)`` return labels.
        """
        simplices = [list(level) for level in simplices]
        index = [{lab: k for k, lab in enumerate(level)} for level in simplices]
        for n, level in enumerate(simplices):
            if len(index[n]) != len(level):
                raise ValueError(f"duplicate labels in degree {n}")
        d = len(simplices) - 1

        def lookup(n, lab, what, src):
            try:
                return index[n][lab]
            except KeyError:
                raise RelationError(f"{what} of {src!r} is {lab!r}, not a simplex of degree {n}",
                                    degree=n, simplex=src) from None

        faces = [[]]
        for n in range(1, d + 1):
            faces.append([[lookup(n - 1, face(n, i, x), f"d_{i}", x) for x in simplices[n]]
                          for i in range(n + 1)])
        degens = []
        for n in range(d):
            degens.append([[lookup(n + 1, degeneracy(n, j, x), f"s_{j}", x) for x in simplices[n]]
                           for j in range(n + 1)])
        degens.append([])
        return cls([len(level) for level in simplices], faces, degens, labels=simplices, name=name)


def _expect_equal(lhs, rhs, degree, index, what):
    bad = np.nonzero(lhs != rhs)[0]
    if bad.size:
        raise RelationError(f"identity {what} fails for (i, j) = {index} in degree {degree} "
                            f"at simplex {bad[0]}", degree=degree, index=index,
                            simplex=int(bad[0]))


# ---------------------------------------------------------------------------
# basic constructions


def point(max_degree):
    return discrete(1, max_degree, name="point")


def discrete(size, max_degree, labels=None, name=None):
    """The constant simplicial set on ``size`` points."""
    ident = np.arange(size)
    faces = [[]] + [[ident] * (n + 1) for n in range(1, max_degree + 1)]
    degens = [[ident] * (n + 1) for n in range(max_degree)] + [[]]
    lab = None if labels is None else [list(labels)] * (max_degree + 1)
    return SimplicialSet([size] * (max_degree + 1), faces, degens, labels=lab, name=name)


def empty(max_degree):
    return discrete(0, max_degree, name="empty")


def representable(m, max_degree):
    """The standard simplex Delta^m: degree-n simplices are monotone [n] -> [m]."""
    simplices = [monotone_maps(n, m) for n in range(max_degree + 1)]
    return SimplicialSet.from_labels(
        simplices,
        lambda n, i, x: x[:i] + x[i + 1:],
        lambda n, j, x: x[: j + 1] + x[j:],
        name=f"Delta^{m}",
    )


def circle(max_degree):
    """The simplicial circle Delta^1 / boundary; the base point is labelled ``'*'``."""
    def collapse(x):
        return "*" if len(set(x)) == 1 else x

    simplices = [["*"] + [x for x in monotone_maps(n, 1) if len(set(x)) == 2]
                 for n in range(max_degree + 1)]

    def face(n, i, x):
        return "*" if x == "*" else collapse(x[:i] + x[i + 1:])

    def degen(n, j, x):
        return "*" if x == "*" else x[: j + 1] + x[j:]

    return SimplicialSet.from_labels(simplices, face, degen, name="S^1")


def disjoint_union(x, y):
    d = min(x.max_degree, y.max_degree)
    counts = [x.counts[n] + y.counts[n] for n in range(d + 1)]
    faces = [[]]
    for n in range(1, d + 1):
        faces.append([np.concatenate([x.face(n, i), y.face(n, i) + x.counts[n - 1]])
                      for i in range(n + 1)])
    degens = []
    for n in range(d):
        degens.append([np.concatenate([x.degeneracy(n, j), y.degeneracy(n, j) + x.counts[n + 1]])
                       for j in range(n + 1)])
    degens.append([])
    return SimplicialSet(counts, faces, degens, name=f"{x.name} + {y.name}")


def product(x, y):
    """Degreewise product; id of ``(a, b)`` is ``a * |Y_n| + b``."""
    d = min(x.max_degree, y.max_degree)
    counts = [x.counts[n] * y.counts[n] for n in range(d + 1)]

    def pair(n, tx, ty, target):
        a, b = np.divmod(np.arange(counts[n]), y.counts[n])
        return tx[a] * y.counts[target] + ty[b]

    faces = [[]] + [[pair(n, x.face(n, i), y.face(n, i), n - 1) for i in range(n + 1)]
                    for n in range(1, d + 1)]
    degens = [[pair(n, x.degeneracy(n, j), y.degeneracy(n, j), n + 1) for j in range(n + 1)]
              for n in range(d)] + [[]]
    return SimplicialSet(counts, faces, degens, name=f"{x.name} x {y.name}")


# ---------------------------------------------------------------------------
# maps


class SimplicialMap:
    """Degreewise tables ``maps[n]: X_n -> Y_n`` commuting with structure maps."""

    def __init__(self, source, target, maps, check=True):
        self.source = source
        self.target = target
        self.max_degree = min(source.max_degree, target.max_degree)
        if len(maps) < self.max_degree + 1:
            raise TruncationError(f"map given through degree {len(maps) - 1}, "
                                  f"needs {self.max_degree}")
        self.maps = [_table(maps[n]) for n in range(self.max_degree + 1)]
        for n, t in enumerate(self.maps):
            if t.shape != (source.counts[n],):
                raise ValueError(f"map table in degree {n} has wrong length")
            if t.size and (t.min() < 0 or t.max() >= target.counts[n]):
                raise RelationError(f"map leaves the target in degree {n}", degree=n)
        if check:
            self.check()

    def __getitem__(self, n):
        return self.maps[n]

    def check(self):
        x, y = self.source, self.target
        for n in range(1, self.max_degree + 1):
            for i in range(n + 1):
                bad = np.nonzero(y.face(n, i)[self.maps[n]] != self.maps[n - 1][x.face(n, i)])[0]
                if bad.size:
                    raise NotSimplicialError(f"map does not commute with d_{i} in degree {n}",
                                             degree=n, index=i, simplex=int(bad[0]))
        for n in range(self.max_degree):
            for j in range(n + 1):
                lhs = y.degeneracy(n, j)[self.maps[n]]
                rhs = self.maps[n + 1][x.degeneracy(n, j)]
                bad = np.nonzero(lhs != rhs)[0]
                if bad.size:
                    raise NotSimplicialError(f"map does not commute with s_{j} in degree {n}",
                                             degree=n, index=j, simplex=int(bad[0]))
        return True

    def compose(self, first):
        """``self ∘ first``."""
        d = min(self.max_degree, first.max_degree)
        return SimplicialMap(first.source, self.target,
                             [self.maps[n][first.maps[n]] for n in range(d + 1)], check=False)

    @classmethod
    def identity(cls, x):
        return cls(x, x, [np.arange(c) for c in x.counts], check=False)

    @classmethod
    def from_function(cls, source, target, fn, check=True):
        """Build from ``fn(n, label) -> label`` using the label codecs of both sets."""
        d = min(source.max_degree, target.max_degree)
        maps = [[target.index(n, fn(n, source.label(n, k))) for k in range(source.counts[n])]
                for n in range(d + 1)]
        return cls(source, target, maps, check=check)

    def is_endomorphism(self):
        return self.source is self.target


# ---------------------------------------------------------------------------
# bisimplicial sets


class BisimplicialSet:
    """Truncated bisimplicial set with horizontal and vertical structure tables.

    Tables are keyed by bidegree ``(m, n)``: ``hfaces[(m, n)][i]`` maps
    bidegree ``(m, n)`` to ``(m - 1, n)``, ``vfaces[(m, n)][i]`` to
    ``(m, n - 1)``; likewise for degeneracies.
    """

    def __init__(self, counts, hfaces, vfaces, hdegens, vdegens, max_h, max_v, name=None):
        self.counts = {k: int(v) for k, v in counts.items()}
        self.max_h = max_h
        self.max_v = max_v
        self.hfaces = {k: [_table(t) for t in v] for k, v in hfaces.items()}
        self.vfaces = {k: [_table(t) for t in v] for k, v in vfaces.items()}
        self.hdegens = {k: [_table(t) for t in v] for k, v in hdegens.items()}
        self.vdegens = {k: [_table(t) for t in v] for k, v in vdegens.items()}
        self.name = name

    def _require(self, m, n):
        if m > self.max_h or n > self.max_v:
            raise TruncationError(f"bidegree {(m, n)} exceeds truncation {(self.max_h, self.max_v)}")

    def count(self, m, n):
        self._require(m, n)
        return self.counts[(m, n)]

    def hface(self, m, n, i):
        self._require(m, n)
        return self.hfaces[(m, n)][i]

    def vface(self, m, n, i):
        self._require(m, n)
        return self.vfaces[(m, n)][i]

    def hdegeneracy(self, m, n, j):
        self._require(m + 1, n)
        return self.hdegens[(m, n)][j]

    def vdegeneracy(self, m, n, j):
        self._require(m, n + 1)
        return self.vdegens[(m, n)][j]

    def h_operator(self, theta, target, n):
        return _apply_operator(lambda m, i: self.hface(m, n, i),
                               lambda m, j: self.hdegeneracy(m, n, j),
                               self.count(target, n), theta, target)

    def v_operator(self, theta, m, target):
        return _apply_operator(lambda n, i: self.vface(m, n, i),
                               lambda n, j: self.vdegeneracy(m, n, j),
                               self.count(m, target), theta, target)

    def row(self, n):
        """The horizontal simplicial set at vertical degree ``n``."""
        return SimplicialSet([self.counts[(m, n)] for m in range(self.max_h + 1)],
                             [[]] + [self.hfaces[(m, n)] for m in range(1, self.max_h + 1)],
                             [self.hdegens[(m, n)] for m in range(self.max_h)] + [[]])

    def column(self, m):
        """The vertical simplicial set at horizontal degree ``m``."""
        return SimplicialSet([self.counts[(m, n)] for n in range(self.max_v + 1)],
                             [[]] + [self.vfaces[(m, n)] for n in range(1, self.max_v + 1)],
                             [self.vdegens[(m, n)] for n in range(self.max_v)] + [[]])

    def check_identities(self):
        for n in range(self.max_v + 1):
            self.row(n).check_identities()
        for m in range(self.max_h + 1):
            self.column(m).check_identities()
        # horizontal and vertical structure maps commute
        for m in range(self.max_h + 1):
            for n in range(self.max_v + 1):
                for i in range(m + 1 if m else 0):
                    for k in range(n + 1 if n else 0):
                        lhs = self.vfaces[(m - 1, n)][k][self.hfaces[(m, n)][i]]
                        rhs = self.hfaces[(m, n - 1)][i][self.vfaces[(m, n)][k]]
                        _expect_equal(lhs, rhs, (m, n), (i, k), "d^h d^v = d^v d^h")
                if m < self.max_h and n > 0:
                    for j in range(m + 1):
                        for k in range(n + 1):
                            lhs = self.vfaces[(m + 1, n)][k][self.hdegens[(m, n)][j]]
                            rhs = self.hdegens[(m, n - 1)][j][self.vfaces[(m, n)][k]]
                            _expect_equal(lhs, rhs, (m, n), (j, k), "d^v s^h = s^h d^v")
                if n < self.max_v and m > 0:
                    for j in range(n + 1):
                        for i in range(m + 1):
                            lhs = self.hfaces[(m, n + 1)][i][self.vdegens[(m, n)][j]]
                            rhs = self.vdegens[(m - 1, n)][j][self.hfaces[(m, n)][i]]
                            _expect_equal(lhs, rhs, (m, n), (i, j), "d^h s^v = s^v d^h")
                if m < self.max_h and n < self.max_v:
                    for j in range(m + 1):
                        for k in range(n + 1):
                            lhs = self.vdegens[(m + 1, n)][k][self.hdegens[(m, n)][j]]
                            rhs = self.hdegens[(m, n + 1)][j][self.vdegens[(m, n)][k]]
                            _expect_equal(lhs, rhs, (m, n), (j, k), "s^h s^v = s^v s^h")
        return True

    def same_structure(self, other):
        if (self.max_h, self.max_v) != (other.max_h, other.max_v) or self.counts != other.counts:
            return False
        for mine, theirs in ((self.hfaces, other.hfaces), (self.vfaces, other.vfaces),
                             (self.hdegens, other.hdegens), (self.vdegens, other.vdegens)):
            for key, tables in mine.items():
                if any(not np.array_equal(a, b) for a, b in zip(tables, theirs[key])):
                    return False
        return True

    @classmethod
    def external_product(cls, x, y):
        """``(X ⊠ Y)_{m,n} = X_m × Y_n`` with id ``a * |Y_n| + b``."""
        H, V = x.max_degree, y.max_degree
        counts = {(m, n): x.counts[m] * y.counts[n] for m in range(H + 1) for n in range(V + 1)}
        hfaces, vfaces, hdegens, vdegens = {}, {}, {}, {}
        for m in range(H + 1):
            for n in range(V + 1):
                a, b = np.divmod(np.arange(counts[(m, n)]), y.counts[n])
                if m:
                    hfaces[(m, n)] = [x.face(m, i)[a] * y.counts[n] + b for i in range(m + 1)]
                if n:
                    vfaces[(m, n)] = [a * y.counts[n - 1] + y.face(n, i)[b] for i in range(n + 1)]
                if m < H:
                    hdegens[(m, n)] = [x.degeneracy(m, j)[a] * y.counts[n] + b
                                       for j in range(m + 1)]
                if n < V:
                    vdegens[(m, n)] = [a * y.counts[n + 1] + y.degeneracy(n, j)[b]
                                       for j in range(n + 1)]
        return cls(counts, hfaces, vfaces, hdegens, vdegens, H, V,
                   name=f"{x.name} ⊠ {y.name}")

    @classmethod
    def constant_vertical(cls, x, max_v):
        """``x`` in the horizontal direction, constant vertically."""
        return cls.external_product(x, point(max_v))


def diagonal(b, max_degree=None):
    """The diagonal ``(dB)_n = B_{n,n}`` with ``d_i = d^h_i d^v_i`` and ``s_j = s^h_j s^v_j``."""
    top = min(b.max_h, b.max_v)
    if max_degree is None:
        max_degree = top
    if max_degree > top:
        raise TruncationError(f"diagonal through degree {max_degree} needs bidegree "
                              f"{(max_degree, max_degree)}, truncation is {(b.max_h, b.max_v)}")
    counts = [b.counts[(n, n)] for n in range(max_degree + 1)]
    faces = [[]] + [[b.hfaces[(n, n - 1)][i][b.vfaces[(n, n)][i]] for i in range(n + 1)]
                    for n in range(1, max_degree + 1)]
    degens = [[b.hdegens[(n, n + 1)][j][b.vdegens[(n, n)][j]] for j in range(n + 1)]
              for n in range(max_degree)] + [[]]
    return SimplicialSet(counts, faces, degens, name=f"d({b.name})")


# ---------------------------------------------------------------------------
# edgewise subdivision


def _sd_degree(available, max_degree):
    top = (available - 1) // 2
    if max_degree is None:
        if top < 0:
            raise TruncationError("subdivision needs truncation at least 1")
        return top
    if max_degree > top:
        raise TruncationError(f"subdivision through degree {max_degree} needs degree "
                              f"{2 * max_degree + 1}, truncation is {available}")
    return max_degree


def sd(x, max_degree=None):
    """Segal edgewise subdivision: ``(Sd X)_n = X_{2n+1}``, maps ``X(theta ⊔ theta^op)``."""
    d = _sd_degree(x.max_degree, max_degree)
    counts = [x.counts[2 * n + 1] for n in range(d + 1)]
    faces = [[]] + [[x.operator(subdivide_operator(_coface(n, i), n), 2 * n + 1)
                     for i in range(n + 1)] for n in range(1, d + 1)]
    degens = [[x.operator(subdivide_operator(_codegeneracy(n, j), n), 2 * n + 1)
               for j in range(n + 1)] for n in range(d)] + [[]]
    labels = decode = encode = None
    if x._labels is not None:
        labels = [x._labels[2 * n + 1] for n in range(d + 1)]
    elif x._decode is not None:
        def _decode(n, k):
            return x._decode(2 * n + 1, k)

        def _encode(n, label):
            return x._encode(2 * n + 1, label)
        decode, encode = _decode, _encode
    return SimplicialSet(counts, faces, degens, labels=labels, decode=decode, encode=encode,
                         name=f"Sd({x.name})")


def sd_h(b, max_degree=None):
    """Subdivide the horizontal direction of a bisimplicial set."""
    H = _sd_degree(b.max_h, max_degree)
    V = b.max_v
    counts = {(m, n): b.counts[(2 * m + 1, n)] for m in range(H + 1) for n in range(V + 1)}
    hfaces, vfaces, hdegens, vdegens = {}, {}, {}, {}
    for m in range(H + 1):
        for n in range(V + 1):
            if m:
                hfaces[(m, n)] = [b.h_operator(subdivide_operator(_coface(m, i), m), 2 * m + 1, n)
                                  for i in range(m + 1)]
            if m < H:
                hdegens[(m, n)] = [b.h_operator(subdivide_operator(_codegeneracy(m, j), m),
                                                2 * m + 1, n) for j in range(m + 1)]
            if n:
                vfaces[(m, n)] = b.vfaces[(2 * m + 1, n)]
            if n < V:
                vdegens[(m, n)] = b.vdegens[(2 * m + 1, n)]
    return BisimplicialSet(counts, hfaces, vfaces, hdegens, vdegens, H, V,
                           name=f"Sd_h({b.name})")


def sd_v(b, max_degree=None):
    """Subdivide the vertical direction of a bisimplicial set."""
    H = b.max_h
    V = _sd_degree(b.max_v, max_degree)
    counts = {(m, n): b.counts[(m, 2 * n + 1)] for m in range(H + 1) for n in range(V + 1)}
    hfaces, vfaces, hdegens, vdegens = {}, {}, {}, {}
    for m in range(H + 1):
        for n in range(V + 1):
            if n:
                vfaces[(m, n)] = [b.v_operator(subdivide_operator(_coface(n, i), n), m, 2 * n + 1)
                                  for i in range(n + 1)]
            if n < V:
                vdegens[(m, n)] = [b.v_operator(subdivide_operator(_codegeneracy(n, j), n),
                                                m, 2 * n + 1) for j in range(n + 1)]
            if m:
                hfaces[(m, n)] = b.hfaces[(m, 2 * n + 1)]
            if m < H:
                hdegens[(m, n)] = b.hdegens[(m, 2 * n + 1)]
    return BisimplicialSet(counts, hfaces, vfaces, hdegens, vdegens, H, V,
                           name=f"Sd_v({b.name})")


# ---------------------------------------------------------------------------
# real structures and C2 fixed points


class RealStructure:
    """A simplicial set with involutions ``w_n`` reversing the simplicial order.

    Build through :func:`attach_real_structure`, which validates
    ``w_n w_n = id``, ``w_{n-1} d_i = d_{n-i} w_n`` and
    ``w_{n+1} s_j = s_{n-j} w_n``.
    """

    def __init__(self, base, w):
        self.base = base
        self.w = [_table(t) for t in w]

    @property
    def max_degree(self):
        return self.base.max_degree


def attach_real_structure(x, w):
    if len(w) < x.max_degree + 1:
        raise TruncationError("involution must be given in every degree")
    w = [np.asarray(t, dtype=np.int64) for t in w[: x.max_degree + 1]]
    for n, t in enumerate(w):
        if t.shape != (x.counts[n],) or (t.size and (t.min() < 0 or t.max() >= x.counts[n])):
            raise RelationError(f"w_{n} is not a self-map of degree {n}", degree=n)
        bad = np.nonzero(t[t] != np.arange(x.counts[n]))[0]
        if bad.size:
            raise RelationError(f"w_{n} w_{n} != id at simplex {bad[0]}", degree=n,
                                simplex=int(bad[0]))
    for n in range(1, x.max_degree + 1):
        for i in range(n + 1):
            bad = np.nonzero(w[n - 1][x.face(n, i)] != x.face(n, n - i)[w[n]])[0]
            if bad.size:
                raise RelationError(f"w_{n - 1} d_{i} != d_{n - i} w_{n} at simplex {bad[0]} "
                                    f"of degree {n}", degree=n, index=i, simplex=int(bad[0]))
    for n in range(x.max_degree):
        for j in range(n + 1):
            bad = np.nonzero(w[n + 1][x.degeneracy(n, j)] != x.degeneracy(n, n - j)[w[n]])[0]
            if bad.size:
                raise RelationError(f"w_{n + 1} s_{j} != s_{n - j} w_{n} at simplex {bad[0]} "
                                    f"of degree {n}", degree=n, index=j, simplex=int(bad[0]))
    return RealStructure(x, w)


def sd_action(real, max_degree=None):
    """The C2-action ``Sd(w)`` on the subdivision, as a simplicial endomorphism."""
    base = sd(real.base, max_degree)
    maps = [real.w[2 * n + 1] for n in range(base.max_degree + 1)]
    return SimplicialMap(base, base, maps)


def fixed_points(action):
    """Degreewise fixed simplices of an involutive simplicial endomorphism.

    The result carries ``embedding[n]``, the ids of the fixed simplices in the
    ambient set, and labels inherited from it.
    """
    x = action.source
    if action.target is not x:
        raise NotSimplicialError("fixed points need an endomorphism")
    action.check()
    d = action.max_degree
    keep = [np.nonzero(action.maps[n] == np.arange(x.counts[n]))[0] for n in range(d + 1)]
    position = []
    for n in range(d + 1):
        pos = np.full(x.counts[n], -1, dtype=np.int64)
        pos[keep[n]] = np.arange(keep[n].size)
        position.append(pos)
    faces = [[]] + [[position[n - 1][x.face(n, i)[keep[n]]] for i in range(n + 1)]
                    for n in range(1, d + 1)]
    degens = [[position[n + 1][x.degeneracy(n, j)[keep[n]]] for j in range(n + 1)]
              for n in range(d)] + [[]]
    labels = [[x.label(n, int(k)) for k in keep[n]] for n in range(d + 1)]
    fixed = SimplicialSet([k.size for k in keep], faces, degens, labels=labels,
                          name=f"{x.name}^C2")
    fixed.embedding = keep
    return fixed


# ---------------------------------------------------------------------------
# path components


def pi0(x):
    """Connected components of the vertex set, each a sorted list of vertex ids."""
    if x.max_degree < 1:
        raise TruncationError("pi0 needs 1-simplices")
    nv = x.counts[0]
    if nv == 0:
        return []
    edges = coo_matrix((np.ones(x.counts[1]), (x.face(1, 0), x.face(1, 1))), shape=(nv, nv))
    _, labels = connected_components(edges, directed=False)
    groups = {}
    for v, c in enumerate(labels):
        groups.setdefault(int(c), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])
