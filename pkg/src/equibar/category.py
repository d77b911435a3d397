"""Finite categories, dualities, nerves, subdivision and the D-construction.

A category stores objects ``0..n-1`` and morphisms ``0..m-1`` with
``source``/``target`` arrays.  ``comp[g, f]`` is ``g ∘ f`` when
``target[f] == source[g]`` and ``-1`` otherwise.

A one-object category built from a monoid composes diagrammatically,
``comp[g, f] = mul[f, g]``, so that its nerve is the bar construction with
the same face maps (``d_i`` multiplies ``m_i m_{i+1}``).
"""
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CategoryError, NotSimplicialError, RelationError
from .simplicial import SimplicialMap, SimplicialSet, attach_real_structure, sd


def _int_array(values, length=None):
    arr = np.asarray(values, dtype=np.int64)
    if length is not None and arr.shape != (length,):
        raise CategoryError(f"expected {length} entries, got shape {arr.shape}")
    return arr


class FiniteCategory:
    def __init__(self, objects, morphisms, source, target, comp, identities,
                 name=None, validate=True):
        self.objects = [str(o) for o in objects]
        self.morphisms = [str(m) for m in morphisms]
        n, m = len(self.objects), len(self.morphisms)
        self.source = _int_array(source, m)
        self.target = _int_array(target, m)
        self.identities = _int_array(identities, n)
        self.comp = np.asarray(comp, dtype=np.int64).reshape(m, m)
        self.name = name
        for arr in (self.source, self.target, self.identities, self.comp):
            arr.setflags(write=False)
        if validate:
            self.validate()

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.morphisms)

    def __repr__(self):
        return (f"FiniteCategory({self.name or '?'}: {self.n_objects} objects, "
                f"{self.n_morphisms} morphisms)")

    def hom(self, a, b):
        return np.nonzero((self.source == a) & (self.target == b))[0]

    def compose(self, g, f):
        """``g ∘ f``."""
        h = int(self.comp[g, f])
        if h < 0:
            raise CategoryError(f"{self.morphisms[g]} ∘ {self.morphisms[f]} is not defined",
                                witness=(self.morphisms[g], self.morphisms[f]))
        return h

    def inverse(self, f):
        """The inverse of ``f`` or ``None``."""
        for g in self.hom(self.target[f], self.source[f]):
            if (self.comp[g, f] == self.identities[self.source[f]]
                    and self.comp[f, g] == self.identities[self.target[f]]):
                return int(g)
        return None

    def is_iso(self, f):
        return self.inverse(f) is not None

    def validate(self):
        n, m = self.n_objects, self.n_morphisms
        for what, arr, bound in (("source", self.source, n), ("target", self.target, n),
                                 ("identity", self.identities, m)):
            if arr.size and (arr.min() < 0 or arr.max() >= bound):
                raise CategoryError(f"{what} table has out-of-range entries")
        ids = self.identities
        if np.any(self.source[ids] != np.arange(n)) or np.any(self.target[ids] != np.arange(n)):
            raise CategoryError("an identity has the wrong source or target")
        if self.comp.size and self.comp.max() >= m:
            raise CategoryError("composition table has out-of-range entries")
        composable = self.target[None, :] == self.source[:, None]
        defined = self.comp >= 0
        bad = np.argwhere(composable != defined)
        if bad.size:
            g, f = bad[0]
            raise CategoryError("composition must be defined exactly on composable pairs",
                                witness=(self.morphisms[g], self.morphisms[f]))
        G, F = np.nonzero(defined)
        H = self.comp[G, F]
        bad = np.nonzero((self.source[H] != self.source[F]) | (self.target[H] != self.target[G]))[0]
        if bad.size:
            k = bad[0]
            raise CategoryError("composite has the wrong source or target",
                                witness=(self.morphisms[G[k]], self.morphisms[F[k]]))
        f = np.arange(m)
        bad = np.nonzero((self.comp[ids[self.target], f] != f)
                         | (self.comp[f, ids[self.source]] != f))[0]
        if bad.size:
            raise CategoryError("identity law fails", witness=self.morphisms[bad[0]])
        # (h ∘ g) ∘ f == h ∘ (g ∘ f) for every composable triple
        HG = self.comp[:, G]
        mask = HG >= 0
        lhs = self.comp[np.where(mask, HG, 0), F[None, :]]
        rhs = self.comp[:, H]
        bad = np.argwhere(mask & (lhs != rhs))
        if bad.size:
            h, k = bad[0]
            raise CategoryError("composition is not associative",
                                witness=(self.morphisms[h], self.morphisms[G[k]],
                                         self.morphisms[F[k]]))

    def same_as(self, other):
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and np.array_equal(self.source, other.source)
                and np.array_equal(self.target, other.target)
                and np.array_equal(self.comp, other.comp)
                and np.array_equal(self.identities, other.identities))

    def to_json(self):
        return {
            "objects": list(self.objects),
            "morphisms": [{"name": self.morphisms[k], "source": int(self.source[k]),
                           "target": int(self.target[k])} for k in range(self.n_morphisms)],
            "composition": [[int(v) if v >= 0 else None for v in row] for row in self.comp],
            "identities": [int(v) for v in self.identities],
        }

    @classmethod
    def from_json(cls, data, name=None):
        try:
            morphisms = data["morphisms"]
            comp = [[-1 if v is None else int(v) for v in row] for row in data["composition"]]
            return cls(data["objects"], [mo["name"] for mo in morphisms],
                       [mo["source"] for mo in morphisms], [mo["target"] for mo in morphisms],
                       comp, data["identities"], name=name or data.get("name"))
        except (KeyError, TypeError, ValueError) as exc:
            raise CategoryError(f"malformed category data: {exc}") from exc


def _from_triples(objects, morphisms, source, target, identities, compose_pairs, name):
    """Assemble a category from ``compose_pairs``: iterable of ``(g, f, g∘f)``."""
    m = len(morphisms)
    comp = np.full((m, m), -1, dtype=np.int64)
    for g, f, h in compose_pairs:
        comp[g, f] = h
    return FiniteCategory(objects, morphisms, source, target, comp, identities, name=name)


# ---------------------------------------------------------------------------
# functors, natural transformations, dualities


class Functor:
    """A functor given by its object and morphism tables.

    ``contravariant`` functors reverse composition: ``F(g∘f) = F(f)∘F(g)``.
    """

    def __init__(self, source, target, on_objects, on_morphisms, contravariant=False,
                 check=True):
        self.source = source
        self.target = target
        self.on_objects = _int_array(on_objects, source.n_objects)
        self.on_morphisms = _int_array(on_morphisms, source.n_morphisms)
        self.contravariant = contravariant
        if check:
            self.check()

    def check(self):
        C, D = self.source, self.target
        Fo, Fm = self.on_objects, self.on_morphisms
        if Fo.size and (Fo.min() < 0 or Fo.max() >= D.n_objects):
            raise CategoryError("object table leaves the target category")
        if Fm.size and (Fm.min() < 0 or Fm.max() >= D.n_morphisms):
            raise CategoryError("morphism table leaves the target category")
        src, tgt = (C.target, C.source) if self.contravariant else (C.source, C.target)
        bad = np.nonzero((D.source[Fm] != Fo[src]) | (D.target[Fm] != Fo[tgt]))[0]
        if bad.size:
            raise CategoryError("functor does not respect sources and targets",
                                witness=C.morphisms[bad[0]])
        bad = np.nonzero(Fm[C.identities] != D.identities[Fo])[0]
        if bad.size:
            raise CategoryError("functor does not preserve identities",
                                witness=C.objects[bad[0]])
        G, F = np.nonzero(C.comp >= 0)
        image = Fm[C.comp[G, F]]
        if self.contravariant:
            expected = D.comp[Fm[F], Fm[G]]
        else:
            expected = D.comp[Fm[G], Fm[F]]
        bad = np.nonzero(image != expected)[0]
        if bad.size:
            k = bad[0]
            raise CategoryError("functor does not respect composition",
                                witness=(C.morphisms[G[k]], C.morphisms[F[k]]))

    def after(self, first):
        """``self ∘ first``."""
        return Functor(first.source, self.target, self.on_objects[first.on_objects],
                       self.on_morphisms[first.on_morphisms],
                       contravariant=self.contravariant != first.contravariant)

    @classmethod
    def identity(cls, C):
        return cls(C, C, np.arange(C.n_objects), np.arange(C.n_morphisms))

    def is_identity(self):
        return (self.source is self.target and not self.contravariant
                and np.array_equal(self.on_objects, np.arange(self.source.n_objects))
                and np.array_equal(self.on_morphisms, np.arange(self.source.n_morphisms)))


def check_natural(F, G, components, iso=False):
    """Check that ``components[c]: F(c) -> G(c)`` is natural (optionally invertible).

    ``F`` and ``G`` are functors with the same source, target and variance.
    Returns nothing; raises :class:`CategoryError` with a witness.
    """
    C, D = F.source, F.target
    u = _int_array(components, C.n_objects)
    bad = np.nonzero((D.source[u] != F.on_objects) | (D.target[u] != G.on_objects))[0]
    if bad.size:
        raise CategoryError("component has the wrong source or target",
                            witness=C.objects[bad[0]])
    f = np.arange(C.n_morphisms)
    if F.contravariant:
        # u_a ∘ F(f) = G(f) ∘ u_b for f: a -> b
        lhs = D.comp[u[C.source], F.on_morphisms]
        rhs = D.comp[G.on_morphisms, u[C.target]]
    else:
        lhs = D.comp[u[C.target], F.on_morphisms[f]]
        rhs = D.comp[G.on_morphisms[f], u[C.source]]
    bad = np.nonzero(lhs != rhs)[0]
    if bad.size:
        raise CategoryError("naturality square does not commute", witness=C.morphisms[bad[0]])
    if iso:
        for c in range(C.n_objects):
            if not D.is_iso(u[c]):
                raise CategoryError("component is not an isomorphism", witness=C.objects[c])


class CategoryWithDuality:
    """A contravariant endofunctor ``T`` with ``eta: Id -> T T``.

    ``eta[c]`` is a morphism ``c -> T T c``; it must be a natural
    isomorphism with ``T(eta_c) ∘ eta_{Tc} = id_{Tc}``.
    """

    def __init__(self, category, on_objects, on_morphisms, eta=None):
        self.category = C = category
        self.T = Functor(C, C, on_objects, on_morphisms, contravariant=True)
        self.eta = _int_array(C.identities if eta is None else eta, C.n_objects)
        self._check_eta()

    @property
    def on_objects(self):
        return self.T.on_objects

    @property
    def on_morphisms(self):
        return self.T.on_morphisms

    def _check_eta(self):
        C, T = self.category, self.T
        TT = T.after(T)
        check_natural(Functor.identity(C), TT, self.eta, iso=True)
        To, Tm = T.on_objects, T.on_morphisms
        # T(eta_c) ∘ eta_{Tc} = id_{Tc}
        bad = np.nonzero(C.comp[Tm[self.eta], self.eta[To]] != C.identities[To])[0]
        if bad.size:
            raise CategoryError("T(eta_c) ∘ eta_{Tc} is not the identity",
                                witness=C.objects[bad[0]])

    @property
    def is_strict(self):
        C = self.category
        return (np.array_equal(self.eta, C.identities)
                and np.array_equal(self.on_objects[self.on_objects], np.arange(C.n_objects))
                and np.array_equal(self.on_morphisms[self.on_morphisms],
                                   np.arange(C.n_morphisms)))

    def to_json(self):
        data = self.category.to_json()
        data["duality"] = {"objects": [int(v) for v in self.on_objects],
                           "morphisms": [int(v) for v in self.on_morphisms]}
        if not np.array_equal(self.eta, self.category.identities):
            data["duality"]["eta"] = [int(v) for v in self.eta]
        return data


class StrictDuality(CategoryWithDuality):
    """A duality with ``eta = id``, so ``T ∘ T`` is the identity functor."""

    def __init__(self, category, on_objects, on_morphisms):
        C = category
        To, Tm = _int_array(on_objects, C.n_objects), _int_array(on_morphisms, C.n_morphisms)
        if To.size and (To.min() < 0 or To.max() >= C.n_objects):
            raise CategoryError("duality object table leaves the category")
        if Tm.size and (Tm.min() < 0 or Tm.max() >= C.n_morphisms):
            raise CategoryError("duality morphism table leaves the category")
        bad = np.nonzero(To[To] != np.arange(C.n_objects))[0]
        if bad.size:
            raise CategoryError("T T != id on objects", witness=C.objects[bad[0]])
        bad = np.nonzero(Tm[Tm] != np.arange(C.n_morphisms))[0]
        if bad.size:
            raise CategoryError("T T != id on morphisms", witness=C.morphisms[bad[0]])
        super().__init__(category, To, Tm)


def require_strict(duality):
    if not isinstance(duality, CategoryWithDuality) or not duality.is_strict:
        raise CategoryError("a strict duality is required")
    return duality


class DualityPreservingFunctor:
    """``(F, xi)`` with ``xi_c: F(T c) -> T'(F c)`` natural and coherent with ``eta``."""

    def __init__(self, source, target, functor, xi):
        self.source = source
        self.target = target
        self.functor = functor
        self.xi = _int_array(xi, source.category.n_objects)
        self.check()

    def check(self):
        F, T, T2 = self.functor, self.source.T, self.target.T
        if F.source is not self.source.category or F.target is not self.target.category:
            raise CategoryError("functor does not match the categories with duality")
        check_natural(F.after(T), T2.after(F), self.xi)
        D = self.target.category
        c = np.arange(self.source.category.n_objects)
        Fo, Fm = F.on_objects, F.on_morphisms
        # T'(xi_c) ∘ eta'_{F c} = xi_{T c} ∘ F(eta_c)
        lhs = D.comp[T2.on_morphisms[self.xi[c]], self.target.eta[Fo[c]]]
        rhs = D.comp[self.xi[T.on_objects[c]], Fm[self.source.eta[c]]]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            raise CategoryError("duality coherence square does not commute",
                                witness=self.source.category.objects[bad[0]])


# ---------------------------------------------------------------------------
# corpus


def from_monoid(M):
    """The one-object category of a monoid, with ``T`` the anti-involution."""
    m = M.size
    comp = np.ascontiguousarray(M.mul.T)
    C = FiniteCategory(["*"], M.names, np.zeros(m, dtype=np.int64), np.zeros(m, dtype=np.int64),
                       comp, [M.unit], name=M.name)
    return StrictDuality(C, [0], M.inv)


def poset(n):
    """``[n] = {0 < 1 < ... < n}`` with the order-reversing duality ``i -> n - i``."""
    pairs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    index = {p: k for k, p in enumerate(pairs)}
    triples = [(index[(j, k)], index[(i, j)], index[(i, k)])
               for (i, j) in pairs for k in range(j, n + 1)]
    C = _from_triples(list(range(n + 1)), [f"{i}<={j}" for i, j in pairs],
                      [i for i, _ in pairs], [j for _, j in pairs],
                      [index[(i, i)] for i in range(n + 1)], triples, name=f"[{n}]")
    return StrictDuality(C, [n - i for i in range(n + 1)],
                         [index[(n - j, n - i)] for i, j in pairs])


def category_corpus():
    from .monoid import cyclic, symmetric3, trivial
    return {
        "trivial": from_monoid(trivial()),
        "C2": from_monoid(cyclic(2)),
        "S3": from_monoid(symmetric3("inverse")),
        "poset2": poset(2),
    }


def load_category(data):
    """A :class:`CategoryWithDuality` from JSON data (dict or path).

    Accepts category JSON with a ``duality`` block, or monoid JSON.
    """
    if isinstance(data, str):
        with open(data) as fh:
            data = json.load(fh)
    if "mul" in data:
        from .monoid import FiniteMonoid
        return from_monoid(FiniteMonoid.from_json(data))
    C = FiniteCategory.from_json(data)
    dual = data.get("duality")
    if dual is None:
        raise CategoryError("category data carries no duality block")
    if "eta" in dual:
        return CategoryWithDuality(C, dual["objects"], dual["morphisms"], dual["eta"])
    return StrictDuality(C, dual["objects"], dual["morphisms"])


# ---------------------------------------------------------------------------
# nerve


def _chain_codes(chains, base):
    if chains.shape[1] and base ** chains.shape[1] >= 2 ** 62:
        raise OverflowError("nerve too large to index")
    powers = base ** np.arange(chains.shape[1] - 1, -1, -1, dtype=np.int64)
    return chains @ powers if chains.shape[1] else np.zeros(len(chains), dtype=np.int64)


def _chains(C, d):
    """``chains[n]``: composable chains ``(f_1, ..., f_n)`` in lexicographic order."""
    order = np.argsort(C.source, kind="stable")
    out_count = np.bincount(C.source, minlength=C.n_objects)
    out_start = np.concatenate([[0], np.cumsum(out_count)[:-1]]).astype(np.int64)
    chains = [np.arange(C.n_objects, dtype=np.int64)[:, None]]
    if d >= 1:
        chains.append(np.arange(C.n_morphisms, dtype=np.int64)[:, None])
    for n in range(2, d + 1):
        prev = chains[-1]
        ends = C.target[prev[:, -1]]
        reps = out_count[ends]
        rows = np.repeat(np.arange(len(prev)), reps)
        offset = np.arange(rows.size) - np.repeat(np.cumsum(reps) - reps, reps)
        ext = order[out_start[ends][rows] + offset]
        chains.append(np.column_stack([prev[rows], ext]))
    return chains


def _lookup(codes, values):
    pos = np.searchsorted(codes, values)
    if values.size and (pos.max(initial=0) >= len(codes) or np.any(codes[pos] != values)):
        raise CategoryError("chain not found in the nerve")
    return pos


def nerve(C, d):
    """The nerve through degree ``d``; ``.chains[n]`` holds the chain arrays."""
    chains = _chains(C, d)
    base = max(C.n_morphisms, 1)
    codes = [None] + [_chain_codes(chains[n], base) for n in range(1, d + 1)]
    faces = [[]]
    degens = []
    for n in range(1, d + 1):
        ch = chains[n]
        if n == 1:
            faces.append([C.target[ch[:, 0]], C.source[ch[:, 0]]])
            continue
        level = [_lookup(codes[n - 1], _chain_codes(ch[:, 1:], base))]
        for i in range(1, n):
            composed = C.comp[ch[:, i], ch[:, i - 1]]
            new = np.column_stack([ch[:, : i - 1], composed, ch[:, i + 1:]])
            level.append(_lookup(codes[n - 1], _chain_codes(new, base)))
        level.append(_lookup(codes[n - 1], _chain_codes(ch[:, :-1], base)))
        faces.append(level)
    for n in range(d):
        ch = chains[n]
        if n == 0:
            degens.append([C.identities[ch[:, 0]]])
            continue
        level = []
        for j in range(n + 1):
            vertex = C.source[ch[:, j]] if j < n else C.target[ch[:, n - 1]]
            new = np.column_stack([ch[:, :j], C.identities[vertex], ch[:, j:]])
            level.append(_lookup(codes[n + 1], _chain_codes(new, base)))
        degens.append(level)

    def decode(n, k):
        if n == 0:
            return C.objects[k]
        return tuple(C.morphisms[f] for f in chains[n][k])

    names = {name: k for k, name in enumerate(C.morphisms)}
    objects = {name: k for k, name in enumerate(C.objects)}

    def encode(n, label):
        if n == 0:
            return objects[label]
        arr = np.array([[names[f] for f in label]], dtype=np.int64)
        return int(_lookup(codes[n], _chain_codes(arr, base))[0])

    x = SimplicialSet([len(c) for c in chains], faces, degens, decode=decode, encode=encode,
                      name=f"N({C.name})")
    x.chains = chains
    x.codes = codes
    return x


def real_nerve(duality, d):
    """The nerve with ``w_n(f_1, ..., f_n) = (T f_n, ..., T f_1)``."""
    require_strict(duality)
    C = duality.category
    x = nerve(C, d)
    Tm = duality.on_morphisms
    w = [duality.on_objects.copy()]
    for n in range(1, d + 1):
        flipped = Tm[x.chains[n][:, ::-1]]
        w.append(_lookup(x.codes[n], _chain_codes(flipped, max(C.n_morphisms, 1))))
    return attach_real_structure(x, w)


# ---------------------------------------------------------------------------
# subdivision, Sym, fixed subcategories


def sd_category(C):
    """Objects are morphisms of ``C``; a morphism ``(h, g, i)`` goes from ``i∘g∘h`` to ``g``.

    ``(h', g', i') ∘ (h, g, i) = (h'∘h, g', i∘i')``.  Morphisms are listed in
    the lexicographic order of the chains ``(h, g, i)``, so ``.chains`` is the
    degree-3 chain array of the nerve of ``C``.
    """
    chains = _chains(C, 3)[3] if C.n_morphisms else np.zeros((0, 3), dtype=np.int64)
    base = max(C.n_morphisms, 1)
    codes = _chain_codes(chains, base)
    h, g, i = chains.T
    src = C.comp[i, C.comp[g, h]]
    tgt = g
    ident_chains = np.column_stack([C.identities[C.source], np.arange(C.n_morphisms),
                                    C.identities[C.target]])
    identities = _lookup(codes, _chain_codes(ident_chains, base))
    # pairs (b, a) with target(a) == source(b)
    by_target = np.argsort(tgt, kind="stable")
    in_count = np.bincount(tgt, minlength=C.n_morphisms)
    in_start = np.concatenate([[0], np.cumsum(in_count)[:-1]]).astype(np.int64)
    reps = in_count[src]
    B = np.repeat(np.arange(len(chains)), reps)
    offset = np.arange(B.size) - np.repeat(np.cumsum(reps) - reps, reps)
    A = by_target[in_start[src][B] + offset]
    composite = np.column_stack([C.comp[h[B], h[A]], g[B], C.comp[i[A], i[B]]])
    result = _lookup(codes, _chain_codes(composite, base))
    comp = np.full((len(chains), len(chains)), -1, dtype=np.int64)
    comp[B, A] = result
    names = [f"({C.morphisms[a]},{C.morphisms[b]},{C.morphisms[c]})" for a, b, c in chains]
    S = FiniteCategory(C.morphisms, names, src, tgt, comp, identities, name=f"Sd({C.name})")
    S.chains = chains
    return S


def sd_duality(duality, S=None):
    """``SdT``: ``g -> T g`` and ``(h, g, i) -> (T i, T g, T h)``; a covariant involution."""
    C = duality.category
    S = sd_category(C) if S is None else S
    Tm = duality.on_morphisms
    base = max(C.n_morphisms, 1)
    h, g, i = S.chains.T
    image = np.column_stack([Tm[i], Tm[g], Tm[h]])
    on_morphisms = _lookup(_chain_codes(S.chains, base), _chain_codes(image, base))
    F = Functor(S, S, Tm, on_morphisms)
    if not F.after(F).is_identity():
        raise CategoryError("SdT is not an involution")
    return F


def fixed_subcategory(F):
    """Objects and morphisms fixed by a covariant endofunctor ``F``.

    ``.embedding_objects`` and ``.embedding_morphisms`` give ambient ids.
    """
    C = F.source
    objs = np.nonzero(F.on_objects == np.arange(C.n_objects))[0]
    mors = np.nonzero(F.on_morphisms == np.arange(C.n_morphisms))[0]
    obj_pos = np.full(C.n_objects, -1, dtype=np.int64)
    obj_pos[objs] = np.arange(len(objs))
    mor_pos = np.full(C.n_morphisms, -1, dtype=np.int64)
    mor_pos[mors] = np.arange(len(mors))
    sub = C.comp[np.ix_(mors, mors)]
    comp = np.where(sub >= 0, mor_pos[np.where(sub >= 0, sub, 0)], -1)
    fixed = FiniteCategory([C.objects[o] for o in objs], [C.morphisms[k] for k in mors],
                           obj_pos[C.source[mors]], obj_pos[C.target[mors]], comp,
                           mor_pos[C.identities[objs]], name=f"{C.name}^F")
    fixed.embedding_objects = objs
    fixed.embedding_morphisms = mors
    return fixed


def _sym_direct(duality):
    C = duality.category
    To, Tm = duality.on_objects, duality.on_morphisms
    f = np.arange(C.n_morphisms)
    objs = np.nonzero((C.target == To[C.source]) & (Tm == f))[0]
    obj_pos = {int(o): k for k, o in enumerate(objs)}
    pairs = []
    for g in objs:
        for r in np.nonzero(C.target == C.source[g])[0]:
            source_form = C.comp[Tm[r], C.comp[g, r]]
            pairs.append((int(r), int(g), int(source_form)))
    index = {(r, g): k for k, (r, g, _) in enumerate(pairs)}
    names = [f"{C.morphisms[r]}:{C.morphisms[s]}->{C.morphisms[g]}" for r, g, s in pairs]
    source = [obj_pos[s] for _, _, s in pairs]
    target = [obj_pos[g] for _, g, _ in pairs]
    identities = [index[(int(C.identities[C.source[g]]), int(g))] for g in objs]
    triples = []
    for b, (r2, g2, s2) in enumerate(pairs):
        for a, (r1, g1, _) in enumerate(pairs):
            if g1 == s2:
                triples.append((b, a, index[(int(C.comp[r2, r1]), g2)]))
    S = _from_triples([C.morphisms[o] for o in objs], names, source, target, identities,
                      triples, name=f"Sym({C.name})")
    S.forms = objs
    S.pairs = pairs
    return S


@dataclass
class SymComparison:
    direct: FiniteCategory
    fixed: FiniteCategory
    objects_agree: bool
    morphisms_agree: bool
    composition_agrees: bool

    @property
    def ok(self):
        return self.objects_agree and self.morphisms_agree and self.composition_agrees

    def to_json(self):
        return {"objects": self.direct.n_objects, "morphisms": self.direct.n_morphisms,
                "objects_agree": self.objects_agree, "morphisms_agree": self.morphisms_agree,
                "composition_agrees": self.composition_agrees}


def compare_sym(duality):
    """Build ``Sym`` directly and as the ``SdT``-fixed subcategory, and compare.

    A direct morphism ``r: (T r ∘ g ∘ r) -> g`` corresponds to the
    subdivision morphism ``(r, g, T r)``.
    """
    require_strict(duality)
    C = duality.category
    direct = _sym_direct(duality)
    S = sd_category(C)
    fixed = fixed_subcategory(sd_duality(duality, S))
    objects_agree = np.array_equal(direct.forms, fixed.embedding_objects)
    base = max(C.n_morphisms, 1)
    Tm = duality.on_morphisms
    as_chains = np.array([[r, g, Tm[r]] for r, g, _ in direct.pairs], dtype=np.int64).reshape(-1, 3)
    ambient = _lookup(_chain_codes(S.chains, base), _chain_codes(as_chains, base))
    pos = np.full(S.n_morphisms, -1, dtype=np.int64)
    pos[fixed.embedding_morphisms] = np.arange(fixed.n_morphisms)
    corr = pos[ambient]
    morphisms_agree = (direct.n_morphisms == fixed.n_morphisms and bool(np.all(corr >= 0))
                       and len(np.unique(corr)) == len(corr))
    composition_agrees = False
    if objects_agree and morphisms_agree:
        obj_corr = np.arange(direct.n_objects)
        mapped = np.where(direct.comp >= 0, corr[np.where(direct.comp >= 0, direct.comp, 0)], -1)
        composition_agrees = (np.array_equal(mapped, fixed.comp[np.ix_(corr, corr)])
                              and np.array_equal(fixed.source[corr], obj_corr[direct.source])
                              and np.array_equal(fixed.target[corr], obj_corr[direct.target])
                              and np.array_equal(corr[direct.identities], fixed.identities))
    return SymComparison(direct, fixed, bool(objects_agree), bool(morphisms_agree),
                         bool(composition_agrees))


def sym_category(duality):
    """The category of symmetric forms, verified against the ``SdT``-fixed subcategory."""
    comparison = compare_sym(duality)
    if not comparison.ok:
        raise CategoryError("direct and fixed-point constructions of Sym disagree",
                            witness=comparison.to_json())
    return comparison.direct


@dataclass
class SdNerveComparison:
    degree: int
    bijective: list
    commutes: bool
    failure: str = None
    maps: list = field(default=None, repr=False)

    @property
    def ok(self):
        return all(self.bijective) and self.commutes

    def to_json(self):
        return {"degree": self.degree, "bijective": self.bijective, "commutes": self.commutes,
                "failure": self.failure}


def compare_sd_nerve(C, d):
    """Compare ``Sd N C`` with ``N Sd C`` through degree ``d``.

    An ``(2n+1)``-chain ``f_1, ..., f_{2n+1}`` goes to the ``n``-chain of
    subdivision morphisms whose ``k``-th vertex is the composite
    ``f_{2n+1-k} ∘ ... ∘ f_{k+1}`` and whose ``k``-th arrow is
    ``(f_{k+1}, g_{k+1}, f_{2n+1-k})``.  The comparison succeeds when these
    maps are bijections commuting with all faces and degeneracies.
    """
    N = nerve(C, 2 * d + 1)
    SdN = sd(N, d)
    S = sd_category(C)
    NS = nerve(S, d)
    base = max(C.n_morphisms, 1)
    sd_codes = _chain_codes(S.chains, base)
    maps = []
    for n in range(d + 1):
        ch = N.chains[2 * n + 1]
        if n == 0:
            maps.append(ch[:, 0].copy())
            continue
        g = [None] * (n + 1)
        g[n] = ch[:, n]
        for k in range(n - 1, -1, -1):
            g[k] = C.comp[ch[:, 2 * n - k], C.comp[g[k + 1], ch[:, k]]]
        arrows = [_lookup(sd_codes, _chain_codes(
            np.column_stack([ch[:, k], g[k + 1], ch[:, 2 * n - k]]), base)) for k in range(n)]
        maps.append(_lookup(NS.codes[n], _chain_codes(np.column_stack(arrows),
                                                      max(S.n_morphisms, 1))))
    bijective = [len(m) == NS.count(n) and len(np.unique(m)) == len(m)
                 for n, m in enumerate(maps)]
    try:
        SimplicialMap(SdN, NS, maps)
        commutes, failure = True, None
    except (NotSimplicialError, RelationError) as exc:
        commutes, failure = False, str(exc)
    return SdNerveComparison(d, bijective, commutes, failure, maps)


# ---------------------------------------------------------------------------
# the D-construction


@dataclass
class DConstruction:
    duality: StrictDuality
    I: DualityPreservingFunctor
    K: DualityPreservingFunctor
    counit: np.ndarray
    triples: list

    @property
    def category(self):
        return self.duality.category


def d_construction(duality):
    """Strictify a category with duality.

    Objects are triples ``(c, c', f)`` with ``f: c' -> T c`` invertible; a
    morphism ``(c, c', f) -> (d, d', g)`` is a pair ``(r: c -> d, s: d' -> c')``
    with ``f ∘ s = T r ∘ g``.  The duality sends ``(c, c', f)`` to
    ``(c', c, T f ∘ eta_c)`` and ``(r, s)`` to ``(s, r)``.

    Besides the strict duality the result carries ``I``, ``K`` (both duality
    preserving) and the isomorphism ``I K -> Id`` with components ``(id_c, f)``.
    All of these, ``K ∘ I = Id`` and the coherence conditions for the
    equivalence are checked before returning.
    """
    C = duality.category
    To, Tm, eta = duality.on_objects, duality.on_morphisms, duality.eta
    triples = [(c, int(C.source[f]), int(f))
               for c in range(C.n_objects) for f in np.nonzero(C.target == To[c])[0]
               if C.is_iso(f)]
    obj_index = {t: k for k, t in enumerate(triples)}
    mors = []
    for x, (c, c1, f) in enumerate(triples):
        for y, (e, e1, g) in enumerate(triples):
            for r in C.hom(c, e):
                for s in C.hom(e1, c1):
                    if C.comp[f, s] == C.comp[Tm[r], g]:
                        mors.append((x, y, int(r), int(s)))
    mor_index = {m: k for k, m in enumerate(mors)}
    comp_triples = []
    by_source = {}
    for k, (x, y, r, s) in enumerate(mors):
        by_source.setdefault(x, []).append(k)
    for a, (x, y, r1, s1) in enumerate(mors):
        for b in by_source.get(y, []):
            _, z, r2, s2 = mors[b]
            comp_triples.append((b, a, mor_index[(x, z, int(C.comp[r2, r1]),
                                                  int(C.comp[s1, s2]))]))
    obj_names = [f"({C.objects[c]},{C.objects[c1]},{C.morphisms[f]})" for c, c1, f in triples]
    mor_names = [f"({C.morphisms[r]},{C.morphisms[s]})" for _, _, r, s in mors]
    identities = [mor_index[(x, x, int(C.identities[c]), int(C.identities[c1]))]
                  for x, (c, c1, _) in enumerate(triples)]
    D = _from_triples(obj_names, mor_names, [m[0] for m in mors], [m[1] for m in mors],
                      identities, comp_triples, name=f"D({C.name})")
    dual_obj = [obj_index[(c1, c, int(C.comp[Tm[f], eta[c]]))] for c, c1, f in triples]
    dual_mor = [mor_index[(dual_obj[y], dual_obj[x], s, r)] for x, y, r, s in mors]
    TD = StrictDuality(D, dual_obj, dual_mor)

    I_obj = [obj_index[(c, int(To[c]), int(C.identities[To[c]]))] for c in range(C.n_objects)]
    I_mor = [mor_index[(I_obj[C.source[f]], I_obj[C.target[f]], f, int(Tm[f]))]
             for f in range(C.n_morphisms)]
    I = Functor(C, D, I_obj, I_mor)
    iota = [mor_index[(I_obj[To[c]], dual_obj[I_obj[c]], int(C.identities[To[c]]), int(eta[c]))]
            for c in range(C.n_objects)]
    I_dp = DualityPreservingFunctor(duality, TD, I, iota)
    K = Functor(D, C, [t[0] for t in triples], [m[2] for m in mors])
    K_dp = DualityPreservingFunctor(TD, duality, K, [t[2] for t in triples])

    KI = K.after(I)
    if not KI.is_identity():
        raise CategoryError("K ∘ I is not the identity functor")
    IK = I.after(K)
    counit = np.array([mor_index[(IK.on_objects[x], x, int(C.identities[c]), f)]
                       for x, (c, _, f) in enumerate(triples)], dtype=np.int64)
    check_natural(IK, Functor.identity(D), counit, iso=True)
    # coherence of K I = Id with the identity components: kappa_{I c} ∘ K(iota_c) = id
    lhs = C.comp[np.array([t[2] for t in triples])[I_obj], K.on_morphisms[iota]]
    if not np.array_equal(lhs, C.identities[To]):
        raise CategoryError("equivalence coherence fails for K ∘ I = Id")
    # coherence of the counit u: iota_{K x} ∘ I(kappa_x) = T'(u_x) ∘ u_{T' x}
    kappa = np.array([t[2] for t in triples], dtype=np.int64)
    K_obj = K.on_objects
    lhs = D.comp[np.asarray(iota)[K_obj], I.on_morphisms[kappa]]
    rhs = D.comp[TD.on_morphisms[counit], counit[TD.on_objects]]
    bad = np.nonzero(lhs != rhs)[0]
    if bad.size:
        raise CategoryError("equivalence coherence fails for I ∘ K ≅ Id",
                            witness=D.objects[bad[0]])
    return DConstruction(TD, I_dp, K_dp, counit, triples)
