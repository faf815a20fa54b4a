"""Finite categories, functors and natural transformations.

A :class:`FinCategory` is strict and skeletal-by-index: objects are the
integers ``0 .. n_objects - 1`` and morphisms the integers
``0 .. n_morphisms - 1``.  Labels ride along for reporting only.

Composition is stored in one of two ways:

* an explicit table ``{(g, f): g∘f}`` holding exactly the composable pairs,
  used for categories read from files or built by hand;
* a *keyed* rule for concrete categories, where every morphism carries a
  hashable key (a function tuple, a tuple of component morphisms, ...) and
  composites are found by composing keys and looking the result up.

Both present the same total :meth:`FinCategory.compose` and the same
read-only :attr:`FinCategory.composition` mapping.
"""
from collections import namedtuple
from collections.abc import Mapping


import numpy as np

from .budget import Counter, resolve
from .errors import BudgetExceeded, InvalidCategory

# categories up to this many morphisms get a cached dense composition table
DENSE_LIMIT = 3000

ObjId = int
MorId = int

Violation = namedtuple("Violation", "kind morphisms message")


class _CompositionView(Mapping):
    """Mapping view ``(g, f) -> g∘f`` over the composable pairs of a category."""

    def __init__(self, cat):
        self._cat = cat

    def __getitem__(self, key):
        g, f = key
        if not self._cat.composable(g, f):
            raise KeyError(key)
        return self._cat._compose(g, f)

    def __iter__(self):
        c = self._cat
        for f in range(c.n_morphisms):
            for g in c.out_of(c.tgt[f]):
                yield (g, f)

    def __len__(self):
        c = self._cat
        return sum(len(c.out_of(c.tgt[f])) for f in range(c.n_morphisms))


class FinCategory:
    """An explicit finite category.

    Use :meth:`from_table` or :meth:`concrete` rather than calling the
    constructor directly.
    """

    def __init__(self, n_objects, src, tgt, identities, compose,
                 obj_labels=None, mor_labels=None, table=None, keys=None,
                 name=None):
        self.n_objects = int(n_objects)
        self.src = tuple(int(x) for x in src)
        self.tgt = tuple(int(x) for x in tgt)
        self.ids = tuple(int(x) for x in identities)
        self.n_morphisms = len(self.src)
        if len(self.tgt) != self.n_morphisms:
            raise InvalidCategory("src and tgt lists differ in length")
        if len(self.ids) != self.n_objects:
            raise InvalidCategory("one identity per object is required")
        for a, i in enumerate(self.ids):
            if not 0 <= i < self.n_morphisms:
                raise InvalidCategory(f"identity of object {a} is not a morphism")
        for m in range(self.n_morphisms):
            if not (0 <= self.src[m] < self.n_objects and 0 <= self.tgt[m] < self.n_objects):
                raise InvalidCategory(f"morphism {m} has an endpoint outside the object range")
        self._compose = compose
        self.table = table
        self.keys = keys
        self.name = name
        self.obj_labels = tuple(obj_labels) if obj_labels is not None else tuple(
            str(a) for a in range(self.n_objects))
        self.mor_labels = tuple(mor_labels) if mor_labels is not None else tuple(
            f"m{i}" for i in range(self.n_morphisms))
        homs = {}
        out = [[] for _ in range(self.n_objects)]
        inc = [[] for _ in range(self.n_objects)]
        for m in range(self.n_morphisms):
            homs.setdefault((self.src[m], self.tgt[m]), []).append(m)
            out[self.src[m]].append(m)
            inc[self.tgt[m]].append(m)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._out = tuple(tuple(v) for v in out)
        self._in = tuple(tuple(v) for v in inc)
        counts = np.zeros((self.n_objects, self.n_objects), dtype=np.int64)
        for (a, b), ms in self._homs.items():
            counts[a, b] = len(ms)
        self.hom_counts = counts
        self._obj_index = None
        self._mor_index = None
        self._compose_vec = None
        self._out_arrays = None
        self._dense = None

    # construction ---------------------------------------------------------

    @classmethod
    def from_table(cls, n_objects, morphisms, identities, table,
                   obj_labels=None, name=None):
        """Build from ``morphisms = [(src, tgt, label), ...]`` and an explicit table."""
        src = [m[0] for m in morphisms]
        tgt = [m[1] for m in morphisms]
        labels = [m[2] if len(m) > 2 and m[2] is not None else f"m{i}"
                  for i, m in enumerate(morphisms)]
        table = {(int(g), int(f)): int(h) for (g, f), h in table.items()}

        def compose(g, f):
            return table[(g, f)]

        return cls(n_objects, src, tgt, identities, compose, obj_labels=obj_labels,
                   mor_labels=labels, table=table, name=name)

    @classmethod
    def concrete(cls, n_objects, morphisms, identities, compose_keys,
                 obj_labels=None, name=None):
        """Build a concrete category.

        ``morphisms`` is a list of ``(src, tgt, key, label)`` with keys unique
        within each hom-set; ``compose_keys(kg, kf)`` returns the key of
        ``g∘f``.
        """
        src = [m[0] for m in morphisms]
        tgt = [m[1] for m in morphisms]
        keys = [m[2] for m in morphisms]
        labels = [m[3] if len(m) > 3 and m[3] is not None else f"m{i}"
                  for i, m in enumerate(morphisms)]
        lookup = {}
        for i, (a, b, k) in enumerate(zip(src, tgt, keys)):
            if (a, b, k) in lookup:
                raise InvalidCategory(f"duplicate morphism key {k!r} in hom({a}, {b})")
            lookup[(a, b, k)] = i

        def compose(g, f):
            return lookup[(src[f], tgt[g], compose_keys(keys[g], keys[f]))]

        cat = cls(n_objects, src, tgt, identities, compose, obj_labels=obj_labels,
                  mor_labels=labels, keys=tuple(keys), name=name)
        cat.lookup = lookup
        return cat

    def composable(self, g, f):
        return self.tgt[f] == self.src[g]

    def compose(self, g, f):
        """Return ``g∘f``; raises ``ValueError`` when ``tgt(f) != src(g)``."""
        if self.tgt[f] != self.src[g]:
            raise ValueError(
                f"cannot compose {self.mor_labels[g]} after {self.mor_labels[f]}")
        return self._compose(g, f)

    def compose_array(self, gs, fs):
        """Vectorised ``g∘f`` over equal-length arrays of composable pairs."""
        gs = np.asarray(gs, dtype=np.int64)
        fs = np.asarray(fs, dtype=np.int64)
        if self.n_morphisms <= DENSE_LIMIT:
            return self.dense_table()[gs, fs].astype(np.int64)
        return self._compose_pairs(gs, fs)

    def compose_path(self, *ms):
        """Compose right-to-left: ``compose_path(h, g, f) == h∘g∘f``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    @property
    def composition(self):
        return _CompositionView(self)

    def identity(self, a):
        return self.ids[a]

    def is_identity(self, m):
        return self.ids[self.src[m]] == m

    def hom(self, a, b):
        return self._homs.get((a, b), ())

    def out_of(self, a):
        return self._out[a]

    def out_array(self, a):
        if self._out_arrays is None:
            self._out_arrays = [np.asarray(v, dtype=np.int64) for v in self._out]
        return self._out_arrays[a]

    def into(self, b):
        return self._in[b]

    @property
    def objects(self):
        return range(self.n_objects)

    @property
    def morphisms(self):
        return range(self.n_morphisms)

    def object_index(self, label):
        if self._obj_index is None:
            self._obj_index = {lab: i for i, lab in enumerate(self.obj_labels)}
        return self._obj_index[label]

    def morphism_index(self, label):
        if self._mor_index is None:
            self._mor_index = {lab: i for i, lab in enumerate(self.mor_labels)}
        return self._mor_index[label]

    def describe(self, m):
        return (f"{self.mor_labels[m]}: {self.obj_labels[self.src[m]]}"
                f" -> {self.obj_labels[self.tgt[m]]}")

    def to_explicit(self):
        """A copy of this category carrying an explicit composition table."""
        table = {pair: self._compose(*pair) for pair in self.composition}
        morphisms = [(self.src[m], self.tgt[m], self.mor_labels[m])
                     for m in self.morphisms]
        return FinCategory.from_table(self.n_objects, morphisms, self.ids, table,
                                      obj_labels=self.obj_labels, name=self.name)

    def dense_table(self):
        """Composition as an ``(m, m)`` int array with -1 on non-composable pairs (cached).

        Only meant for trusted categories; a table with missing composites
        should go through :func:`validate_category` instead.
        """
        if self._dense is None:
            m = self.n_morphisms
            t = np.full((m, m), -1, dtype=np.int32)
            fs = [np.full(len(self._out[self.tgt[f]]), f, dtype=np.int64) for f in self.morphisms]
            gs = [self.out_array(self.tgt[f]) for f in self.morphisms]
            if fs:
                fs, gs = np.concatenate(fs), np.concatenate(gs)
                t[gs, fs] = self._compose_pairs(gs, fs)
            self._dense = t
        return self._dense

    def _compose_pairs(self, gs, fs):
        if self._compose_vec is not None:
            return self._compose_vec(gs, fs)
        c = self._compose
        return np.fromiter((c(int(g), int(f)) for g, f in zip(gs, fs)), dtype=np.int64,
                           count=len(gs))

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<FinCategory{tag}: {self.n_objects} objects, {self.n_morphisms} morphisms>"


class CodeIndex:
    """Vectorised lookup of morphisms by an integer code."""

    def __init__(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        self.order = np.argsort(codes, kind="stable")
        self.sorted = codes[self.order]

    def find(self, codes):
        i = np.searchsorted(self.sorted, codes)
        i = np.minimum(i, len(self.sorted) - 1)
        if not np.array_equal(self.sorted[i], codes):
            raise KeyError("composite code not present")
        return self.order[i]


# validation -----------------------------------------------------------------

def validate_category(c, budget=None):
    """List every violated category law; empty iff ``c`` is a category.

    Violations name the offending morphisms.  The check is exhaustive over
    composable triples, so the total triple count is capped by
    ``budget.search_nodes`` (raises :class:`BudgetExceeded`).
    """
    budget = resolve(budget)
    out = []
    for a in c.objects:
        i = c.ids[a]
        if c.src[i] != a or c.tgt[i] != a:
            out.append(Violation("identity endpoints", (i,),
                                 f"identity of {c.obj_labels[a]} is {c.describe(i)}"))
    if out:
        return out
    if c.table is not None:
        for (g, f) in c.table:
            if not (0 <= g < c.n_morphisms and 0 <= f < c.n_morphisms):
                out.append(Violation("unknown morphism", (g, f),
                                     f"table entry ({g}, {f}) names no morphism"))
            elif not c.composable(g, f):
                out.append(Violation("composition defined on non-composable pair", (g, f),
                                     f"{c.describe(g)} after {c.describe(f)} is defined"))
    comp = {}
    for f in c.morphisms:
        for g in c.out_of(c.tgt[f]):
            try:
                h = c._compose(g, f)
            except KeyError:
                out.append(Violation("missing composite", (g, f),
                                     f"{c.mor_labels[g]}∘{c.mor_labels[f]} undefined"))
                continue
            if not (0 <= h < c.n_morphisms) or c.src[h] != c.src[f] or c.tgt[h] != c.tgt[g]:
                out.append(Violation("composite endpoints", (g, f, h),
                                     f"{c.mor_labels[g]}∘{c.mor_labels[f]} = {h} has wrong endpoints"))
                continue
            comp[(g, f)] = h
    for f in c.morphisms:
        a, b = c.src[f], c.tgt[f]
        if comp.get((c.ids[b], f), f) != f:
            out.append(Violation("identity law fails", (c.ids[b], f, comp[(c.ids[b], f)]),
                                 f"id_{c.obj_labels[b]}∘{c.mor_labels[f]} != {c.mor_labels[f]}"))
        if comp.get((f, c.ids[a]), f) != f:
            out.append(Violation("identity law fails", (f, c.ids[a], comp[(f, c.ids[a])]),
                                 f"{c.mor_labels[f]}∘id_{c.obj_labels[a]} != {c.mor_labels[f]}"))
    h = c.hom_counts
    ones = np.ones(c.n_objects, dtype=np.int64)
    triples = int(ones @ h @ h @ h @ ones)
    if triples > budget.search_nodes * 50:
        raise BudgetExceeded("associativity triples", budget.search_nodes * 50, triples)
    out.extend(_check_associativity(c, comp))
    return out


def _check_associativity(c, comp):
    bad = []
    if c.n_morphisms <= 2500:
        m = c.n_morphisms
        t = np.full((m, m), -1, dtype=np.int64)
        for (g, f), k in comp.items():
            t[g, f] = k
        for f in c.morphisms:
            b = c.tgt[f]
            for cobj in c.objects:
                gs = np.array(c.hom(b, cobj), dtype=np.int64)
                hs = np.array(c.out_of(cobj), dtype=np.int64)
                if gs.size == 0 or hs.size == 0:
                    continue
                gf = t[gs, f]
                hg = t[np.ix_(hs, gs)]
                left = np.where(gf[None, :] >= 0, t[hs[:, None], np.maximum(gf, 0)[None, :]], -2)
                right = np.where(hg >= 0, t[np.maximum(hg, 0), f], -3)
                valid = (gf[None, :] >= 0) & (hg >= 0)
                mism = np.argwhere(valid & (left != right))
                for i, j in mism[:10]:
                    hh, gg = int(hs[i]), int(gs[j])
                    bad.append(Violation("associativity fails", (hh, gg, f),
                                         f"({c.mor_labels[hh]}∘{c.mor_labels[gg]})∘{c.mor_labels[f]}"
                                         f" != {c.mor_labels[hh]}∘({c.mor_labels[gg]}∘{c.mor_labels[f]})"))
        return bad
    for (g, f), gf in comp.items():
        for hh in c.out_of(c.tgt[g]):
            hg = comp.get((hh, g))
            left = comp.get((hh, gf))
            if hg is None or left is None:
                continue
            right = comp.get((hg, f))
            if right is not None and left != right:
                bad.append(Violation("associativity fails", (hh, g, f),
                                     f"associativity fails on {hh}, {g}, {f}"))
    return bad


def hom_set(c, a, b):
    """Morphisms ``a -> b`` in index order."""
    return list(c.hom(a, b))


def is_isomorphism(c, f):
    """Return ``(True, inverse)`` if ``f`` is invertible, else ``(False, None)``."""
    a, b = c.src[f], c.tgt[f]
    ia, ib = c.ids[a], c.ids[b]
    for g in c.hom(b, a):
        if c._compose(g, f) == ia and c._compose(f, g) == ib:
            return True, g
    return False, None


def inverse(c, f):
    ok, g = is_isomorphism(c, f)
    if not ok:
        raise ValueError(f"{c.describe(f)} is not an isomorphism")
    return g


def isomorphisms(c, a, b):
    return [f for f in c.hom(a, b) if is_isomorphism(c, f)[0]]


def find_initial(c):
    """Lowest-index object with exactly one morphism to every object, or ``None``."""
    if c.n_objects == 0:
        return None
    rows = np.all(c.hom_counts == 1, axis=1)
    hits = np.flatnonzero(rows)
    return int(hits[0]) if hits.size else None


def find_terminal(c):
    if c.n_objects == 0:
        return None
    cols = np.all(c.hom_counts == 1, axis=0)
    hits = np.flatnonzero(cols)
    return int(hits[0]) if hits.size else None


def iso_classes(c):
    """Partition of the objects into isomorphism classes, each sorted, ordered by minimum."""
    parent = list(range(c.n_objects))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in c.objects:
        for b in range(a + 1, c.n_objects):
            if find(a) == find(b):
                continue
            if c.hom_counts[a, b] and c.hom_counts[b, a]:
                if any(is_isomorphism(c, f)[0] for f in c.hom(a, b)):
                    parent[find(b)] = find(a)
    groups = {}
    for a in c.objects:
        groups.setdefault(find(a), []).append(a)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def full_subcategory(c, objects, name=None):
    """Full subcategory on ``objects`` (in the given order) with its inclusion functor."""
    objects = list(objects)
    pos = {a: i for i, a in enumerate(objects)}
    mors = []
    for a in objects:
        for b in objects:
            mors.extend(c.hom(a, b))
    mors.sort()
    back = {m: i for i, m in enumerate(mors)}
    src = [pos[c.src[m]] for m in mors]
    tgt = [pos[c.tgt[m]] for m in mors]
    ids = [back[c.ids[a]] for a in objects]

    def compose(g, f):
        return back[c._compose(mors[g], mors[f])]

    sub = FinCategory(len(objects), src, tgt, ids, compose,
                      obj_labels=[c.obj_labels[a] for a in objects],
                      mor_labels=[c.mor_labels[m] for m in mors],
                      name=name or (f"full({c.name})" if c.name else None))
    inc = FunctorData(sub, c, objects, mors)
    return sub, inc


# functors --------------------------------------------------------------------

class FunctorData:
    """A functor between finite categories given by object and morphism maps."""

    def __init__(self, dom, cod, obj_map, mor_map, name=None):
        self.dom = dom
        self.cod = cod
        self.obj_map = tuple(int(x) for x in obj_map)
        self.mor_map = tuple(int(x) for x in mor_map)
        self.name = name
        if len(self.obj_map) != dom.n_objects or len(self.mor_map) != dom.n_morphisms:
            raise InvalidCategory("functor maps do not cover the domain")

    def ob(self, a):
        return self.obj_map[a]

    @property
    def mor_array(self):
        if getattr(self, "_mor_array", None) is None:
            self._mor_array = np.asarray(self.mor_map, dtype=np.int64)
        return self._mor_array

    def mor(self, f):
        return self.mor_map[f]

    def __eq__(self, other):
        return (isinstance(other, FunctorData) and self.dom is other.dom
                and self.cod is other.cod and self.obj_map == other.obj_map
                and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash((id(self.dom), id(self.cod), self.obj_map, self.mor_map))

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<FunctorData{tag}: {self.dom!r} -> {self.cod!r}>"


def identity_functor(c):
    return FunctorData(c, c, range(c.n_objects), range(c.n_morphisms), name="id")


def constant_functor(c, d, b):
    return FunctorData(c, d, [b] * c.n_objects, [d.ids[b]] * c.n_morphisms,
                       name=f"const {d.obj_labels[b]}")


def compose_functors(g, f):
    """``g∘f``."""
    if f.cod is not g.dom:
        raise ValueError("functors are not composable")
    return FunctorData(f.dom, g.cod, [g.obj_map[x] for x in f.obj_map],
                       [g.mor_map[m] for m in f.mor_map])


def validate_functor(F):
    """List every violated functor law; empty iff ``F`` is a functor."""
    dom, cod = F.dom, F.cod
    out = []
    for a in dom.objects:
        if not 0 <= F.obj_map[a] < cod.n_objects:
            out.append(Violation("object out of range", (a,), f"{dom.obj_labels[a]} maps outside"))
    for m in dom.morphisms:
        if not 0 <= F.mor_map[m] < cod.n_morphisms:
            out.append(Violation("morphism out of range", (m,), f"{dom.mor_labels[m]} maps outside"))
    if out:
        return out
    for m in dom.morphisms:
        fm = F.mor_map[m]
        if cod.src[fm] != F.obj_map[dom.src[m]] or cod.tgt[fm] != F.obj_map[dom.tgt[m]]:
            out.append(Violation("endpoints not preserved", (m, fm),
                                 f"{dom.describe(m)} maps to {cod.describe(fm)}"))
    for a in dom.objects:
        if F.mor_map[dom.ids[a]] != cod.ids[F.obj_map[a]]:
            out.append(Violation("identity not preserved", (dom.ids[a],),
                                 f"identity of {dom.obj_labels[a]} not sent to an identity"))
    if out:
        return out
    for f in dom.morphisms:
        for g in dom.out_of(dom.tgt[f]):
            gf = dom._compose(g, f)
            if F.mor_map[gf] != cod._compose(F.mor_map[g], F.mor_map[f]):
                out.append(Violation("composition not preserved", (g, f, gf),
                                     f"F({dom.mor_labels[g]}∘{dom.mor_labels[f]})"
                                     f" != F({dom.mor_labels[g]})∘F({dom.mor_labels[f]})"))
    return out


def is_full_and_faithful(F):
    for a in F.dom.objects:
        for b in F.dom.objects:
            image = [F.mor_map[m] for m in F.dom.hom(a, b)]
            target = F.cod.hom(F.obj_map[a], F.obj_map[b])
            if len(image) != len(target) or len(set(image)) != len(image):
                return False
    return True


def is_essentially_surjective(F):
    return all(_iso_from_image(F, d) is not None for d in F.cod.objects)


def _iso_from_image(F, d):
    """Lowest ``(c, iso)`` with ``iso: F(c) -> d``, or ``None``."""
    cod = F.cod
    for c in F.dom.objects:
        for f in cod.hom(F.obj_map[c], d):
            if is_isomorphism(cod, f)[0]:
                return c, f
    return None


# natural transformations -----------------------------------------------------

class NatTrans:
    """Natural transformation ``src => tgt`` with one component per domain object."""

    def __init__(self, src, tgt, components, name=None):
        if src.dom is not tgt.dom or src.cod is not tgt.cod:
            raise InvalidCategory("natural transformation between non-parallel functors")
        self.src = src
        self.tgt = tgt
        self.components = tuple(int(x) for x in components)
        self.name = name

    def __getitem__(self, a):
        return self.components[a]


def validate_nat_trans(t):
    F, G = t.src, t.tgt
    dom, cod = F.dom, F.cod
    out = []
    for a in dom.objects:
        m = t.components[a]
        if cod.src[m] != F.obj_map[a] or cod.tgt[m] != G.obj_map[a]:
            out.append(Violation("component endpoints", (a, m),
                                 f"component at {dom.obj_labels[a]} is {cod.describe(m)}"))
    if out:
        return out
    for f in dom.morphisms:
        a, b = dom.src[f], dom.tgt[f]
        lhs = cod._compose(G.mor_map[f], t.components[a])
        rhs = cod._compose(t.components[b], F.mor_map[f])
        if lhs != rhs:
            out.append(Violation("naturality fails", (f,),
                                 f"square at {dom.mor_labels[f]} does not commute"))
    return out


def is_natural_isomorphism(t):
    return not validate_nat_trans(t) and all(
        is_isomorphism(t.src.cod, m)[0] for m in t.components)


# equivalences ----------------------------------------------------------------

class EquivalenceWitness(namedtuple("EquivalenceWitness", "forward backward unit counit")):
    """``forward: C -> D``, ``backward: D -> C``, ``unit: id_C ≅ GF``, ``counit: FG ≅ id_D``."""


def equivalence_from_functor(F):
    """Quasi-inverse and natural isomorphisms for ``F``, or ``None`` if ``F`` is not an equivalence."""
    C, D = F.dom, F.cod
    if not is_full_and_faithful(F):
        return None
    choice = []
    for d in D.objects:
        hit = _iso_from_image(F, d)
        if hit is None:
            return None
        choice.append(hit)

    def lift(a, b, target):
        for m in C.hom(a, b):
            if F.mor_map[m] == target:
                return m
        raise AssertionError("full and faithful functor failed to lift")

    G_obj = [c for c, _ in choice]
    G_mor = []
    for g in D.morphisms:
        d, d2 = D.src[g], D.tgt[g]
        phi, phi2 = choice[d][1], choice[d2][1]
        target = D.compose_path(inverse(D, phi2), g, phi)
        G_mor.append(lift(G_obj[d], G_obj[d2], target))
    G = FunctorData(D, C, G_obj, G_mor, name="quasi-inverse")
    GF = compose_functors(G, F)
    FG = compose_functors(F, G)
    unit = []
    for c in C.objects:
        phi = choice[F.obj_map[c]][1]
        unit.append(lift(c, GF.obj_map[c], inverse(D, phi)))
    counit = [choice[d][1] for d in D.objects]
    w = EquivalenceWitness(F, G, NatTrans(identity_functor(C), GF, unit, name="unit"),
                           NatTrans(FG, identity_functor(D), counit, name="counit"))
    assert verify_equivalence(w)
    return w


def verify_equivalence(w):
    return (not validate_functor(w.forward) and not validate_functor(w.backward)
            and is_natural_isomorphism(w.unit) and is_natural_isomorphism(w.counit))


def skeleton(c):
    """Full subcategory on the lowest-index representative of each iso class.

    Returns ``(skel, inclusion, reps, retraction)`` where ``retraction`` is a
    functor ``c -> skel`` that is a quasi-inverse of the inclusion.
    """
    classes = iso_classes(c)
    reps = [g[0] for g in classes]
    skel, inc = full_subcategory(c, reps)
    rep_of = {}
    for i, g in enumerate(classes):
        for a in g:
            rep_of[a] = i
    phi = []
    for a in c.objects:
        r = reps[rep_of[a]]
        phi.append(isomorphisms(c, a, r)[0])
    back = {m: i for i, m in enumerate(inc.mor_map)}
    mor = []
    for f in c.morphisms:
        a, b = c.src[f], c.tgt[f]
        conj = c.compose_path(phi[b], f, inverse(c, phi[a]))
        mor.append(back[conj])
    retract = FunctorData(c, skel, [rep_of[a] for a in c.objects], mor, name="retraction")
    return skel, inc, reps, retract


def find_isomorphism(c, d, budget=None):
    """Search for an isomorphism of categories ``c -> d``; returns a functor or ``None``."""
    budget = resolve(budget)
    if c.n_objects != d.n_objects or c.n_morphisms != d.n_morphisms:
        return None
    if sorted(c.hom_counts.ravel()) != sorted(d.hom_counts.ravel()):
        return None
    nodes = Counter("isomorphism search nodes", budget.search_nodes)
    hc, hd = c.hom_counts, d.hom_counts
    for perm in _object_bijections(hc, hd, nodes):
        F = _morphism_bijection(c, d, perm, nodes)
        if F is not None:
            return F
    return None


def _object_bijections(hc, hd, nodes):
    n = hc.shape[0]
    assign = [-1] * n
    used = [False] * n

    def rec(i):
        if i == n:
            yield list(assign)
            return
        for t in range(n):
            if used[t] or hc[i, i] != hd[t, t]:
                continue
            nodes.tick()
            ok = all(hc[i, j] == hd[t, assign[j]] and hc[j, i] == hd[assign[j], t]
                     for j in range(i))
            if not ok:
                continue
            assign[i] = t
            used[t] = True
            yield from rec(i + 1)
            used[t] = False
            assign[i] = -1

    yield from rec(0)


def _morphism_bijection(c, d, perm, nodes):
    m = c.n_morphisms
    image = [-1] * m
    for a in c.objects:
        image[c.ids[a]] = d.ids[perm[a]]
    order = [f for f in c.morphisms if image[f] < 0]
    used = set(image[f] for f in c.morphisms if image[f] >= 0)

    def check_composites():
        for f in c.morphisms:
            for g in c.out_of(c.tgt[f]):
                if image[c._compose(g, f)] != d._compose(image[g], image[f]):
                    return False
        return True

    def rec(i):
        if i == len(order):
            return check_composites()
        f = order[i]
        for t in d.hom(perm[c.src[f]], perm[c.tgt[f]]):
            if t in used:
                continue
            nodes.tick()
            image[f] = t
            used.add(t)
            if _all_defined_composites_ok(c, d, image, f) and rec(i + 1):
                return True
            used.discard(t)
            image[f] = -1
        return False

    if rec(0):
        return FunctorData(c, d, perm, image, name="isomorphism")
    return None


def _all_defined_composites_ok(c, d, image, f):
    ff = image[f]
    for g in c.out_of(c.tgt[f]):
        if image[g] < 0:
            continue
        gf = c._compose(g, f)
        if image[gf] >= 0 and d._compose(image[g], ff) != image[gf]:
            return False
    for g in c.into(c.src[f]):
        if image[g] < 0:
            continue
        fg = c._compose(f, g)
        if image[fg] >= 0 and d._compose(ff, image[g]) != image[fg]:
            return False
    return True


def check_equivalence(c, d, budget=None):
    """Exhaustive search for an equivalence ``c ≃ d``.

    Both categories are reduced to skeleta, an isomorphism of skeleta is
    searched for, and the result is expanded into a full witness.  Skeleton
    sizes are capped by ``budget.equiv_objects`` / ``budget.equiv_morphisms``.
    """
    budget = resolve(budget)
    for x in (c, d):
        if x.n_objects > budget.equiv_raw_objects:
            raise BudgetExceeded("equivalence raw objects", budget.equiv_raw_objects, x.n_objects)
    sc, inc_c, _, ret_c = skeleton(c)
    sd, inc_d, _, _ = skeleton(d)
    for s in (sc, sd):
        if s.n_objects > budget.equiv_objects:
            raise BudgetExceeded("equivalence skeleton objects", budget.equiv_objects, s.n_objects)
        if s.n_morphisms > budget.equiv_morphisms:
            raise BudgetExceeded("equivalence skeleton morphisms", budget.equiv_morphisms,
                                 s.n_morphisms)
    iso = find_isomorphism(sc, sd, budget)
    if iso is None:
        return None
    F = compose_functors(inc_d, compose_functors(iso, ret_c))
    F.name = "equivalence"
    return equivalence_from_functor(F)


def enumerate_functors(c, d, limit=None, budget=None):
    """Yield every functor ``c -> d`` (object maps in lexicographic order)."""
    budget = resolve(budget)
    nodes = Counter("functor search nodes", budget.search_nodes)
    n = c.n_objects
    obj = [-1] * n
    mor = [-1] * c.n_morphisms
    count = 0
    order = [f for f in c.morphisms if not c.is_identity(f)]

    def assign_mor(i):
        if i == len(order):
            yield FunctorData(c, d, obj, mor)
            return
        f = order[i]
        for t in d.hom(obj[c.src[f]], obj[c.tgt[f]]):
            nodes.tick()
            mor[f] = t
            if _all_defined_composites_ok(c, d, mor, f):
                yield from assign_mor(i + 1)
            mor[f] = -1

    def assign_obj(a):
        if a == n:
            for x in c.objects:
                mor[c.ids[x]] = d.ids[obj[x]]
            yield from assign_mor(0)
            for f in order:
                mor[f] = -1
            return
        for t in d.objects:
            nodes.tick()
            obj[a] = t
            yield from assign_obj(a + 1)
        obj[a] = -1

    for F in assign_obj(0):
        if not validate_functor(F):
            yield F
            count += 1
            if limit is not None and count >= limit:
                return
