"""The join ``1<C`` (a freely adjoined initial object) and bridge functors."""
from collections import namedtuple

from .errors import InvalidPartition, MalformedJoin
from .fincat import (FinCategory, FunctorData, check_equivalence, full_subcategory,
                     identity_functor)
from .pullback import pseudopullback, verify_pseudopullback_square

JoinedCategory = namedtuple("JoinedCategory", "inner joined zero embed")


def _fresh_label(labels, base="bot"):
    label = base
    while label in labels:
        label += "'"
    return label


def join_one(c):
    """``1<c``: ``c`` plus a new object ``zero`` with exactly one map to every object.

    The new object takes the highest index, the inner morphisms keep theirs,
    then come ``id_zero`` and one map ``zero -> x`` per object.  The result is
    cached on ``c`` so repeated joins share one category.
    """
    cached = getattr(c, "_join", None)
    if cached is not None:
        return cached
    n, m = c.n_objects, c.n_morphisms
    zero = n
    zid = m
    za = [m + 1 + x for x in range(n)]
    src = list(c.src) + [zero] + [zero] * n
    tgt = list(c.tgt) + [zero] + list(range(n))
    zl = _fresh_label(set(c.obj_labels))
    mor_labels = list(c.mor_labels) + [f"id_{zl}"] + [f"{zl}>{c.obj_labels[x]}" for x in range(n)]
    inner = c._compose

    def compose(g, f):
        if f < m:
            return inner(g, f)
        if f == zid:
            return g
        return za[tgt[g]]

    joined = FinCategory(n + 1, src, tgt, list(c.ids) + [zid], compose,
                         obj_labels=list(c.obj_labels) + [zl], mor_labels=mor_labels,
                         name=f"1<{c.name}" if c.name else "1<C")
    embed = FunctorData(c, joined, range(n), range(m), name="embed")
    jc = JoinedCategory(c, joined, zero, embed)
    joined.join_data = jc
    c._join = jc
    return jc


def adjoined_map(jc, x):
    """The unique morphism ``zero -> x`` of a joined category."""
    return jc.inner.n_morphisms + 1 + x if x != jc.zero else jc.joined.ids[jc.zero]


def check_joined(jc):
    """Raise :class:`MalformedJoin` unless ``jc`` satisfies the join invariants."""
    j, z = jc.joined, jc.zero
    for x in j.objects:
        if len(j.hom(z, x)) != 1:
            raise MalformedJoin(f"{len(j.hom(z, x))} maps from zero to {j.obj_labels[x]}")
    if any(m != j.ids[z] for m in j.into(z)):
        raise MalformedJoin("a non-identity morphism lands in zero")
    e = jc.embed
    if set(e.obj_map) != set(j.objects) - {z} or len(set(e.mor_map)) != len(e.mor_map):
        raise MalformedJoin("embedding is not a bijection onto the complement of zero")
    expected = sum(len(j.hom(a, b)) for a in j.objects for b in j.objects if z not in (a, b))
    if len(e.mor_map) != expected:
        raise MalformedJoin("embedding is not full")


def recognize_join(cat):
    """Read ``cat`` as ``1<C``: returns ``(jc, iso)`` with ``iso: cat -> jc.joined``.

    The adjoined object is the last object with exactly one map to every
    object and nothing but its identity coming in.
    """
    jc = getattr(cat, "join_data", None)
    if jc is not None:
        return jc, identity_functor(cat)
    cands = [z for z in cat.objects
             if all(len(cat.hom(z, x)) == 1 for x in cat.objects) and len(cat.into(z)) == 1]
    if not cands:
        raise MalformedJoin("no object is a freely adjoined initial object")
    z = cands[-1]
    rest = [x for x in cat.objects if x != z]
    inner, inc = full_subcategory(cat, rest, name=cat.name)
    jc = join_one(inner)
    pos = {x: i for i, x in enumerate(rest)}
    back = {m: i for i, m in enumerate(inc.mor_map)}
    obj = [jc.zero if x == z else pos[x] for x in cat.objects]
    mor = [adjoined_map(jc, obj[cat.tgt[m]]) if cat.src[m] == z else back[m]
           for m in cat.morphisms]
    return jc, FunctorData(cat, jc.joined, obj, mor, name="iso")


def join_functor(p):
    """``(1<p): 1<dom -> 1<cod``."""
    jd, jc = join_one(p.dom), join_one(p.cod)
    obj = list(p.obj_map) + [jc.zero]
    mor = list(p.mor_map) + [jc.joined.ids[jc.zero]]
    mor += [adjoined_map(jc, p.obj_map[x]) for x in p.dom.objects]
    return FunctorData(jd.joined, jc.joined, obj, mor, name=f"1<{p.name or 'p'}")


class BridgeDecomposition(namedtuple("BridgeDecomposition", "a_minus a_plus f_plus")):
    """``a_minus`` goes to zero, ``f_plus`` is the functor on the full subcategory ``a_plus``."""

    def __eq__(self, other):
        return (isinstance(other, BridgeDecomposition)
                and tuple(self.a_minus) == tuple(other.a_minus)
                and tuple(self.a_plus) == tuple(other.a_plus)
                and self.f_plus.cod is other.f_plus.cod
                and self.f_plus.obj_map == other.f_plus.obj_map
                and self.f_plus.mor_map == other.f_plus.mor_map)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((tuple(self.a_minus), tuple(self.a_plus), self.f_plus.obj_map))


def _joined_of(cat):
    jc = getattr(cat, "join_data", None)
    if jc is None:
        raise MalformedJoin("codomain is not a joined category")
    check_joined(jc)
    return jc


def decompose_bridge(f, verify_square=True, budget=None):
    """Split ``f: A -> 1<B`` into ``A_-``, ``A_+`` and ``F_+: A_+ -> B``.

    With ``verify_square`` the square ``A_+ -> A -> 1<B <- B`` is checked to
    be a pseudopullback.
    """
    jc = _joined_of(f.cod)
    A = f.dom
    a_minus = tuple(a for a in A.objects if f.obj_map[a] == jc.zero)
    a_plus = tuple(a for a in A.objects if f.obj_map[a] != jc.zero)
    ms = set(a_minus)
    for a in a_plus:
        for m in A.out_of(a):
            if A.tgt[m] in ms:
                raise InvalidPartition(f"{A.describe(m)} runs from A+ to A-")
    sub, inc = full_subcategory(A, a_plus, name="A+")
    f_plus = FunctorData(sub, jc.inner, [f.obj_map[a] for a in a_plus],
                         [f.mor_map[m] for m in inc.mor_map], name="F+")
    d = BridgeDecomposition(a_minus, a_plus, f_plus)
    if verify_square:
        if not verify_pseudopullback_square([inc, f_plus], [f, jc.embed], budget=budget):
            raise AssertionError("bridge square is not a pseudopullback")
    return d


def assemble_bridge(ambient, d):
    """The unique functor ``ambient -> 1<B`` with decomposition ``d``."""
    jc = join_one(d.f_plus.cod)
    a_minus, a_plus = set(d.a_minus), list(d.a_plus)
    if a_minus & set(a_plus) or a_minus | set(a_plus) != set(ambient.objects):
        raise InvalidPartition("A- and A+ do not partition the objects")
    pos = {a: i for i, a in enumerate(a_plus)}
    # full_subcategory numbers its morphisms in ambient order
    inner = sorted(x for a in a_plus for b in a_plus for x in ambient.hom(a, b))
    sub_index = {x: i for i, x in enumerate(inner)}
    obj = [jc.zero if a in a_minus else d.f_plus.obj_map[pos[a]] for a in ambient.objects]
    mor = []
    for m in ambient.morphisms:
        s, t = ambient.src[m], ambient.tgt[m]
        if s in a_minus and t in a_minus:
            mor.append(jc.joined.ids[jc.zero])
        elif s in a_minus:
            mor.append(adjoined_map(jc, obj[t]))
        elif t in a_minus:
            raise InvalidPartition(f"{ambient.describe(m)} runs from A+ to A-")
        else:
            mor.append(d.f_plus.mor_map[sub_index[m]])
    return FunctorData(ambient, jc.joined, obj, mor, name="bridge")


def check_bimodule(ambient, d):
    """Hom-sets ``A(a-, a+)`` are closed under composition on both sides."""
    a_minus, a_plus = set(d.a_minus), set(d.a_plus)
    for m in ambient.morphisms:
        if ambient.src[m] not in a_minus or ambient.tgt[m] not in a_plus:
            continue
        for g in ambient.out_of(ambient.tgt[m]):
            if ambient.tgt[ambient.compose(g, m)] not in a_plus:
                return False
        for f in ambient.into(ambient.src[m]):
            if ambient.src[f] not in a_minus:
                return False
    return True


JoinVerdict = namedtuple("JoinVerdict", "holds witness left right")


def check_join_preserves_pseudopullback(family, budget=None):
    """Compare ``1<(pseudopullback)`` with the pseudopullback of the joined family."""
    left = join_one(pseudopullback(family, budget).total).joined
    right = pseudopullback([join_functor(p) for p in family], budget).total
    w = check_equivalence(left, right, budget)
    return JoinVerdict(w is not None, w, left, right)
