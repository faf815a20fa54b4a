"""Colimits in finite categories by cocone enumeration.

A colimit is found the honest way: enumerate every cocone over the diagram,
then look for one through which each cocone factors exactly once.  Because
the comparison ``Hom(apex, y) -> Cocones(y)`` must be a bijection for every
``y``, hom-set sizes give a cheap filter before the injectivity check.
"""
from collections import namedtuple
from functools import lru_cache

from .budget import Counter, resolve
from .errors import MalformedCrossing, NoColimit
from .fincat import FinCategory, FunctorData, is_isomorphism, validate_functor
from .generators import chain_shape

CoconeData = namedtuple("CoconeData", "apex legs")
Pushout = namedtuple("Pushout", "apex leg_f leg_g")
WidePushout = namedtuple("WidePushout", "apex legs")


class DiagramData:
    """A diagram ``functor: shape -> target``."""

    def __init__(self, functor):
        self.functor = functor

    @property
    def shape(self):
        return self.functor.dom

    @property
    def target(self):
        return self.functor.cod

    def validate(self):
        return validate_functor(self.functor)


def is_cocone(d, cocone):
    F, sh, c = d.functor, d.shape, d.target
    if len(cocone.legs) != sh.n_objects:
        return False
    for s in sh.objects:
        leg = cocone.legs[s]
        if c.src[leg] != F.obj_map[s] or c.tgt[leg] != cocone.apex:
            return False
    for m in sh.morphisms:
        if c.compose(cocone.legs[sh.tgt[m]], F.mor_map[m]) != cocone.legs[sh.src[m]]:
            return False
    return True


def _assignment_order(sh):
    def outdeg(s):
        return sum(1 for m in sh.out_of(s) if sh.tgt[m] != s)
    return sorted(sh.objects, key=lambda s: (outdeg(s), s))


def enumerate_cocones(d, apexes=None, budget=None, counter=None):
    """All cocones over ``d``, apexes in index order, legs in lexicographic order.

    ``apexes`` restricts the apex range.  Raises :class:`BudgetExceeded` past
    ``budget.cocones`` candidate assignments.
    """
    budget = resolve(budget)
    counter = counter or Counter("cocone enumeration", budget.cocones)
    F, sh, c = d.functor, d.shape, d.target
    order = _assignment_order(sh)
    rank = {s: i for i, s in enumerate(order)}
    # constraints checked when the later endpoint of a shape morphism is assigned
    checks = [[] for _ in order]
    forcing = [None] * len(order)
    for m in sh.morphisms:
        s, t = sh.src[m], sh.tgt[m]
        if sh.is_identity(m):
            continue
        checks[max(rank[s], rank[t])].append(m)
        if rank[t] < rank[s] and forcing[rank[s]] is None:
            forcing[rank[s]] = m
    comp = c._compose
    out = []
    for x in (c.objects if apexes is None else apexes):
        legs = [None] * sh.n_objects

        def rec(i):
            if i == len(order):
                out.append(CoconeData(x, tuple(legs)))
                return
            s = order[i]
            fm = forcing[i]
            if fm is not None:
                cands = (comp(legs[sh.tgt[fm]], F.mor_map[fm]),)
            else:
                cands = c.hom(F.obj_map[s], x)
            for leg in cands:
                counter.tick()
                legs[s] = leg
                if all(comp(legs[sh.tgt[m]], F.mor_map[m]) == legs[sh.src[m]]
                       for m in checks[i]):
                    rec(i + 1)
            legs[s] = None

        rec(0)
    return out


def _cocones_by_apex(d, budget, counter=None):
    c = d.target
    per = [[] for _ in c.objects]
    for cc in enumerate_cocones(d, budget=budget, counter=counter):
        per[cc.apex].append(cc)
    return per


def _universal(c, cocone, per_apex):
    x0 = cocone.apex
    comp = c._compose
    for y in c.objects:
        hom = c.hom(x0, y)
        if len(hom) != len(per_apex[y]):
            return False
        images = {tuple(comp(m, leg) for leg in cocone.legs) for m in hom}
        if len(images) != len(hom):
            return False
    return True


def colimit(d, budget=None, counter=None):
    """The lowest-apex universal cocone over ``d``, or ``None``."""
    budget = resolve(budget)
    c = d.target
    per = _cocones_by_apex(d, budget, counter)
    counts = [len(p) for p in per]
    for x0 in c.objects:
        if any(c.hom_counts[x0, y] != counts[y] for y in c.objects):
            continue
        for cc in per[x0]:
            if _universal(c, cc, per):
                return cc
    return None


def is_colimit(d, cocone, budget=None):
    """Verify universality of ``cocone`` against every enumerated cocone."""
    if not is_cocone(d, cocone):
        return False
    per = _cocones_by_apex(d, resolve(budget))
    return _universal(d.target, cocone, per)


def mediating_morphism(d, colim, cocone):
    """The unique ``m: colim.apex -> cocone.apex`` with ``m∘leg = leg'``."""
    c = d.target
    hits = [m for m in c.hom(colim.apex, cocone.apex)
            if all(c._compose(m, l) == l2 for l, l2 in zip(colim.legs, cocone.legs))]
    if len(hits) != 1:
        raise NoColimit(f"cocone factors {len(hits)} times through the colimit")
    return hits[0]


# shapes -------------------------------------------------------------------------

@lru_cache(maxsize=None)
def wide_span_shape(n):
    """Object 0 with one arrow to each of ``1..n``."""
    mors = [(a, a, f"id_{a}") for a in range(n + 1)]
    table = {(a, a): a for a in range(n + 1)}
    for i in range(1, n + 1):
        k = len(mors)
        mors.append((0, i, f"l{i}"))
        table[(k, 0)] = k
        table[(i, k)] = k
    return FinCategory.from_table(n + 1, mors, list(range(n + 1)), table,
                                  name=f"wide-span{n}")


def wide_span_diagram(c, legs):
    legs = list(legs)
    if not legs:
        raise ValueError("a wide span needs at least one leg")
    s = c.src[legs[0]]
    if any(c.src[l] != s for l in legs):
        raise ValueError("wide span legs must share their source")
    sh = wide_span_shape(len(legs))
    obj = [s] + [c.tgt[l] for l in legs]
    mor = [c.ids[x] for x in obj] + legs
    return DiagramData(FunctorData(sh, c, obj, mor))


def span_diagram(c, f, g):
    return wide_span_diagram(c, [f, g])


def pushout(c, f, g, budget=None):
    """Pushout of ``tgt(f) <- src -> tgt(g)`` as ``(apex, leg_f, leg_g)``, or ``None``.

    ``leg_f`` starts at ``tgt(f)`` and ``leg_g`` at ``tgt(g)``.
    """
    if c.src[f] != c.src[g]:
        raise ValueError("pushout legs must share their source")
    cc = colimit(span_diagram(c, f, g), budget)
    if cc is None:
        return None
    return Pushout(cc.apex, cc.legs[1], cc.legs[2])


def wide_pushout(c, legs, budget=None):
    """Colimit of a wide span; ``legs`` of the result match the input order."""
    cc = colimit(wide_span_diagram(c, legs), budget)
    if cc is None:
        return None
    return WidePushout(cc.apex, tuple(cc.legs[1:]))


# chains ---------------------------------------------------------------------------

class ChainData(namedtuple("ChainData", "objects links")):
    """``objects[0] -> objects[1] -> ...`` with ``links[k]: objects[k] -> objects[k+1]``."""

    def check(self, c):
        if len(self.links) != len(self.objects) - 1 or not self.objects:
            return False
        return all(c.src[l] == self.objects[k] and c.tgt[l] == self.objects[k + 1]
                   for k, l in enumerate(self.links))


def chain_from_links(c, links, start=None):
    if not links:
        return ChainData((start,), ())
    return ChainData(tuple([c.src[links[0]]] + [c.tgt[l] for l in links]), tuple(links))


def chain_diagram(c, chain):
    if not chain.check(c):
        raise ValueError("malformed chain")
    n = len(chain.objects)
    sh = chain_shape(n)
    mor = []
    for m in sh.morphisms:
        i, j = sh.src[m], sh.tgt[m]
        cur = c.ids[chain.objects[i]]
        for k in range(i, j):
            cur = c._compose(chain.links[k], cur)
        mor.append(cur)
    return DiagramData(FunctorData(sh, c, chain.objects, mor))


def stabilization_index(c, chain):
    """First ``k`` such that every link from ``k`` on is an isomorphism."""
    k = len(chain.objects) - 1
    while k > 0 and is_isomorphism(c, chain.links[k - 1])[0]:
        k -= 1
    return k


def chain_colimit(c, chain, method="auto", budget=None):
    """Colimit cocone of a finite chain.

    ``method="search"`` runs the full cocone search; ``"stable"`` returns the
    stable object with composite legs (links from the stabilization index on
    are inverted); ``"auto"`` takes the stable path and verifies it by
    enumeration.
    """
    if not chain.check(c):
        raise ValueError("malformed chain")
    if method == "search":
        return colimit(chain_diagram(c, chain), budget)
    k0 = stabilization_index(c, chain)
    legs = []
    for i in range(len(chain.objects)):
        if i <= k0:
            cur = c.ids[chain.objects[i]]
            for k in range(i, k0):
                cur = c._compose(chain.links[k], cur)
        else:
            cur = c.ids[chain.objects[k0]]
            for k in range(k0, i):
                cur = c._compose(cur, is_isomorphism(c, chain.links[k])[1])
        legs.append(cur)
    cc = CoconeData(chain.objects[k0], tuple(legs))
    if method == "auto" and not is_colimit(chain_diagram(c, chain), cc, budget):
        raise AssertionError("stabilized chain failed its universality check")
    return cc


# crossing lemma --------------------------------------------------------------------

class CrossingData(namedtuple("CrossingData", "chain_c chain_d eta epsilon")):
    """Interleaved chains: ``eta[k]: C_k -> D_k`` and ``epsilon[k]: D_k -> C_{k+1}``.

    Both chains have the same length ``n``; ``eta`` has ``n`` entries and
    ``epsilon`` ``n - 1``.  The last ``eta`` must be invertible, which is how a
    finite truncation records that both chains have stabilized.
    """


CrossingVerdict = namedtuple(
    "CrossingVerdict", "isomorphic mutually_inverse eta_inf epsilon_inf colimit_c colimit_d")


def check_crossing_data(c, x):
    """List the failed interleaving equations (empty iff well formed)."""
    problems = []
    C, D = x.chain_c, x.chain_d
    n = len(C.objects)
    if not C.check(c) or not D.check(c):
        return ["chains are malformed"]
    if len(D.objects) != n or len(x.eta) != n or len(x.epsilon) != n - 1:
        return ["lengths do not interleave"]
    for k in range(n):
        e = x.eta[k]
        if c.src[e] != C.objects[k] or c.tgt[e] != D.objects[k]:
            problems.append(f"eta[{k}] has wrong endpoints")
    for k in range(n - 1):
        e = x.epsilon[k]
        if c.src[e] != D.objects[k] or c.tgt[e] != C.objects[k + 1]:
            problems.append(f"epsilon[{k}] has wrong endpoints")
    if problems:
        return problems
    for k in range(n - 1):
        if C.links[k] != c.compose(x.epsilon[k], x.eta[k]):
            problems.append(f"C link {k} != epsilon[{k}]∘eta[{k}]")
        if D.links[k] != c.compose(x.eta[k + 1], x.epsilon[k]):
            problems.append(f"D link {k} != eta[{k + 1}]∘epsilon[{k}]")
    if not is_isomorphism(c, x.eta[n - 1])[0]:
        problems.append("last eta is not an isomorphism (chains not stabilized)")
    return problems


def crossing_check(c, x, budget=None):
    """Compute both chain colimits and the induced comparison maps between them."""
    problems = check_crossing_data(c, x)
    if problems:
        raise MalformedCrossing("; ".join(problems))
    C, D = x.chain_c, x.chain_d
    n = len(C.objects)
    dc, dd = chain_diagram(c, C), chain_diagram(c, D)
    colim_c = chain_colimit(c, C, method="search", budget=budget)
    colim_d = chain_colimit(c, D, method="search", budget=budget)
    if colim_c is None or colim_d is None:
        raise NoColimit("a chain colimit is missing")
    i, j = colim_c.legs, colim_d.legs
    to_d = CoconeData(colim_d.apex, tuple(c.compose(j[k], x.eta[k]) for k in range(n)))
    last_inv = is_isomorphism(c, x.eta[n - 1])[1]
    to_c = CoconeData(colim_c.apex, tuple(
        [c.compose(i[k + 1], x.epsilon[k]) for k in range(n - 1)]
        + [c.compose(i[n - 1], last_inv)]))
    eta_inf = mediating_morphism(dc, colim_c, to_d)
    eps_inf = mediating_morphism(dd, colim_d, to_c)
    inverse = (c.compose(eps_inf, eta_inf) == c.ids[colim_c.apex]
               and c.compose(eta_inf, eps_inf) == c.ids[colim_d.apex])
    return CrossingVerdict(is_isomorphism(c, eta_inf)[0], inverse, eta_inf, eps_inf,
                           colim_c, colim_d)
