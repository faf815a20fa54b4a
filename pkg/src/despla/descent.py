"""Displacements in a pseudopullback by iterated descent, and marked classes.

Given ``e = (b, (e_j), (iso_j))`` and ``ε: b -> c``, each stage displaces the
components along ``ε_j^k``, pushes the base units out along one wide pushout,
and feeds the pushout legs back in as the next ``ε_j^{k+1}``.  Once a stage
has invertible units and invertible base maps nothing moves any more, and
the stable components assemble into a cone object over the base.
"""
from collections import namedtuple

from .adjunction import build_adjunction, validate_adjunction
from .budget import resolve
from .colimits import ChainData, CrossingData, pushout, wide_pushout
from .displacement import certify, displace, transported
from .errors import (BudgetExceeded, CertificateMismatch, DisplacementMissing, NoColimit,
                     NotStabilized)
from .fincat import Violation, check_equivalence, inverse, is_isomorphism
from .join import adjoined_map, join_functor, join_one
from .pullback import pseudopullback

DEFAULT_MAX_STAGES = 16


class DescentStage(namedtuple("DescentStage",
                              "k b_k e_jk eps_jk eta_jk delta_jk iota_k displacements")):
    """One pass of the loop; ``iota_k`` is ``None`` on the stable stage."""


class DescentTrace(namedtuple("DescentTrace", "stages stabilized_at result e eps")):
    """Stages run so far; ``result`` is a displacement in the pseudopullback once stable."""


def descend(pp, e, eps, max_stages=DEFAULT_MAX_STAGES, budget=None):
    budget = resolve(budget)
    B = pp.base
    b, es, isos = pp.cones[e]
    if B.src[eps] != b:
        raise ValueError("eps must start at the base of e")
    comps = pp.components
    stages = []

    def partial():
        return DescentTrace(tuple(stages), None, None, e, eps)

    b_k = B.tgt[eps]
    e_k = list(es)
    eps_k = [B.compose(eps, inverse(B, iso)) for iso in isos]
    for k in range(max_stages):
        disp, eta, delta = [], [], []
        for j, pj in enumerate(comps):
            r = displace(pj, e_k[j], eps_k[j], budget)
            if r is None:
                raise DisplacementMissing(
                    f"component {j} has no displacement at stage {k}", j, k, partial())
            if pj.mor_map[r.unit_e] != B.compose(r.base_unit, eps_k[j]):
                raise AssertionError("step 3 equality fails")
            disp.append(r)
            eta.append(r.unit_e)
            delta.append(r.base_unit)
        if all(is_isomorphism(B, d)[0] for d in delta) and all(
                is_isomorphism(pj.dom, h)[0] for pj, h in zip(comps, eta)):
            stages.append(DescentStage(k, b_k, tuple(e_k), tuple(eps_k), tuple(eta),
                                       tuple(delta), None, tuple(disp)))
            return _assemble(pp, e, eps, stages, budget)
        wp = wide_pushout(B, delta, budget)
        if wp is None:
            raise NoColimit(f"no wide pushout of the base units at stage {k}")
        iota = B.compose(wp.legs[0], delta[0])
        if any(B.compose(leg, d) != iota for leg, d in zip(wp.legs, delta)):
            raise AssertionError("step 6 equality fails")
        stages.append(DescentStage(k, b_k, tuple(e_k), tuple(eps_k), tuple(eta),
                                   tuple(delta), iota, tuple(disp)))
        b_k = wp.apex
        e_k = [pj.dom.tgt[h] for pj, h in zip(comps, eta)]
        eps_k = list(wp.legs)
    raise NotStabilized(f"no stable stage within {max_stages} stages", partial())


def _assemble(pp, e, eps, stages, budget):
    B = pp.base
    last = stages[-1]
    k0 = last.k
    apex = pp.object_of(last.b_k, last.e_jk, [inverse(B, x) for x in last.eps_jk])
    base_unit = B.ids[B.tgt[eps]]
    for st in stages[:-1]:
        base_unit = B.compose(st.iota_k, base_unit)
    alphas = []
    for j, pj in enumerate(pp.components):
        a = pj.dom.ids[pp.cones[e][1][j]]
        for st in stages[:-1]:
            a = pj.dom.compose(st.eta_jk[j], a)
        alphas.append(a)
    alpha = pp.morphism_of(e, apex, B.compose(base_unit, eps), alphas)
    result = certify(pp.canonical, e, eps, alpha, base_unit, budget)
    return DescentTrace(tuple(stages), k0, result, e, eps)


def crossing_data(pp, trace, j):
    """The interleaved chains ``b^k`` and ``p_j(e_j^{k+1})`` of a stabilized trace."""
    pj = pp.components[j]
    st = trace.stages
    c_objs = [s.b_k for s in st]
    d_objs = [pj.obj_map[pj.dom.tgt[s.eta_jk[j]]] for s in st]
    c_links = [s.iota_k for s in st[:-1]]
    d_links = [pj.mor_map[s.eta_jk[j]] for s in st[1:]]
    eta = [s.delta_jk[j] for s in st]
    epsilon = [s.eps_jk[j] for s in st[1:]]
    return CrossingData(ChainData(tuple(c_objs), tuple(c_links)),
                        ChainData(tuple(d_objs), tuple(d_links)), tuple(eta), tuple(epsilon))


def verify_descent_universal(pp, e, eps, trace, budget=None):
    """Replay the inductive factorization for every ``(h, q)`` and compare with brute force.

    For ``h: e -> d`` and ``q: c -> p(d)`` with ``q∘ε = p(h)``, the replay walks
    the stages: the component displacement certificates give the unique
    ``ξ_j`` with ``ξ_j∘η_j^k = h_j^k``, and the wide-pushout property gives the
    next ``q^{k+1}``.  Brute force enumerates ``Hom(apex, d)``.
    """
    if trace.result is None or trace.stabilized_at is None:
        raise ValueError("trace has not stabilized")
    T, B, p = pp.total, pp.base, pp.canonical
    comps = pp.components
    res = trace.result
    alpha, base_unit, apex = res.unit_e, res.base_unit, res.apex
    stages = trace.stages
    # certificate lookups (h, q) -> xi per stage and component
    lifts = [[{(h, q): k for k, h, q in r.certificate.table} for r in st.displacements]
             for st in stages]
    mediators = {}

    def mediate(k, y, targets):
        key = (k, y)
        if key not in mediators:
            nxt = stages[k + 1].b_k
            legs = stages[k + 1].eps_jk
            table = {}
            for m in B.hom(nxt, y):
                table.setdefault(tuple(B._compose(m, l) for l in legs), []).append(m)
            mediators[key] = table
        hits = mediators[key].get(tuple(targets), [])
        if len(hits) != 1:
            raise CertificateMismatch(f"wide pushout at stage {k} mediates {len(hits)} times")
        return hits[0]

    qmap = {}
    for q in B.out_of(B.tgt[eps]):
        qmap.setdefault(B._compose(q, eps), []).append(q)
    brute = {}
    for xi in T.out_of(apex):
        pair = (T._compose(xi, alpha), B._compose(p.mor_map[xi], base_unit))
        brute.setdefault(pair, []).append(xi)
    n_pairs = 0
    for h in T.out_of(e):
        d = T.tgt[h]
        b_d, ds, thetas = pp.cones[d]
        for q in qmap.get(p.mor_map[h], ()):
            n_pairs += 1
            hj = [pp.projections[j].mor_map[h] for j in range(len(comps))]
            qk = q
            for k, st in enumerate(stages[:-1]):
                xis = []
                for j, pj in enumerate(comps):
                    target = B._compose(thetas[j], qk)
                    xi = lifts[k][j].get((hj[j], target))
                    if xi is None:
                        raise CertificateMismatch(f"component {j} has no factorization at stage {k}")
                    xis.append(xi)
                qk = mediate(k, b_d, [B._compose(inverse(B, thetas[j]), pj.mor_map[x])
                                      for j, (pj, x) in enumerate(zip(comps, xis))])
                hj = xis
            replay = pp.morphism_of(apex, d, qk, hj)
            found = brute.get((h, q), [])
            if found != [replay]:
                raise CertificateMismatch(
                    f"replay gives {T.mor_labels[replay]}, brute force {len(found)} maps")
    if n_pairs != len(T.out_of(apex)):
        raise CertificateMismatch("Hom(apex, -) is larger than the factorization problems")
    return True


# marked classes ------------------------------------------------------------------

class MarkedClass(namedtuple("MarkedClass", "ambient cofibrations trivial_cofibrations")):
    """Two independent classes of morphisms in ``ambient``."""

    def classes(self):
        return {"cofibrations": frozenset(self.cofibrations),
                "trivial_cofibrations": frozenset(self.trivial_cofibrations)}


def marked_class(ambient, cofibrations, trivial_cofibrations):
    return MarkedClass(ambient, frozenset(cofibrations), frozenset(trivial_cofibrations))


def closure_violations(c, cls, name="class", cobase=True, budget=None):
    """Identities, composition and cobase change, each violation naming its witnesses."""
    cls = frozenset(cls)
    out = []
    for a in c.objects:
        if c.ids[a] not in cls:
            out.append(Violation(f"{name}: identity missing", (c.ids[a],),
                                 f"id_{c.obj_labels[a]} is not in {name}"))
    for f in cls:
        for g in c.out_of(c.tgt[f]):
            if g in cls and c._compose(g, f) not in cls:
                out.append(Violation(f"{name}: composite missing", (g, f),
                                     f"{c.mor_labels[g]}∘{c.mor_labels[f]} is not in {name}"))
    if cobase:
        for f in sorted(cls):
            for g in c.out_of(c.src[f]):
                po = pushout(c, f, g, budget)
                if po is not None and po.leg_g not in cls:
                    out.append(Violation(f"{name}: cobase change missing", (f, g),
                                         f"pushout of {c.mor_labels[f]} along {c.mor_labels[g]}"
                                         f" is not in {name}"))
    return out


def validate_marked_class(m, budget=None):
    out = []
    for name, cls in m.classes().items():
        out.extend(closure_violations(m.ambient, cls, name, budget=budget))
    return out


LeftPerfectVerdict = namedtuple("LeftPerfectVerdict", "perfect failures labels")


def check_left_perfect(p, marks_dom, marks_cod, e=None, budget=None):
    """Displace along every marked map out of ``p(e)`` and test the base unit's class.

    Membership is tested up to isomorphism of the displacement.

    ``labels`` records, per instance, whether the unit is a (trivial)
    p-cofibration, meaning its image lies in the class.  ``marks_dom`` is
    optional and only used to add the unit's own membership to the labels.
    """
    budget = resolve(budget)
    E, B = p.dom, p.cod
    objs = list(E.objects) if e is None else [e]
    failures, labels = [], []
    for x in objs:
        for name, cls in marks_cod.classes().items():
            for eps in B.out_of(p.obj_map[x]):
                if eps not in cls:
                    continue
                r = displace(p, x, eps, budget)
                if r is None:
                    raise DisplacementMissing(
                        f"no displacement of {E.obj_labels[x]} along {B.mor_labels[eps]}")
                unit, base_unit = transported(p, r, lambda h, u: u in cls)
                label = {"object": x, "eps": eps, "class": name, "unit": unit,
                         "p_cofibration": p.mor_map[unit] in cls}
                if marks_dom is not None:
                    label["unit_marked"] = unit in marks_dom.classes()[name]
                labels.append(label)
                if base_unit not in cls:
                    failures.append((x, eps, name))
    return LeftPerfectVerdict(not failures, failures, labels)


def trace_mark_violations(trace, cls):
    """Stages whose ``ι^k`` or ``ε_j^{k+1}`` leave ``cls``."""
    out = []
    for k, st in enumerate(trace.stages[:-1]):
        if st.iota_k not in cls:
            out.append((k, "iota"))
        for j, x in enumerate(trace.stages[k + 1].eps_jk):
            if x not in cls:
                out.append((k, f"eps[{j}]"))
    return out


StagewiseVerdict = namedtuple("StagewiseVerdict", "holds hypothesis broken_at composite")


def check_stagewise_class(trace, chi, z, j=0):
    """If every ``χ(η_j^k)`` is in ``z`` then so is ``χ`` of their composite."""
    D = chi.cod
    z = frozenset(z)
    if closure_violations(D, z, cobase=False):
        raise ValueError("z must contain identities and be closed under composition")
    E = chi.dom
    stages = trace.stages[:-1]
    comp = E.ids[trace.stages[0].e_jk[j]]
    broken = None
    for st in stages:
        if broken is None and chi.mor_map[st.eta_jk[j]] not in z:
            broken = st.k
        comp = E.compose(st.eta_jk[j], comp)
    image = chi.mor_map[comp]
    in_z = image in z
    if broken is None:
        return StagewiseVerdict(in_z, True, None, comp)
    return StagewiseVerdict(True, False, broken, comp)


# intersection of adjoints ------------------------------------------------------------

def intersect_adjoints(family, window=None, max_stages=DEFAULT_MAX_STAGES, verify_join=True,
                       budget=None):
    """Left adjoint of the canonical projection of the pseudopullback of ``family``.

    Joins every category, descends from the adjoined initial object along
    each ``0 -> b`` of the window and reads ``Γ`` off the results.
    """
    budget = resolve(budget)
    B = family[0].cod
    window = list(B.objects if window is None else window)
    pp = pseudopullback(family, budget)
    jfam = [join_functor(p) for p in family]
    jpp = pseudopullback(jfam, budget)
    if verify_join:
        try:
            w = check_equivalence(join_one(pp.total).joined, jpp.total, budget)
        except BudgetExceeded:
            w = True
        if w is None:
            raise AssertionError("join of the pseudopullback is not the joined pseudopullback")
    jb = join_one(B)
    zero = jpp.object_of(jb.zero, [join_one(p.dom).zero for p in family],
                         [jb.joined.ids[jb.zero]] * len(family))
    gammas, units = [], []
    for b in window:
        tr = descend(jpp, zero, adjoined_map(jb, b), max_stages, budget)
        gammas.append(pp.object_of(*jpp.cones[tr.result.apex]))
        units.append(tr.result.base_unit)
    adj = build_adjunction(pp.canonical, window, gammas, units)
    problems = validate_adjunction(adj)
    if problems:
        raise AssertionError(problems[0].message)
    adj.pseudopullback = pp
    return adj
