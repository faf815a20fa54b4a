"""Explicit pseudopullbacks of a family of functors over a common base.

An object is ``(b, (e_j), (iso_j))`` with ``iso_j: b -> p_j(e_j)`` invertible;
a morphism ``(b, ...) -> (c, ...)`` is ``(σ, (σ_j))`` with
``iso'_j∘σ = p_j(σ_j)∘iso_j``.  The canonical projection keeps ``b``.
"""
from itertools import product

import numpy as np

from .budget import Counter, resolve
from .errors import BudgetExceeded
from .fincat import (CodeIndex, FinCategory, FunctorData, NatTrans, compose_functors,
                     equivalence_from_functor, inverse, isomorphisms, validate_functor,
                     validate_nat_trans)


class PseudoPullbackCategory:
    """``total`` with projections ``tau[j]``, canonical ``p`` and ``natiso[j]: p => p_j∘tau_j``."""

    def __init__(self, components, total, projections, canonical, natiso, cones):
        self.components = components
        self.total = total
        self.projections = projections
        self.canonical = canonical
        self.natiso = natiso
        self.cones = cones  # object index -> (b, es, isos)
        self._index = {k: i for i, k in enumerate(cones)}

    @property
    def base(self):
        return self.canonical.cod

    def object_of(self, b, es, isos):
        return self._index[(b, tuple(es), tuple(isos))]

    def morphism_of(self, src, tgt, sigma, sigmas):
        return self.total.lookup[(src, tgt, (sigma,) + tuple(sigmas))]


def pseudopullback(family, budget=None):
    family = list(family)
    if not family:
        raise ValueError("pseudopullback of an empty family")
    B = family[0].cod
    if any(p.cod is not B for p in family):
        raise ValueError("family members must share their codomain")
    budget = resolve(budget)
    objs = Counter("pseudopullback objects", budget.pullback_objects)
    cones = []
    for b in B.objects:
        choices = []
        for p in family:
            opts = []
            for e in p.dom.objects:
                for iso in isomorphisms(B, b, p.obj_map[e]):
                    opts.append((e, iso))
            choices.append(opts)
        for pick in product(*choices):
            objs.tick()
            cones.append((b, tuple(e for e, _ in pick), tuple(i for _, i in pick)))

    # lifts[j][(e, e2, image)] = morphisms of E_j with that image
    lifts = []
    for p in family:
        d = {}
        for m in p.dom.morphisms:
            d.setdefault((p.dom.src[m], p.dom.tgt[m], p.mor_map[m]), []).append(m)
        lifts.append(d)
    invs = {}

    def inv(m):
        if m not in invs:
            invs[m] = inverse(B, m)
        return invs[m]

    mors_count = Counter("pseudopullback morphisms", budget.pullback_morphisms)
    comp = B._compose
    mors = []
    ids = [None] * len(cones)
    for si, (b, es, isos) in enumerate(cones):
        for ti, (c, fs, isos2) in enumerate(cones):
            for sigma in B.hom(b, c):
                per = []
                for j in range(len(family)):
                    image = comp(comp(isos2[j], sigma), inv(isos[j]))
                    per.append(lifts[j].get((es[j], fs[j], image), ()))
                    if not per[-1]:
                        break
                else:
                    for sig in product(*per):
                        mors_count.tick()
                        key = (sigma,) + sig
                        if si == ti and sigma == B.ids[b] and all(
                                s == p.dom.ids[e] for s, p, e in zip(sig, family, es)):
                            ids[si] = len(mors)
                        mors.append((si, ti, key, None))
    doms = [p.dom for p in family]

    def compose_keys(kg, kf):
        return (comp(kg[0], kf[0]),) + tuple(
            d._compose(g, f) for d, g, f in zip(doms, kg[1:], kf[1:]))

    def obj_label(cone):
        b, es, isos = cone
        return (f"{B.obj_labels[b]}|" + ",".join(d.obj_labels[e] for d, e in zip(doms, es))
                + "|" + ",".join(B.mor_labels[i] for i in isos))

    labelled = [(s, t, k, "(" + ",".join([B.mor_labels[k[0]]] + [
        d.mor_labels[x] for d, x in zip(doms, k[1:])]) + ")") for s, t, k, _ in mors]
    total = FinCategory.concrete(len(cones), labelled, ids, compose_keys,
                                 obj_labels=[obj_label(c) for c in cones],
                                 name="pseudopullback")
    _vectorise_cones(total, B, doms, mors)
    canonical = FunctorData(total, B, [c[0] for c in cones], [k[0] for _, _, k, _ in mors],
                            name="p")
    taus, natisos = [], []
    for j, p in enumerate(family):
        tau = FunctorData(total, p.dom, [c[1][j] for c in cones],
                          [k[1 + j] for _, _, k, _ in mors], name=f"tau{j}")
        taus.append(tau)
        natisos.append(NatTrans(canonical, compose_functors(p, tau),
                                [c[2][j] for c in cones], name=f"iso{j}"))
    return PseudoPullbackCategory(family, total, taus, canonical, natisos, cones)


def _vectorise_cones(total, B, doms, mors):
    # a cone morphism is coded by its endpoints and its component indices
    radices = [total.n_objects, total.n_objects, B.n_morphisms] + [d.n_morphisms for d in doms]
    if np.prod([float(r) for r in radices]) >= 2.0 ** 62:
        return
    keys = np.array([(s, t) + k for s, t, k, _ in mors], dtype=np.int64).reshape(
        len(mors), len(radices))
    cats = [B] + list(doms)

    def code(cols):
        out = np.zeros(len(cols[0]), dtype=np.int64)
        for col, r in zip(cols, radices):
            out = out * r + col
        return out

    index = CodeIndex(code(keys.T))

    def vec(gs, fs):
        kg, kf = keys[gs], keys[fs]
        cols = [kf[:, 0], kg[:, 1]] + [c.compose_array(kg[:, 2 + i], kf[:, 2 + i])
                                       for i, c in enumerate(cats)]
        return index.find(code(cols))

    total._compose_vec = vec


def validate_pseudopullback(pp):
    """Functoriality of every projection and naturality of every stored iso."""
    out = list(validate_functor(pp.canonical))
    for tau, t in zip(pp.projections, pp.natiso):
        out.extend(validate_functor(tau))
        out.extend(validate_nat_trans(t))
    return out


def comparison_functor(legs, family, isos=None, budget=None, pp=None):
    """``K: P -> pseudopullback(family)`` induced by a cone of functors out of ``P``.

    ``legs[j]: P -> E_j``; ``isos[j]`` is a natural iso ``base => p_j∘legs[j]``
    for a common ``base: P -> B``.  Without ``isos`` the cone must commute
    strictly and the isos are identities.
    """
    pp = pp or pseudopullback(family, budget)
    P = legs[0].dom
    B = family[0].cod
    if isos is None:
        base = compose_functors(family[0], legs[0])
        for p, q in zip(family, legs):
            pq = compose_functors(p, q)
            if pq.obj_map != base.obj_map or pq.mor_map != base.mor_map:
                return None, pp
        comps = [[B.ids[base.obj_map[x]] for x in P.objects] for _ in family]
    else:
        base = isos[0].src
        comps = [t.components for t in isos]
    obj = []
    for x in P.objects:
        key = (base.obj_map[x], tuple(q.obj_map[x] for q in legs),
               tuple(c[x] for c in comps))
        obj.append(pp._index[key])
    mor = [pp.morphism_of(obj[P.src[m]], obj[P.tgt[m]], base.mor_map[m],
                          [q.mor_map[m] for q in legs]) for m in P.morphisms]
    return FunctorData(P, pp.total, obj, mor, name="comparison"), pp


def verify_pseudopullback_square(legs, family, isos=None, budget=None):
    """Is ``P`` (the common domain of ``legs``) a pseudopullback of ``family``?

    The comparison functor into the explicit model must be an equivalence;
    an explicit quasi-inverse with natural isomorphisms is built and checked.
    """
    budget = resolve(budget)
    try:
        K, pp = comparison_functor(legs, family, isos, budget)
    except KeyError:
        return False
    if K is None or validate_functor(K):
        return False
    if pp.total.n_objects > budget.equiv_raw_objects:
        raise BudgetExceeded("equivalence raw objects", budget.equiv_raw_objects,
                             pp.total.n_objects)
    return equivalence_from_functor(K) is not None
