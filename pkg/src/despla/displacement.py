"""Displacements: corepresenting objects of ``Hom(ε, p(-))`` over ``(e↓E)``.

For ``p: E -> B``, ``e`` in ``E`` and ``ε: p(e) -> b``, a displacement is an
object ``h0: e -> x0`` of the comma category ``(e↓E)`` with a natural bijection

    Hom_(e↓E)(h0, h)  ≅  {q: b -> p(x) | q∘ε = p(h)}        for every h: e -> x.

Grouping comma objects by codomain, the left side over ``x`` is just
``Hom(x0, x)``, so a candidate must have ``|Hom(x0, x)| = |P(x)|`` for every
``x`` where ``P(x)`` collects the pairs ``(h, q)`` above.  Any natural family
is determined by the image ``u`` of the identity, so each ``(h0, u)`` is a
single candidate family ``k ↦ (k∘h0, p(k)∘u)``; the winner is then re-checked
for bijectivity and naturality against every comma morphism.
"""
from collections import namedtuple

import numpy as np

from .adjunction import build_adjunction, validate_adjunction
from .budget import Counter, resolve
from .errors import BudgetExceeded, CertificateMismatch
from .fincat import FinCategory, FunctorData, is_isomorphism
from .join import adjoined_map, join_functor, join_one

CommaUnder = namedtuple("CommaUnder", "base_obj comma projection tagging")
Certificate = namedtuple("Certificate", "comma_object element table")
DisplacementResult = namedtuple("DisplacementResult", "unit_e apex base_unit certificate")
OpfibrationVerdict = namedtuple("OpfibrationVerdict", "is_opfib failures")


def comma_under(c, e):
    """``(e↓c)``: objects are morphisms out of ``e``, morphisms commuting triangles."""
    objs = list(c.out_of(e))
    pos = {h: i for i, h in enumerate(objs)}
    mors, ids = [], []
    for i, h in enumerate(objs):
        for k in c.out_of(c.tgt[h]):
            j = pos[c._compose(k, h)]
            if k == c.ids[c.tgt[h]]:
                ids.append(len(mors))
            mors.append((i, j, k, c.mor_labels[k]))
    comma = FinCategory.concrete(len(objs), mors, ids, c._compose,
                                 obj_labels=[c.mor_labels[h] for h in objs],
                                 name=f"({c.obj_labels[e]}↓{c.name or 'C'})")
    proj = FunctorData(comma, c, [c.tgt[h] for h in objs], comma.keys, name="proj")
    return CommaUnder(e, comma, proj, tuple(objs))


def induced_comma_functor(p, e):
    """``(e↓E) -> (p(e)↓B)``, sending ``h`` to ``p(h)``."""
    E, B = p.dom, p.cod
    ce = comma_under(E, e)
    cb = comma_under(B, p.obj_map[e])
    opos = {h: i for i, h in enumerate(cb.tagging)}
    obj = [opos[p.mor_map[h]] for h in ce.tagging]
    mor = []
    for m in ce.comma.morphisms:
        i, j = obj[ce.comma.src[m]], obj[ce.comma.tgt[m]]
        mor.append(cb.comma.lookup[(i, j, p.mor_map[ce.comma.keys[m]])])
    F = FunctorData(ce.comma, cb.comma, obj, mor, name="induced")
    F.source_comma, F.target_comma = ce, cb
    return F


class _Problem:
    """Precomputed data for one ``(p, e, ε)``."""

    def __init__(self, p, e, eps, budget):
        E, B = p.dom, p.cod
        if B.src[eps] != p.obj_map[e]:
            raise ValueError("eps must start at p(e)")
        n_comma = len(E.out_of(e))
        if n_comma > budget.comma_objects:
            raise BudgetExceeded("comma objects", budget.comma_objects, n_comma)
        self.p, self.e, self.eps, self.E, self.B = p, e, eps, E, B
        self.b = B.tgt[eps]
        # q ↦ q∘ε, grouped by the composite
        self.qmap = {}
        for q in B.out_of(self.b):
            self.qmap.setdefault(B._compose(q, eps), []).append(q)
        counts = np.zeros(E.n_objects, dtype=np.int64)
        for h in E.out_of(e):
            counts[E.tgt[h]] += len(self.qmap.get(p.mor_map[h], ()))
        self.counts = counts

    def qs(self, h):
        """``F(h) = {q | q∘ε = p(h)}``."""
        return self.qmap.get(self.p.mor_map[h], ())

    def table(self, h0, u):
        """The family ``k ↦ (k∘h0, p(k)∘u)`` over ``Hom(x0, -)``, or ``None`` if not injective."""
        E, B = self.E, self.B
        ks = E.out_array(E.tgt[h0])
        hs = E.compose_array(ks, np.full(len(ks), h0))
        qs = B.compose_array(self.p.mor_array[ks], np.full(len(ks), u))
        if len(np.unique(hs * B.n_morphisms + qs)) != len(ks):
            return None
        return tuple(zip(ks.tolist(), hs.tolist(), qs.tolist()))

    def candidates(self, counter):
        E = self.E
        hc = E.hom_counts
        for h0 in E.out_of(self.e):
            x0 = E.tgt[h0]
            if not np.array_equal(hc[x0], self.counts):
                continue
            for u in sorted(self.qs(h0)):
                counter.tick()
                t = self.table(h0, u)
                if t is not None:
                    yield h0, u, t


def _check_table(prob, h0, u, table):
    """Problems with a recorded family: bijectivity onto every ``F(h)`` and naturality."""
    E, B, p = prob.E, prob.B, prob.p
    x0 = E.tgt[h0]
    if E.src[h0] != prob.e or u not in prob.qs(h0):
        return ["certificate element is not in F(h0)"]
    ks, hs, qs = (np.asarray(col, dtype=np.int64) for col in zip(*table))
    if sorted(ks.tolist()) != sorted(E.out_of(x0)):
        return ["certificate does not cover Hom(x0, -)"]
    out = []
    pm = p.mor_array
    n = len(ks)
    if not np.array_equal(hs, E.compose_array(ks, np.full(n, h0))):
        out.append("rows do not record k∘h0")
    if not np.array_equal(B.compose_array(qs, np.full(n, prob.eps)), pm[hs]):
        out.append("some row does not land in F(h)")
    # injective into P, and |P| = |Hom(x0, -)|, so onto
    if len(np.unique(hs * B.n_morphisms + qs)) != n or int(prob.counts.sum()) != n:
        out.append("family is not a bijection onto F")
    q_of = np.full(E.n_morphisms, -1, dtype=np.int64)
    q_of[ks] = qs
    if q_of[E.ids[x0]] != u:
        out.append("identity is not sent to the recorded element")
    if out:
        return out
    # naturality against every comma morphism k2: k∘h0 -> k2∘k∘h0
    tg = np.asarray(E.tgt, dtype=np.int64)[ks]
    deg = np.array([len(E.out_of(y)) for y in tg], dtype=np.int64)
    rows = np.repeat(np.arange(n), deg)
    k2s = np.concatenate([E.out_array(y) for y in tg]) if n else np.zeros(0, dtype=np.int64)
    lhs = q_of[E.compose_array(k2s, ks[rows])]
    rhs = B.compose_array(pm[k2s], qs[rows])
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        i = int(bad[0])
        out.append(f"naturality fails at {E.mor_labels[ks[rows[i]]]} then {E.mor_labels[k2s[i]]}")
    return out


def displace(p, e, eps, budget=None, counter=None):
    """Lowest-index displacement of ``e`` along ``eps``, or ``None``."""
    budget = resolve(budget)
    prob = _Problem(p, e, eps, budget)
    counter = counter or Counter("displacement candidates", budget.search_nodes)
    for h0, u, table in prob.candidates(counter):
        problems = _check_table(prob, h0, u, table)
        if problems:
            raise AssertionError("; ".join(problems))
        return DisplacementResult(h0, p.dom.tgt[h0], u, Certificate(h0, u, table))
    return None


def all_displacements(p, e, eps, budget=None):
    """Every comma object that corepresents, each with its least family."""
    budget = resolve(budget)
    prob = _Problem(p, e, eps, budget)
    out, seen = [], set()
    for h0, u, table in prob.candidates(Counter("displacement candidates", budget.search_nodes)):
        if h0 not in seen:
            seen.add(h0)
            out.append(DisplacementResult(h0, p.dom.tgt[h0], u, Certificate(h0, u, table)))
    return out


def certify(p, e, eps, unit, base_unit, budget=None):
    """Build and check the certificate for a displacement found by other means."""
    prob = _Problem(p, e, eps, resolve(budget))
    table = prob.table(unit, base_unit)
    if table is None or not np.array_equal(p.dom.hom_counts[p.dom.tgt[unit]], prob.counts):
        raise CertificateMismatch("the proposed unit does not corepresent Hom(eps, p(-))")
    problems = _check_table(prob, unit, base_unit, table)
    if problems:
        raise CertificateMismatch("; ".join(problems))
    return DisplacementResult(unit, p.dom.tgt[unit], base_unit, Certificate(unit, base_unit, table))


def verify_displacement(p, e, eps, r, budget=None):
    """Re-check a result against its certificate; raises :class:`CertificateMismatch`."""
    prob = _Problem(p, e, eps, resolve(budget))
    c = r.certificate
    if c is None or c.comma_object != r.unit_e or c.element != r.base_unit:
        raise CertificateMismatch("certificate does not match the result")
    if p.dom.tgt[r.unit_e] != r.apex:
        raise CertificateMismatch("apex is not the codomain of the unit")
    problems = _check_table(prob, r.unit_e, r.base_unit, c.table)
    if problems:
        raise CertificateMismatch("; ".join(problems))
    return True


def extract_unit(p, r, eps, e=None, budget=None):
    """The base unit ``b -> p(∇)``, after re-verifying the certificate and ``p(unit) = base∘ε``."""
    E, B = p.dom, p.cod
    e = E.src[r.unit_e] if e is None else e
    verify_displacement(p, e, eps, r, budget)
    if p.mor_map[r.unit_e] != B.compose(r.base_unit, eps):
        raise CertificateMismatch("p(unit) != base_unit∘eps")
    ident = [q for k, _, q in r.certificate.table if k == E.ids[r.apex]]
    if ident != [r.base_unit]:
        raise CertificateMismatch("identity of the apex does not correspond to the base unit")
    return r.base_unit


def comma_isomorphic(c, h1, h2):
    """An isomorphism ``k`` with ``k∘h1 = h2`` in ``(e↓c)``, or ``None``."""
    for k in c.hom(c.tgt[h1], c.tgt[h2]):
        if c._compose(k, h1) == h2 and is_isomorphism(c, k)[0]:
            return k
    return None


def transported(p, r, accept):
    """``(unit, base_unit)`` of a displacement isomorphic to ``r`` that ``accept`` takes.

    A displacement is determined only up to isomorphism in ``(e↓E)`` and the
    search returns the lowest-index one, so classes that are not closed under
    isomorphism are tested against every transport ``(φ∘unit, p(φ)∘base_unit)``
    along an iso ``φ`` out of the apex.  Falls back to ``r`` itself.
    """
    E, B = p.dom, p.cod
    if accept(r.unit_e, r.base_unit):
        return r.unit_e, r.base_unit
    for y in E.objects:
        for phi in E.hom(r.apex, y):
            if not is_isomorphism(E, phi)[0]:
                continue
            h, u = E.compose(phi, r.unit_e), B.compose(p.mor_map[phi], r.base_unit)
            if accept(h, u):
                return h, u
    return r.unit_e, r.base_unit


def is_street_opfibration(p, budget=None):
    """Every displacement exists and has an invertible base unit."""
    budget = resolve(budget)
    E, B = p.dom, p.cod
    failures = []
    for e in E.objects:
        for eps in B.out_of(p.obj_map[e]):
            r = displace(p, e, eps, budget)
            if r is None:
                failures.append((e, eps, "no displacement"))
            elif not is_isomorphism(B, r.base_unit)[0]:
                failures.append((e, eps, "base unit is not invertible"))
    return OpfibrationVerdict(not failures, failures)


def adjoint_window(p, budget=None):
    """Base objects ``b`` whose universal arrow ``b -> p(x)`` exists."""
    budget = resolve(budget)
    jp = join_functor(p)
    je, jb = join_one(p.dom), join_one(p.cod)
    return [b for b in p.cod.objects
            if displace(jp, je.zero, adjoined_map(jb, b), budget) is not None]


def left_adjoint_via_displacements(p, window=None, budget=None):
    """Left adjoint of ``p`` on ``window`` (default: every base object), or ``None``.

    Works in ``1<p``: the value at ``b`` is the displacement of the adjoined
    initial object along the unique ``0 -> b``.
    """
    budget = resolve(budget)
    E, B = p.dom, p.cod
    window = list(B.objects if window is None else window)
    jp = join_functor(p)
    je, jb = join_one(E), join_one(B)
    gammas, units = [], []
    for b in window:
        r = displace(jp, je.zero, adjoined_map(jb, b), budget)
        if r is None:
            return None
        gammas.append(r.apex)
        units.append(r.base_unit)
    adj = build_adjunction(p, window, gammas, units)
    problems = validate_adjunction(adj)
    if problems:
        raise AssertionError(problems[0].message)
    return adj
