"""Adjunctions ``Γ ⊣ p`` between finite categories, possibly on a window.

A finite truncation of a category rarely contains every free object, so a
left adjoint is recorded on a *window*: a full subcategory ``W`` of the base
on which ``Γ`` is defined.  The unit is a universal arrow ``b -> pΓb`` for
each ``b`` in ``W``; the counit lives on ``E_W``, the objects of the total
category lying over ``W``.  With the window equal to the whole base this is
an ordinary adjunction.
"""
from .fincat import (FunctorData, NatTrans, Violation, compose_functors, full_subcategory,
                     validate_functor, validate_nat_trans)


class AdjunctionData:
    """``left: W -> E``, ``right: E -> B``, ``unit: inc => pΓ``, ``counit: Γp => inc``."""

    def __init__(self, left, right, unit, counit, window, window_inc, ew_inc, p_w):
        self.left = left
        self.right = right
        self.unit = unit
        self.counit = counit
        self.window = window          # W as a FinCategory
        self.window_inc = window_inc  # W -> B
        self.ew_inc = ew_inc          # E_W -> E
        self.p_w = p_w                # E_W -> W
        self._wpos = {b: i for i, b in enumerate(window_inc.obj_map)}
        self._epos = {e: i for i, e in enumerate(ew_inc.obj_map)}
        self._wback = {g: i for i, g in enumerate(window_inc.mor_map)}

    @property
    def total(self):
        return self.right.dom

    @property
    def base(self):
        return self.right.cod

    @property
    def window_objects(self):
        return self.window_inc.obj_map

    def in_window(self, b):
        return b in self._wpos

    def gamma(self, b):
        """``Γb`` for ``b`` an object of the base inside the window."""
        return self.left.obj_map[self._wpos[b]]

    def gamma_mor(self, g):
        """``Γg`` for ``g`` a base morphism between window objects."""
        return self.left.mor_map[self._wback[g]]

    def unit_at(self, b):
        return self.unit.components[self._wpos[b]]

    def counit_at(self, e):
        """Counit component ``Γp(e) -> e``, or ``None`` when ``p(e)`` is outside the window."""
        i = self._epos.get(e)
        return None if i is None else self.counit.components[i]

    def transpose(self, b, f):
        """``f: Γb -> e`` to ``p(f)∘unit_b: b -> p(e)``."""
        return self.base.compose(self.right.mor_map[f], self.unit_at(b))

    def untranspose(self, b, e, g):
        """The unique ``f: Γb -> e`` transposing to ``g: b -> p(e)``."""
        E, B, p = self.total, self.base, self.right
        if B.tgt[g] != p.obj_map[e]:
            raise ValueError(f"{B.describe(g)} does not land in p({E.obj_labels[e]})")
        u = self.unit_at(b)
        hits = [f for f in E.hom(self.gamma(b), e) if B._compose(p.mor_map[f], u) == g]
        if len(hits) != 1:
            raise ValueError(f"transpose of {B.describe(g)} is not unique ({len(hits)} hits)")
        return hits[0]


def _unique(cands, what):
    if len(cands) != 1:
        raise ValueError(f"{what}: expected a unique solution, found {len(cands)}")
    return cands[0]


def build_adjunction(p, window, gamma_objs, units):
    """Assemble adjunction data from universal arrows.

    ``window`` lists base objects; ``gamma_objs[i]`` and ``units[i]`` give
    ``Γ`` and ``unit: b -> pΓb`` at ``window[i]``.  ``Γ`` on morphisms and the
    counit are read off the universal property, so a non-universal unit raises
    ``ValueError``.
    """
    E, B = p.dom, p.cod
    window = list(window)
    W, w_inc = full_subcategory(B, window, name="window")
    comp = B._compose
    g_mor = []
    for m in W.morphisms:
        i, j = W.src[m], W.tgt[m]
        g = w_inc.mor_map[m]
        target = comp(units[j], g)
        g_mor.append(_unique([x for x in E.hom(gamma_objs[i], gamma_objs[j])
                              if comp(p.mor_map[x], units[i]) == target],
                             f"Γ on {B.describe(g)}"))
    gamma = FunctorData(W, E, gamma_objs, g_mor, name="Γ")
    unit = NatTrans(w_inc, compose_functors(p, gamma), units, name="unit")

    wpos = {b: i for i, b in enumerate(window)}
    ew_objs = [e for e in E.objects if p.obj_map[e] in wpos]
    EW, ew_inc = full_subcategory(E, ew_objs, name="E_W")
    wback = {g: i for i, g in enumerate(w_inc.mor_map)}
    p_w = FunctorData(EW, W, [wpos[p.obj_map[e]] for e in ew_objs],
                      [wback[p.mor_map[m]] for m in ew_inc.mor_map], name="p|E_W")
    counit = []
    for e in ew_objs:
        i = wpos[p.obj_map[e]]
        counit.append(_unique([x for x in E.hom(gamma_objs[i], e)
                               if comp(p.mor_map[x], units[i]) == B.ids[p.obj_map[e]]],
                              f"counit at {E.obj_labels[e]}"))
    counit_t = NatTrans(compose_functors(gamma, p_w), ew_inc, counit, name="counit")
    return AdjunctionData(gamma, p, unit, counit_t, W, w_inc, ew_inc, p_w)


def validate_adjunction(adj, check_bijection=True):
    """Functoriality, naturality, triangle identities and the hom-bijection.

    The identity ``εΓ ∘ Γη = id`` at ``b`` needs the counit at ``Γb``, which
    exists only when ``pΓb`` lies in the window; it is checked wherever
    defined.  The hom-bijection ``Hom(Γb, e) ≅ Hom(b, p(e))`` is checked for
    every window object ``b`` and every ``e``.
    """
    out = []
    for F in (adj.left, adj.right, adj.window_inc, adj.ew_inc, adj.p_w):
        out.extend(validate_functor(F))
    out.extend(validate_nat_trans(adj.unit))
    out.extend(validate_nat_trans(adj.counit))
    if out:
        return out
    E, B, p = adj.total, adj.base, adj.right
    for b in adj.window_objects:
        gb = adj.gamma(b)
        eps = adj.counit_at(gb)
        if eps is None:
            continue
        u = adj.unit_at(b)
        if E.compose(eps, adj.gamma_mor(u)) != E.ids[gb]:
            out.append(Violation("triangle", (b,), f"εΓ∘Γη != id at {B.obj_labels[b]}"))
    for e in adj.ew_inc.obj_map:
        pe = p.obj_map[e]
        if B.compose(p.mor_map[adj.counit_at(e)], adj.unit_at(pe)) != B.ids[pe]:
            out.append(Violation("triangle", (e,), f"pε∘ηp != id at {E.obj_labels[e]}"))
    if check_bijection:
        out.extend(check_hom_bijection(adj))
    return out


def check_hom_bijection(adj):
    """Transposition ``Hom(Γb, e) -> Hom(b, p(e))`` is bijective for all window ``b`` and all ``e``."""
    E, B, p = adj.total, adj.base, adj.right
    out = []
    for b in adj.window_objects:
        gb, u = adj.gamma(b), adj.unit_at(b)
        for e in E.objects:
            images = {B._compose(p.mor_map[f], u) for f in E.hom(gb, e)}
            n = len(E.hom(gb, e))
            target = len(B.hom(b, p.obj_map[e]))
            if len(images) != n or n != target:
                out.append(Violation("hom bijection", (b, e),
                                     f"Hom(Γ{B.obj_labels[b]}, {E.obj_labels[e]}) has {n} maps,"
                                     f" {len(images)} transposes, {target} targets"))
    return out


def check_transpose_naturality(adj):
    """Naturality of transposition in both variables, by enumeration."""
    E, B, p = adj.total, adj.base, adj.right
    out = []
    W = adj.window
    for m in W.morphisms:
        g = adj.window_inc.mor_map[m]
        b, b2 = B.src[g], B.tgt[g]
        gg = adj.left.mor_map[m]
        for e in E.objects:
            for f in E.hom(adj.gamma(b2), e):
                lhs = adj.transpose(b, E.compose(f, gg))
                rhs = B.compose(adj.transpose(b2, f), g)
                if lhs != rhs:
                    out.append(Violation("transpose naturality", (g, f), "in the base variable"))
    for b in adj.window_objects:
        gb = adj.gamma(b)
        for f in E.out_of(gb):
            for k in E.out_of(E.tgt[f]):
                lhs = adj.transpose(b, E.compose(k, f))
                rhs = B.compose(p.mor_map[k], adj.transpose(b, f))
                if lhs != rhs:
                    out.append(Violation("transpose naturality", (f, k), "in the total variable"))
    return out
