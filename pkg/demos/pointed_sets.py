"""Displacements under the forgetful functor from pointed sets to sets.

Displacing (X, x0) along a function f: X -> Y lands on (Y, f(x0)) with f
itself as the unit.  The same functor has a left adjoint that adds a
basepoint, recovered here from displacements of the joined initial object,
and pushouts along that adjoint agree with displacements.
"""
from despla import generators as gen
from despla.displacement import (adjoint_window, displace, is_street_opfibration,
                                 left_adjoint_via_displacements)
from despla.transfer import pushout_via_displacement


def main():
    cat, p = gen.pointed(3)
    base = p.cod
    print(f"{cat.name}: {cat.n_objects} objects, {cat.n_morphisms} morphisms")

    e = gen.pointed_object(cat, 2, 1)
    f = gen.function_index(base, (2, 0), 2, 3)
    r = displace(p, e, f)
    print(f"displacing {cat.obj_labels[e]} along {base.mor_labels[f]}:")
    print(f"  apex {cat.obj_labels[r.apex]}, unit {cat.mor_labels[r.unit_e]},"
          f" base unit {base.mor_labels[r.base_unit]}")
    print(f"  certificate rows: {len(r.certificate.table)}")
    print(f"opfibration: {is_street_opfibration(p).is_opfib}")

    window = list(adjoint_window(p))
    adj = left_adjoint_via_displacements(p, window)
    print(f"left adjoint exists on base objects {window}")
    for b in window:
        print(f"  Γ({base.obj_labels[b]}) = {cat.obj_labels[adj.gamma(b)]},"
              f" unit {base.mor_labels[adj.unit_at(b)]}")

    inc = gen.function_index(base, (0,), 1, 2)
    sigma = cat.out_of(adj.gamma(1))[0]
    po = pushout_via_displacement(adj, inc, sigma)
    print(f"pushout along Γ({base.mor_labels[inc]}) and {cat.mor_labels[sigma]}:"
          f" apex {cat.obj_labels[po.pushout_apex]},"
          f" displacement apex {cat.obj_labels[po.displacement.apex]},"
          f" isomorphic: {po.witness is not None}")


if __name__ == "__main__":
    main()
