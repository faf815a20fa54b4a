"""Descent in the pseudopullback of pointed sets and Z/2-sets over FinSet<=2.

An object of the pseudopullback is a set carrying both structures.  Each
stage displaces both components, glues the base units with one wide pushout
and feeds the legs back in, until every unit is invertible.  The result is
then checked against brute-force search and the factorization is replayed.
"""
from despla import generators as gen
from despla.colimits import crossing_check
from despla.descent import crossing_data, descend, verify_descent_universal
from despla.displacement import comma_isomorphic, displace
from despla.pullback import pseudopullback


def main():
    _, p = gen.pointed(2)
    _, q = gen.mset(gen.cyclic_monoid(2), 2)
    pp = pseudopullback([p, q])
    T, B = pp.total, pp.base
    print(f"pseudopullback: {T.n_objects} objects, {T.n_morphisms} morphisms")

    e = next(i for i, (b, _, _) in enumerate(pp.cones) if b == 1)
    eps = gen.function_index(B, (0,), 1, 2)
    print(f"descending {T.obj_labels[e]} along {B.mor_labels[eps]}")
    tr = descend(pp, e, eps)
    for st in tr.stages:
        comps = ", ".join(f"{pp.components[j].dom.mor_labels[h]}"
                          for j, h in enumerate(st.eta_jk))
        glue = B.mor_labels[st.iota_k] if st.iota_k is not None else "stable"
        print(f"  stage {st.k}: base {B.obj_labels[st.b_k]}, units {comps}, glue {glue}")
    r = tr.result
    print(f"stabilized at {tr.stabilized_at}: apex {T.obj_labels[r.apex]}")

    direct = displace(pp.canonical, e, eps)
    print(f"agrees with direct search: {comma_isomorphic(T, r.unit_e, direct.unit_e) is not None}")
    print(f"factorization replay: {verify_descent_universal(pp, e, eps, tr)}")
    for j in range(len(pp.components)):
        v = crossing_check(B, crossing_data(pp, tr, j))
        print(f"component {j} chains cross: {v.isomorphic and v.mutually_inverse}")


if __name__ == "__main__":
    main()
