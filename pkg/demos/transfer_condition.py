"""The transfer condition for the add-basepoint adjunction over FinSet<=3.

With bijections as trivial cofibrations and weak equivalences every
displacement unit lies over a bijection, so the condition holds.  Marking a
few proper injections as trivial breaks it exactly at those maps.
"""
from despla import generators as gen
from despla.descent import marked_class
from despla.fincat import is_isomorphism
from despla.transfer import model_marks, transfer_condition_check


def main():
    adj = gen.pointed_adjunction(3)
    E, B = adj.total, adj.base
    bij = {m for m in B.morphisms if is_isomorphism(B, m)[0]}
    inj = {m for m in B.morphisms if len(set(B.keys[m])) == len(B.keys[m])}

    v = transfer_condition_check(adj, model_marks(marked_class(B, inj, bij), bij))
    print(f"bijections: holds={v.holds} over {len(v.instances)} instances")

    proper = {m for m in inj if B.src[m] < B.tgt[m]}
    v = transfer_condition_check(adj, model_marks(marked_class(B, inj, bij | proper), bij))
    print(f"bijections plus proper injections: holds={v.holds},"
          f" {len(v.failures)} failures")
    for e, eps in v.failures[:5]:
        print(f"  {E.obj_labels[e]} along {B.mor_labels[eps]}")


if __name__ == "__main__":
    main()
