"""Regenerate the JSON fixtures under tests/fixtures."""
import io
from pathlib import Path

from despla import generators as gen
from despla.cli import run
from despla.files import category_to_json, functor_to_json, marks_to_json, write_json
from despla.fincat import is_isomorphism

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def injective(base, m):
    f = base.keys[m]
    return len(set(f)) == len(f)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_json(functor_to_json(gen.discrete_to_arrow()), OUT / "discrete_to_arrow.json")

    base = gen.finset(3)
    bij = {m for m in base.morphisms if is_isomorphism(base, m)[0]}
    inj = {m for m in base.morphisms if injective(base, m)}
    ids = set(base.ids)
    write_json(marks_to_json(base, ids, ids, bij), OUT / "identity_marks.json")
    write_json(marks_to_json(base, inj, bij, bij), OUT / "bijection_marks.json")
    # a non-bijective injection marked trivial: its displacement unit is not a bijection
    bad = bij | {m for m in inj if (base.src[m], base.tgt[m]) in {(1, 2), (2, 3), (1, 3)}}
    write_json(marks_to_json(base, inj, bad, bij), OUT / "failing_marks.json")

    # the crossing example: C = 1 -> 2 -> 2, D = 2 -> 2 -> 2 in FinSet<=2
    b2 = gen.finset(2)
    inc, i2 = gen.function_index(b2, (0,), 1, 2), b2.ids[2]
    label = b2.mor_labels
    write_json({"category": "finset2.json",
                "chain_c": {"objects": ["1", "2", "2"], "links": [label[inc], label[i2]]},
                "chain_d": {"objects": ["2", "2", "2"], "links": [label[i2], label[i2]]},
                "eta": [label[inc], label[i2], label[i2]],
                "epsilon": [label[i2], label[i2]]}, OUT / "crossing.json")
    write_json(category_to_json(b2), OUT / "finset2.json")

    # pointed sets of size <= 3 over FinSet<=3, and the add-a-basepoint adjunction
    quiet = io.StringIO()
    run(["generate", "pointed", "--size", "3", "--out", str(OUT)], quiet, quiet)
    run(["adjoint", "--functor", str(OUT / "pointed3-forget.json"), "--auto-window",
         "--write", str(OUT / "pointed3_adjunction.json")], quiet, quiet)


if __name__ == "__main__":
    main()
