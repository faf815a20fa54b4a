import json

import pytest

from despla import generators as gen
from despla.colimits import crossing_check
from despla.errors import InvalidCategory
from despla.fincat import identity_functor
from despla.files import (FileFormatError, Loader, category_from_json, category_to_json, dumps,
                          functor_to_json, marks_to_json, morphism_names, object_names)


def same_category(a, b):
    if (a.n_objects, a.n_morphisms) != (b.n_objects, b.n_morphisms):
        return False
    if list(a.src) != list(b.src) or list(a.tgt) != list(b.tgt) or list(a.ids) != list(b.ids):
        return False
    return all(a.compose(g, f) == b.compose(g, f)
               for f in a.morphisms for g in a.out_of(a.tgt[f]))


@pytest.mark.parametrize("c", [gen.walking_arrow(), gen.finset(2), gen.pointed(2)[0],
                               gen.cyclic_group_category(3), gen.discrete(2)])
def test_category_round_trip(c):
    doc = category_to_json(c)
    back = category_from_json(json.loads(dumps(doc)))
    assert same_category(c, back)
    assert category_to_json(back) == doc


def test_dumps_deterministic():
    c = gen.finset(2)
    assert dumps(category_to_json(c)) == dumps(category_to_json(gen.finset(2)))
    assert dumps(category_to_json(c)).endswith("\n")


def arrow_doc():
    return {"objects": ["a", "b"],
            "morphisms": [{"name": "ia", "src": "a", "tgt": "a"},
                          {"name": "ib", "src": "b", "tgt": "b"},
                          {"name": "f", "src": "a", "tgt": "b"}],
            "identities": {"a": "ia", "b": "ib"}}


def test_identity_composites_may_be_omitted():
    c = category_from_json(arrow_doc())
    assert c.n_morphisms == 3 and c.compose(2, 0) == 2


def test_unknown_key_rejected():
    doc = arrow_doc()
    doc["colour"] = "red"
    with pytest.raises(FileFormatError):
        category_from_json(doc)


def test_missing_composite_rejected():
    doc = {"objects": ["x"],
           "morphisms": [{"name": "e", "src": "x", "tgt": "x"},
                         {"name": "s", "src": "x", "tgt": "x"}],
           "identities": {"x": "e"}}
    with pytest.raises(InvalidCategory):
        category_from_json(doc)


def test_bad_composition_table_rejected():
    doc = {"objects": ["x"],
           "morphisms": [{"name": "e", "src": "x", "tgt": "x"},
                         {"name": "s", "src": "x", "tgt": "x"},
                         {"name": "t", "src": "x", "tgt": "x"}],
           "identities": {"x": "e"},
           "composition": [{"after": "s", "before": "s", "equals": "t"},
                           {"after": "s", "before": "t", "equals": "s"},
                           {"after": "t", "before": "s", "equals": "t"},
                           {"after": "t", "before": "t", "equals": "t"}]}
    with pytest.raises(InvalidCategory):
        category_from_json(doc)


def test_unknown_names_rejected():
    doc = arrow_doc()
    doc["identities"]["a"] = "nope"
    with pytest.raises(FileFormatError):
        category_from_json(doc)


def test_duplicate_labels_disambiguated():
    c = gen.discrete(2)
    c2 = category_from_json(category_to_json(c))
    assert len(set(object_names(c2))) == 2
    assert len(set(morphism_names(gen.cyclic_group_category(2)))) == 2


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    with pytest.raises(FileFormatError):
        Loader().category(p)


def test_functor_shares_codomain(tmp_path):
    _, p = gen.pointed(2)
    _, q = gen.mset(gen.cyclic_monoid(2), 2)
    (tmp_path / "base.json").write_text(dumps(category_to_json(p.cod)), encoding="utf-8")
    for name, f in (("p", p), ("q", q)):
        (tmp_path / f"{name}.json").write_text(
            dumps(functor_to_json(f, cod="base.json")), encoding="utf-8")
    loader = Loader()
    lp, lq = loader.functor(tmp_path / "p.json"), loader.functor(tmp_path / "q.json")
    assert lp.cod is lq.cod
    assert list(lp.obj_map) == list(p.obj_map) and list(lp.mor_map) == list(p.mor_map)


def test_inline_functor():
    f = identity_functor(gen.walking_arrow())
    loaded = Loader().functor(json.loads(dumps(functor_to_json(f))))
    assert loaded.dom is loaded.cod
    assert list(loaded.mor_map) == [0, 1, 2]


def test_marks_violations_reported():
    c = gen.finset(2)
    ids = set(c.ids)
    doc = marks_to_json(c, ids, ids | {gen.function_index(c, (0,), 1, 2)})
    loaded = Loader().marks(doc, c)
    assert loaded.weak_equivalences is None
    assert loaded.violations
    assert all(v.morphisms for v in loaded.violations)


def test_adjunction_without_unit_is_synthesized(fixtures):
    loader = Loader()
    doc = {"right": "pointed3-forget.json", "window": ["0", "1"]}
    adj = loader.adjunction(doc, fixtures)
    E = adj.total
    # labels read "size@basepoint"; the free pointed set on b points has b + 1
    assert [int(E.obj_labels[adj.gamma(b)].split("@")[0]) for b in adj.window_objects] == [1, 2]


def test_adjunction_fixture(fixtures):
    adj = Loader().adjunction("pointed3_adjunction.json", fixtures)
    assert [adj.total.obj_labels[adj.gamma(b)] for b in adj.window_objects] == \
        ["1@0", "2@0", "3@0"]


def test_crossing_fixture(fixtures):
    c, x = Loader().crossing("crossing.json", fixtures)
    v = crossing_check(c, x)
    assert v.isomorphic and v.mutually_inverse
