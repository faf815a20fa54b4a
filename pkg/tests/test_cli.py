import io
import json

import pytest

from despla.cli import run
from despla.displacement import certify
from despla.files import Loader, resolve_morphism, resolve_object
from despla.pullback import pseudopullback


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), err.getvalue()


@pytest.fixture
def instances(tmp_path):
    for args in (("pointed", "--size", "2"), ("pointed", "--size", "3"),
                 ("mset", "--monoid", "z2", "--carrier", "2")):
        code, _, _ = cli("generate", *args, "--out", tmp_path)
        assert code == 0
    return tmp_path


# generate -------------------------------------------------------------------------

def test_generate_walking_arrow():
    code, doc, _ = cli("generate", "walking-arrow")
    assert code == 0
    assert len(doc["objects"]) == 2 and len(doc["morphisms"]) == 3


def test_generate_finset_two(tmp_path):
    code, _, _ = cli("generate", "finset", "--size", "2", "--out", tmp_path / "f.json")
    assert code == 0
    c = Loader().category(tmp_path / "f.json")
    assert c.n_objects == 3 and len(c.hom(2, 2)) == 4


def test_generate_mset(instances):
    c = Loader().category(instances / "mset-z2-2.json")
    assert c.n_objects == 4


def test_generate_is_byte_identical(tmp_path):
    for d in ("a", "b"):
        (tmp_path / d).mkdir()
        assert cli("generate", "pointed", "--size", "2", "--out", tmp_path / d)[0] == 0
        assert cli("generate", "join-demo", "--size", "2", "--out",
                   tmp_path / d / "join.json")[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_generate_over_budget():
    assert cli("generate", "finset", "--size", "5")[0] == 69


# displace and opfibrations ------------------------------------------------------------

def test_displace_report_round_trips(instances):
    code, rep, err = cli("displace", "--functor", instances / "pointed3-forget.json",
                         "--object", "2@0", "--morphism", "2>3:01")
    assert code == 0 and rep["exists"] and "3@0" in err
    assert rep["apex"] == "3@0" and rep["certificate"]["size"] == len(rep["certificate"]["rows"])
    assert "budget_used" in rep and "budget" in rep
    p = Loader().functor(instances / "pointed3-forget.json")
    E, B = p.dom, p.cod
    r = certify(p, resolve_object(E, "2@0"), resolve_morphism(B, "2>3:01"),
                resolve_morphism(E, rep["unit"]), resolve_morphism(B, rep["base_unit"]))
    assert E.obj_labels[r.apex] == rep["apex"]
    assert len(r.certificate.table) == rep["certificate"]["size"]


def test_displace_none_is_false(fixtures):
    code, rep, _ = cli("displace", "--functor", fixtures / "discrete_to_arrow.json",
                       "--object", "0", "--morphism", "u")
    assert code == 1 and rep["exists"] is False


def test_opfib_check(fixtures, instances):
    assert cli("opfib-check", "--functor", instances / "pointed3-forget.json")[0] == 0
    code, rep, _ = cli("opfib-check", "--functor", fixtures / "discrete_to_arrow.json")
    assert code == 1 and len(rep["failures"]) == 1


# descent ---------------------------------------------------------------------------

def test_descend_report_round_trips(instances):
    fam = [instances / "pointed2-forget.json", instances / "mset-z2-2-forget.json"]
    obj = "2|2@0,2:01|2>2:01,2>2:01"
    code, rep, _ = cli("descend", "--family", *fam, "--object", obj, "--morphism", "2>1:00",
                       "--max-stages", "16")
    assert code == 0
    assert rep["stabilized_at"] == len(rep["stages"]) - 1
    assert rep["universal"] is True and all(rep["crossing"])
    loader = Loader()
    pp = pseudopullback([loader.functor(f) for f in fam])
    T, B = pp.total, pp.base
    r = certify(pp.canonical, resolve_object(T, obj), resolve_morphism(B, "2>1:00"),
                resolve_morphism(T, rep["result"]["unit"]),
                resolve_morphism(B, rep["result"]["base_unit"]))
    assert T.obj_labels[r.apex] == rep["result"]["apex"]


def test_descend_bad_object_is_usage_error(instances):
    code, _, err = cli("descend", "--family", instances / "pointed2-forget.json",
                       "--object", "nope", "--morphism", "1>1:0")
    assert code == 64 and "nope" in err


def test_pullback_lists_objects(instances):
    code, rep, _ = cli("pullback", "--family", instances / "pointed2-forget.json",
                       instances / "mset-z2-2-forget.json", "--list-objects", "--validate")
    assert code == 0 and rep["objects"] == 17 == len(rep["object_names"])


# marks and transfer -------------------------------------------------------------------

def test_transfer_identity_marks(fixtures):
    code, rep, _ = cli("transfer-check", "--adjunction", fixtures / "pointed3_adjunction.json",
                       "--marks", fixtures / "identity_marks.json")
    assert code == 0 and rep["verdict"] is True


def test_transfer_failing_marks(fixtures):
    code, rep, _ = cli("transfer-check", "--adjunction", fixtures / "pointed3_adjunction.json",
                       "--marks", fixtures / "failing_marks.json")
    assert code == 1 and len(rep["failures"]) == 17


def test_crossing_check(fixtures):
    assert cli("crossing-check", "--crossing", fixtures / "crossing.json")[0] == 0


def test_left_perfect(fixtures):
    code, _, _ = cli("left-perfect", "--functor", fixtures / "pointed3-forget.json",
                     "--marks", fixtures / "bijection_marks.json")
    assert code == 0


# joins and adjoints --------------------------------------------------------------------

def test_bridge_join_demo(tmp_path):
    assert cli("generate", "join-demo", "--size", "2", "--out", tmp_path / "j.json")[0] == 0
    code, rep, _ = cli("bridge", "--functor", tmp_path / "j.json")
    assert code == 0 and rep["verdict"] is True


def test_adjoint_auto_window(instances, tmp_path):
    out = tmp_path / "adj.json"
    code, rep, _ = cli("adjoint", "--functor", instances / "pointed3-forget.json",
                       "--auto-window", "--write", out)
    assert code == 0
    adj = Loader().adjunction(out)
    assert len(adj.window_objects) == 3
    assert cli("validate", "--adjunction", out)[0] == 0


def test_join_family(instances):
    code, rep, _ = cli("join", "--family", instances / "pointed2-forget.json",
                       instances / "mset-z2-2-forget.json")
    assert code == 0 and rep["verdict"] is True


# exit codes ---------------------------------------------------------------------------

def test_usage_errors():
    assert cli()[0] == 64
    assert cli("frobnicate")[0] == 64
    assert cli("displace", "--functor", "x.json")[0] == 64


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2", encoding="utf-8")
    assert cli("validate", "--category", bad)[0] == 65
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"objects": [], "morphisms": [], "identities": {},
                                 "junk": 1}), encoding="utf-8")
    code, _, err = cli("validate", "--category", extra)
    assert code == 65 and "junk" in err


def test_budget_env(instances, monkeypatch):
    monkeypatch.setenv("DESPLA_BUDGET", json.dumps({"comma_objects": 2}))
    code, _, err = cli("displace", "--functor", instances / "pointed3-forget.json",
                       "--object", "2@0", "--morphism", "2>3:01")
    assert code == 69 and err


def test_bad_budget_is_usage_error(instances, monkeypatch):
    monkeypatch.setenv("DESPLA_BUDGET", "not a budget")
    assert cli("opfib-check", "--functor", instances / "pointed2-forget.json")[0] == 64


def test_validate_category_ok(instances):
    code, rep, _ = cli("validate", "--category", instances / "pointed2.json")
    assert code == 0 and rep["violations"] == []
