"""Command line front end.

Every subcommand prints a JSON report on standard output and a one-line
summary on standard error.  Exit codes: 0 for a true verdict, 1 for a false
one, 2 for engine errors, 64 for usage errors, 65 for unreadable input and
69 when a search budget runs out.
"""
import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from . import generators as gen
from .budget import Budget, reset_usage, usage
from .colimits import crossing_check
from .descent import (DEFAULT_MAX_STAGES, check_left_perfect, crossing_data, descend,
                      intersect_adjoints, verify_descent_universal)
from .displacement import (adjoint_window, all_displacements, displace, is_street_opfibration,
                           left_adjoint_via_displacements)
from .errors import BudgetExceeded, DesplaError, InvalidCategory
from .fincat import (FunctorData, compose_functors, is_isomorphism, validate_category,
                     validate_functor)
from .files import (FileFormatError, Loader, adjunction_to_json, category_to_json, dumps,
                    functor_to_json, mor_name, obj_name, resolve_morphism, resolve_object,
                    write_json)
from .join import (adjoined_map, assemble_bridge, check_join_preserves_pseudopullback, decompose_bridge,
                   join_one, recognize_join)
from .pullback import pseudopullback, validate_pseudopullback
from .transfer import model_marks, transfer_condition_check

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_BUDGET = 64, 65, 69

MONOIDS = {"trivial": gen.cyclic_monoid(1), "z2": gen.cyclic_monoid(2),
           "z3": gen.cyclic_monoid(3), "z4": gen.cyclic_monoid(4),
           "idem": [[0, 1], [1, 1]]}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outcome:
    """Report body, verdict and summary line of one subcommand."""

    def __init__(self, report, verdict=True, summary=""):
        self.report = report
        self.verdict = verdict
        self.summary = summary


# helpers --------------------------------------------------------------------------

def _names(c, xs):
    return [mor_name(c, x) for x in xs]


def _morphism_of(c, name, what="morphism"):
    try:
        return resolve_morphism(c, name)
    except FileFormatError as err:
        raise UsageError(f"{what}: {err}") from None


def _object_of(c, name, what="object"):
    try:
        return resolve_object(c, name)
    except FileFormatError as err:
        raise UsageError(f"{what}: {err}") from None


def _start_check(p, e, eps):
    if p.cod.src[eps] != p.obj_map[e]:
        raise UsageError(f"{mor_name(p.cod, eps)} does not start at p({obj_name(p.dom, e)})")


def _displacement_json(p, r):
    E, B = p.dom, p.cod
    return {
        "apex": obj_name(E, r.apex),
        "unit": mor_name(E, r.unit_e),
        "base_unit": mor_name(B, r.base_unit),
        "base_unit_invertible": is_isomorphism(B, r.base_unit)[0],
        "certificate": {
            "comma_object": mor_name(E, r.certificate.comma_object),
            "element": mor_name(B, r.certificate.element),
            "size": len(r.certificate.table),
            "rows": [[mor_name(E, k), mor_name(E, h), mor_name(B, q)]
                     for k, h, q in r.certificate.table],
        },
    }


def _family(loader, paths):
    fam = [loader.functor(p) for p in paths]
    if any(p.cod is not fam[0].cod for p in fam):
        raise UsageError("family members must name the same codomain file")
    return fam


def _window(base, names):
    return None if names is None else [_object_of(base, n, "window") for n in names]


def _adjunction_json(adj):
    E, B = adj.total, adj.base
    ew = adj.ew_inc.obj_map
    return {
        "window": [obj_name(B, b) for b in adj.window_objects],
        "left_on_objects": {obj_name(B, b): obj_name(E, adj.gamma(b)) for b in adj.window_objects},
        "unit": {obj_name(B, b): mor_name(B, adj.unit_at(b)) for b in adj.window_objects},
        "counit": {obj_name(E, e): mor_name(E, adj.counit_at(e)) for e in ew},
    }


# subcommands ------------------------------------------------------------------------

def cmd_generate(args, loader):
    budget = loader.budget
    kind = args.kind
    if kind in ("finset", "walking-arrow"):
        c = gen.finset(args.size, budget) if kind == "finset" else gen.walking_arrow()
        doc = category_to_json(c)
        files = {args.out: doc} if args.out else {}
        summary = f"{c.name}: {c.n_objects} objects, {c.n_morphisms} morphisms"
    elif kind in ("pointed", "mset"):
        if kind == "pointed":
            cat, p = gen.pointed(args.size, skeletal=args.skeletal, budget=budget)
            stem = f"pointed{args.size}"
        else:
            table = _monoid(args.monoid)
            cat, p = gen.mset(table, args.carrier, skeletal=args.skeletal, budget=budget)
            stem = f"mset-{args.monoid}-{args.carrier}"
        if args.skeletal:
            stem += "s"
        files = {}
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            base_file = f"finset{p.cod.n_objects - 1}.json"
            files[out / base_file] = category_to_json(p.cod)
            files[out / f"{stem}.json"] = category_to_json(cat)
            doc = functor_to_json(p, dom=f"{stem}.json", cod=base_file)
            files[out / f"{stem}-forget.json"] = doc
        else:
            doc = functor_to_json(p)
        summary = (f"{cat.name}: {cat.n_objects} objects, {cat.n_morphisms} morphisms,"
                   f" forgetful functor to {p.cod.name}")
    else:  # join-demo: [n] -> 1<[n-1], first object to the adjoined one
        a = gen.chain_shape(args.size + 1)
        jc = join_one(gen.chain_shape(args.size))
        obj = [jc.zero] + list(range(args.size))
        mor = []
        for m in a.morphisms:
            s, t = a.src[m], a.tgt[m]
            if s == 0:
                mor.append(adjoined_map(jc, obj[t]))
            else:
                mor.append(jc.inner.hom(obj[s], obj[t])[0])
        f = FunctorData(a, jc.joined, obj, mor, name="bridge")
        problems = validate_functor(f)
        if problems:
            raise AssertionError(problems[0].message)
        doc = functor_to_json(f)
        files = {args.out: doc} if args.out else {}
        summary = f"bridge functor {a.name} -> {jc.joined.name}"
    for path, d in files.items():
        write_json(d, path)
    report = {"kind": kind, "written": [str(p) for p in files]} if files else doc
    return Outcome(report, True, summary)


def _monoid(text):
    table = MONOIDS.get(text)
    if table is None:
        try:
            table = json.loads(text)
        except json.JSONDecodeError:
            raise UsageError(f"monoid must be one of {', '.join(MONOIDS)} or a JSON table") from None
    n = len(table) if isinstance(table, list) else 0
    ok = (n > 0 and all(isinstance(r, list) and len(r) == n for r in table)
          and all(isinstance(x, int) and 0 <= x < n for r in table for x in r))
    ok = ok and all(table[0][g] == g and table[g][0] == g for g in range(n))
    ok = ok and all(table[table[a][b]][c] == table[a][table[b][c]]
                    for a in range(n) for b in range(n) for c in range(n))
    if not ok:
        raise UsageError("monoid table must be associative with identity 0")
    return table


def cmd_validate(args, loader):
    given = [x for x in (args.category, args.functor, args.adjunction) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --category, --functor, --adjunction")
    out = []
    if args.category:
        c = loader.category(args.category, validate=False)
        out = validate_category(c, loader.budget)
        what, subject = "category", c
    elif args.functor:
        p = loader.functor(args.functor, validate=False)
        out = (validate_category(p.dom, loader.budget) + validate_category(p.cod, loader.budget))
        if not out:
            out = validate_functor(p)
        what, subject = "functor", p.cod
    else:
        adj = loader.adjunction(args.adjunction)
        what, subject = "adjunction", adj.base
    marks_report = None
    if args.marks:
        lm = loader.marks(args.marks, subject)
        out = out + lm.violations
        marks_report = {"violations": len(lm.violations)}
    report = {"subject": what, "valid": not out,
              "violations": [{"kind": v.kind, "morphisms": list(v.morphisms), "message": v.message}
                             for v in out]}
    if marks_report:
        report["marks"] = marks_report
    return Outcome(report, not out, f"{what}: {'valid' if not out else f'{len(out)} violations'}")


def cmd_displace(args, loader):
    p = loader.functor(args.functor)
    e = _object_of(p.dom, args.object)
    eps = _morphism_of(p.cod, args.morphism)
    _start_check(p, e, eps)
    if args.all:
        rs = all_displacements(p, e, eps, loader.budget)
    else:
        r = displace(p, e, eps, loader.budget)
        rs = [] if r is None else [r]
    report = {"object": args.object, "morphism": args.morphism, "exists": bool(rs)}
    if rs:
        report.update(_displacement_json(p, rs[0]))
    if args.all:
        report["all"] = [_displacement_json(p, r) for r in rs]
    summary = (f"displacement of {args.object} along {args.morphism}: "
               + (f"{report['apex']} via {report['unit']}" if rs else "none"))
    return Outcome(report, bool(rs), summary)


def cmd_opfib(args, loader):
    p = loader.functor(args.functor)
    v = is_street_opfibration(p, loader.budget)
    report = {"opfibration": v.is_opfib,
              "failures": [{"object": obj_name(p.dom, e), "morphism": mor_name(p.cod, eps),
                            "reason": why} for e, eps, why in v.failures]}
    return Outcome(report, v.is_opfib,
                   "Street opfibration" if v.is_opfib else f"{len(v.failures)} failures")


def cmd_adjoint(args, loader):
    if bool(args.functor) == bool(args.family):
        raise UsageError("give either --functor or --family")
    if args.family:
        fam = _family(loader, args.family)
        window = _window(fam[0].cod, args.window)
        adj = intersect_adjoints(fam, window, args.max_stages, budget=loader.budget)
        method = "descent"
    else:
        p = loader.functor(args.functor)
        window = _window(p.cod, args.window)
        if args.auto_window:
            window = adjoint_window(p, loader.budget)
        adj = left_adjoint_via_displacements(p, window, loader.budget)
        method = "displacement"
    if adj is None:
        return Outcome({"exists": False, "method": method}, False,
                       "no left adjoint on this window")
    report = {"exists": True, "method": method, **_adjunction_json(adj)}
    if args.write:
        # a single right adjoint is referenced by path rather than inlined
        right = (os.path.relpath(args.functor, os.path.dirname(os.path.abspath(args.write)))
                 if args.functor else None)
        write_json(adjunction_to_json(adj, right), args.write)
        report["written"] = args.write
    return Outcome(report, True, f"left adjoint on {len(adj.window_objects)} base objects")


def cmd_join(args, loader):
    if bool(args.category) == bool(args.family):
        raise UsageError("give either --category or --family")
    if args.category:
        jc = join_one(loader.category(args.category))
        doc = category_to_json(jc.joined)
        if args.write:
            write_json(doc, args.write)
        return Outcome({"zero": obj_name(jc.joined, jc.zero), "category": doc}, True,
                       f"1<C: {jc.joined.n_objects} objects, {jc.joined.n_morphisms} morphisms")
    fam = _family(loader, args.family)
    v = check_join_preserves_pseudopullback(fam, loader.budget)
    report = {"preserved": v.holds,
              "join_of_pullback": [v.left.n_objects, v.left.n_morphisms],
              "pullback_of_joins": [v.right.n_objects, v.right.n_morphisms]}
    return Outcome(report, v.holds, "join preserves the pseudopullback" if v.holds
                   else "join does not preserve the pseudopullback")


def cmd_bridge(args, loader):
    f = loader.functor(args.functor)
    jc, iso = recognize_join(f.cod)
    g = compose_functors(iso, f)
    d = decompose_bridge(g, verify_square=not args.no_square, budget=loader.budget)
    back = assemble_bridge(g.dom, d)
    round_trip = back.obj_map == g.obj_map and back.mor_map == g.mor_map
    A, Bc = f.dom, jc.inner
    report = {
        "zero": obj_name(f.cod, iso.obj_map.index(jc.zero)),
        "a_minus": [obj_name(A, a) for a in d.a_minus],
        "a_plus": [obj_name(A, a) for a in d.a_plus],
        "f_plus": {"on_objects": {obj_name(A, a): obj_name(Bc, d.f_plus.obj_map[i])
                                  for i, a in enumerate(d.a_plus)}},
        "square_is_pseudopullback": None if args.no_square else True,
        "round_trip": round_trip,
    }
    return Outcome(report, round_trip,
                   f"bridge: {len(d.a_minus)} objects to zero, {len(d.a_plus)} to the inner part")


def cmd_pullback(args, loader):
    fam = _family(loader, args.family)
    pp = pseudopullback(fam, loader.budget)
    T = pp.total
    report = {"objects": T.n_objects, "morphisms": T.n_morphisms}
    if args.list_objects:
        report["object_names"] = [obj_name(T, x) for x in T.objects]
    verdict = True
    if args.validate:
        problems = validate_pseudopullback(pp)
        report["violations"] = [v.message for v in problems]
        verdict = not problems
    if args.write:
        write_json(functor_to_json(pp.canonical), args.write)
        report["written"] = args.write
    return Outcome(report, verdict, f"pseudopullback: {T.n_objects} objects, "
                                    f"{T.n_morphisms} morphisms")


def _trace_json(pp, tr):
    B = pp.base
    comps = pp.components
    stages = []
    for st in tr.stages:
        stages.append({
            "k": st.k,
            "b": obj_name(B, st.b_k),
            "e": [obj_name(p.dom, x) for p, x in zip(comps, st.e_jk)],
            "eps": _names(B, st.eps_jk),
            "eta": [mor_name(p.dom, x) for p, x in zip(comps, st.eta_jk)],
            "delta": _names(B, st.delta_jk),
            "iota": None if st.iota_k is None else mor_name(B, st.iota_k),
        })
    return {"stabilized_at": tr.stabilized_at, "stages": stages}


def cmd_descend(args, loader):
    fam = _family(loader, args.family)
    pp = pseudopullback(fam, loader.budget)
    T, B = pp.total, pp.base
    e = _object_of(T, args.object)
    eps = _morphism_of(B, args.morphism)
    _start_check(pp.canonical, e, eps)
    try:
        tr = descend(pp, e, eps, args.max_stages, loader.budget)
    except DesplaError as err:
        partial = getattr(err, "trace", None)
        if partial is not None:
            err.report = {"partial_trace": _trace_json(pp, partial)}
        raise
    report = _trace_json(pp, tr)
    report["result"] = _displacement_json(pp.canonical, tr.result)
    verdict = True
    if not args.no_verify:
        report["universal"] = verify_descent_universal(pp, e, eps, tr, loader.budget)
        crossing = []
        for j in range(len(fam)):
            v = crossing_check(B, crossing_data(pp, tr, j), loader.budget)
            crossing.append(v.isomorphic and v.mutually_inverse)
        report["crossing"] = crossing
        verdict = all(crossing)
    return Outcome(report, verdict, f"stabilized at stage {tr.stabilized_at}, apex "
                                    f"{report['result']['apex']}")


def cmd_crossing(args, loader):
    c, x = loader.crossing(args.crossing)
    v = crossing_check(c, x, loader.budget)
    report = {"isomorphic": v.isomorphic, "mutually_inverse": v.mutually_inverse,
              "eta_inf": mor_name(c, v.eta_inf), "epsilon_inf": mor_name(c, v.epsilon_inf),
              "colimit_c": obj_name(c, v.colimit_c.apex),
              "colimit_d": obj_name(c, v.colimit_d.apex)}
    ok = v.isomorphic and v.mutually_inverse
    return Outcome(report, ok, "colimits are isomorphic" if ok else "colimits differ")


def cmd_left_perfect(args, loader):
    p = loader.functor(args.functor)
    cod = loader.marks(args.marks, p.cod)
    dom = loader.marks(args.dom_marks, p.dom).marks if args.dom_marks else None
    e = None if args.object is None else _object_of(p.dom, args.object)
    v = check_left_perfect(p, dom, cod.marks, e, loader.budget)
    report = {"left_perfect": v.perfect,
              "marks_violations": [x.message for x in cod.violations],
              "failures": [{"object": obj_name(p.dom, x), "morphism": mor_name(p.cod, eps),
                            "class": name} for x, eps, name in v.failures],
              "instances": len(v.labels)}
    return Outcome(report, v.perfect, "left perfect" if v.perfect
                   else f"{len(v.failures)} failures")


def cmd_transfer(args, loader):
    adj = loader.adjunction(args.adjunction)
    B, E = adj.base, adj.total
    lm = loader.marks(args.marks, B)
    weak = lm.weak_equivalences
    if weak is None:
        weak = frozenset(m for m in B.morphisms if is_isomorphism(B, m)[0])
    v = transfer_condition_check(adj, model_marks(lm.marks, weak), args.reading, loader.budget)
    report = {
        "holds": v.holds,
        "reading": args.reading,
        "marks_violations": [x.message for x in lm.violations],
        "failures": [{"object": obj_name(E, e), "morphism": mor_name(B, eps)}
                     for e, eps in v.failures],
        "unchecked": [{"object": obj_name(E, e), "morphism": mor_name(B, eps), "reason": why}
                      for e, eps, why in v.unchecked],
        "instances": [{"object": obj_name(E, i["object"]), "morphism": mor_name(B, i["eps"]),
                       "unit": mor_name(E, i["unit"]), "apex": obj_name(E, i["apex"]),
                       "method": i["method"], "ok": i["ok"]} for i in v.instances],
    }
    return Outcome(report, v.holds, "transfer condition holds" if v.holds
                   else f"transfer condition fails at {len(v.failures)} instances")


# parser ------------------------------------------------------------------------------

def build_parser():
    ap = _Parser(prog="despla", description="Displacements along functors of finite categories.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--budget", help="search caps as JSON or key=value pairs "
                                     "(on top of DESPLA_BUDGET)")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("generate", help="write a builtin instance")
    g.add_argument("kind", choices=["finset", "pointed", "mset", "walking-arrow", "join-demo"])
    g.add_argument("--size", type=int, default=2)
    g.add_argument("--monoid", default="z2")
    g.add_argument("--carrier", type=int, default=2)
    g.add_argument("--skeletal", action="store_true")
    g.add_argument("--out", help="file (or directory for pointed and mset)")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="check category, functor or adjunction laws")
    v.add_argument("--category")
    v.add_argument("--functor")
    v.add_argument("--adjunction")
    v.add_argument("--marks", help="also check closure of a marks file on the codomain")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("displace", help="search the displacement of an object along a morphism")
    d.add_argument("--functor", required=True)
    d.add_argument("--object", required=True)
    d.add_argument("--morphism", required=True)
    d.add_argument("--all", action="store_true", help="list every corepresenting comma object")
    d.set_defaults(func=cmd_displace)

    o = sub.add_parser("opfib-check", help="is the functor a Street opfibration")
    o.add_argument("--functor", required=True)
    o.set_defaults(func=cmd_opfib)

    a = sub.add_parser("adjoint", help="synthesize a left adjoint")
    a.add_argument("--functor")
    a.add_argument("--family", nargs="+")
    a.add_argument("--window", nargs="*", help="base objects where the adjoint is wanted")
    a.add_argument("--auto-window", action="store_true",
                   help="use every base object with a universal arrow")
    a.add_argument("--max-stages", type=int, default=DEFAULT_MAX_STAGES)
    a.add_argument("--write", help="write an adjunction file")
    a.set_defaults(func=cmd_adjoint)

    j = sub.add_parser("join", help="build 1<C or compare joins with pseudopullbacks")
    j.add_argument("--category")
    j.add_argument("--family", nargs="+")
    j.add_argument("--write")
    j.set_defaults(func=cmd_join)

    b = sub.add_parser("bridge", help="decompose a functor into a joined category")
    b.add_argument("--functor", required=True)
    b.add_argument("--no-square", action="store_true", help="skip the pseudopullback check")
    b.set_defaults(func=cmd_bridge)

    pb = sub.add_parser("pullback", help="build the pseudopullback of a family")
    pb.add_argument("--family", nargs="+", required=True)
    pb.add_argument("--list-objects", action="store_true")
    pb.add_argument("--validate", action="store_true")
    pb.add_argument("--write", help="write the canonical projection as a functor file")
    pb.set_defaults(func=cmd_pullback)

    ds = sub.add_parser("descend", help="displacement in a pseudopullback by descent")
    ds.add_argument("--family", nargs="+", required=True)
    ds.add_argument("--object", required=True, help="pseudopullback object name")
    ds.add_argument("--morphism", required=True)
    ds.add_argument("--max-stages", type=int, default=DEFAULT_MAX_STAGES)
    ds.add_argument("--no-verify", action="store_true")
    ds.set_defaults(func=cmd_descend)

    c = sub.add_parser("crossing-check", help="compare the colimits of interleaved chains")
    c.add_argument("--crossing", required=True)
    c.set_defaults(func=cmd_crossing)

    lp = sub.add_parser("left-perfect", help="do displacement base units keep the marking")
    lp.add_argument("--functor", required=True)
    lp.add_argument("--marks", required=True, help="marks on the codomain")
    lp.add_argument("--dom-marks")
    lp.add_argument("--object")
    lp.set_defaults(func=cmd_left_perfect)

    t = sub.add_parser("transfer-check", help="test the transfer condition")
    t.add_argument("--adjunction", required=True)
    t.add_argument("--marks", required=True)
    t.add_argument("--reading", choices=["unit", "base"], default="unit")
    t.set_defaults(func=cmd_transfer)
    return ap


def run(argv, stdout=None, stderr=None):
    """Run one subcommand; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        budget = Budget.from_env()
        if args.budget:
            budget = budget.override(**Budget.parse(args.budget))
    except UsageError as err:
        print(f"despla: usage error: {err}", file=stderr)
        return EXIT_USAGE
    except ValueError as err:
        print(f"despla: bad budget: {err}", file=stderr)
        return EXIT_USAGE
    reset_usage()
    loader = Loader(budget)
    envelope = {"command": args.command}
    try:
        out = args.func(args, loader)
    except UsageError as err:
        print(f"despla: usage error: {err}", file=stderr)
        return EXIT_USAGE
    except (FileFormatError, InvalidCategory) as err:
        print(f"despla: cannot read input: {err}", file=stderr)
        return EXIT_DATA
    except BudgetExceeded as err:
        envelope.update({"error": "BudgetExceeded", "message": str(err), "what": err.what,
                         "limit": err.limit, "budget_used": usage()})
        stdout.write(dumps(envelope))
        print(f"despla: {err}", file=stderr)
        return EXIT_BUDGET
    except DesplaError as err:
        envelope.update({"error": type(err).__name__, "message": str(err)})
        envelope.update(getattr(err, "report", {}))
        envelope["budget_used"] = usage()
        stdout.write(dumps(envelope))
        print(f"despla: {type(err).__name__}: {err}", file=stderr)
        return EXIT_ERROR
    if args.command == "generate" and "written" not in out.report:
        stdout.write(dumps(out.report))
    else:
        envelope["verdict"] = out.verdict
        envelope.update(out.report)
        envelope["budget"] = asdict(budget)
        envelope["budget_used"] = usage()
        stdout.write(dumps(envelope))
    print(out.summary, file=stderr)
    return EXIT_TRUE if out.verdict else EXIT_FALSE


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))
