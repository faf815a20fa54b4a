"""JSON files for categories, functors, marks, adjunctions and crossing data.

Files refer to objects and morphisms by name.  A :class:`Loader` caches
every category it reads, keyed by resolved path (or by content for inline
categories), so functors that name the same codomain file share one
in-memory category, which the pseudopullback and descent code rely on.
"""
import json
from collections import namedtuple
from pathlib import Path

from .adjunction import build_adjunction, validate_adjunction
from .colimits import ChainData, CrossingData
from .descent import closure_violations, marked_class
from .errors import DesplaError, InvalidCategory
from .fincat import FinCategory, FunctorData, validate_category, validate_functor


class FileFormatError(DesplaError):
    """A file is not valid JSON or does not follow its schema."""


CATEGORY_KEYS = {"objects", "morphisms", "identities", "composition"}
FUNCTOR_KEYS = {"dom", "cod", "on_objects", "on_morphisms"}
MARKS_KEYS = {"cofibrations", "trivial_cofibrations", "weak_equivalences"}
ADJUNCTION_KEYS = {"right", "window", "left_on_objects", "unit"}
CROSSING_KEYS = {"category", "chain_c", "chain_d", "eta", "epsilon"}

LoadedMarks = namedtuple("LoadedMarks", "marks weak_equivalences violations")


# names ------------------------------------------------------------------------

def _unique(labels):
    out, seen = [], {}
    for lab in labels:
        lab = str(lab)
        name = lab
        while name in seen:
            seen[lab] = seen.get(lab, 0) + 1
            name = f"{lab}#{seen[lab]}"
        seen.setdefault(name, 0)
        out.append(name)
    return out


def object_names(c):
    """Object labels made unique, as written to files and reports."""
    names = getattr(c, "_object_names", None)
    if names is None:
        names = c._object_names = _unique(c.obj_labels)
    return names


def morphism_names(c):
    names = getattr(c, "_morphism_names", None)
    if names is None:
        names = c._morphism_names = _unique(c.mor_labels)
    return names


def resolve_object(c, name):
    table = getattr(c, "_object_lookup", None)
    if table is None:
        table = c._object_lookup = {n: i for i, n in enumerate(object_names(c))}
    try:
        return table[name]
    except KeyError:
        raise FileFormatError(f"unknown object {name!r} in {c.name or 'category'}") from None


def resolve_morphism(c, name):
    table = getattr(c, "_morphism_lookup", None)
    if table is None:
        table = c._morphism_lookup = {n: i for i, n in enumerate(morphism_names(c))}
    try:
        return table[name]
    except KeyError:
        raise FileFormatError(f"unknown morphism {name!r} in {c.name or 'category'}") from None


def obj_name(c, a):
    return object_names(c)[a]


def mor_name(c, m):
    return morphism_names(c)[m]


# writing ------------------------------------------------------------------------

def category_to_json(c):
    on, mn = object_names(c), morphism_names(c)
    ids = set(c.ids)
    comp = [{"after": mn[g], "before": mn[f], "equals": mn[c._compose(g, f)]}
            for f in c.morphisms if f not in ids
            for g in c.out_of(c.tgt[f]) if g not in ids]
    return {
        "objects": list(on),
        "morphisms": [{"name": mn[m], "src": on[c.src[m]], "tgt": on[c.tgt[m]]}
                      for m in c.morphisms],
        "identities": {on[a]: mn[c.ids[a]] for a in c.objects},
        "composition": comp,
    }


def functor_to_json(F, dom=None, cod=None):
    """``dom``/``cod`` may be path strings; the categories are inlined otherwise."""
    return {
        "dom": dom if dom is not None else category_to_json(F.dom),
        "cod": cod if cod is not None else category_to_json(F.cod),
        "on_objects": {obj_name(F.dom, a): obj_name(F.cod, F.obj_map[a]) for a in F.dom.objects},
        "on_morphisms": {mor_name(F.dom, m): mor_name(F.cod, F.mor_map[m])
                         for m in F.dom.morphisms},
    }


def marks_to_json(c, cofibrations, trivial_cofibrations, weak_equivalences=None):
    doc = {"cofibrations": [mor_name(c, m) for m in sorted(cofibrations)],
           "trivial_cofibrations": [mor_name(c, m) for m in sorted(trivial_cofibrations)]}
    if weak_equivalences is not None:
        doc["weak_equivalences"] = [mor_name(c, m) for m in sorted(weak_equivalences)]
    return doc


def adjunction_to_json(adj, right=None):
    """``right`` may be a path string for the right adjoint's functor file."""
    B, E = adj.base, adj.total
    window = list(adj.window_objects)
    return {
        "right": right if right is not None else functor_to_json(adj.right),
        "window": [obj_name(B, b) for b in window],
        "left_on_objects": {obj_name(B, b): obj_name(E, adj.gamma(b)) for b in window},
        "unit": {obj_name(B, b): mor_name(B, adj.unit_at(b)) for b in window},
    }


def dumps(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_json(doc, path):
    Path(path).write_text(dumps(doc), encoding="utf-8")


# reading --------------------------------------------------------------------------

def _check_keys(doc, allowed, required, what):
    if not isinstance(doc, dict):
        raise FileFormatError(f"{what} must be a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise FileFormatError(f"unknown keys in {what}: {', '.join(sorted(unknown))}")
    missing = set(required) - set(doc)
    if missing:
        raise FileFormatError(f"missing keys in {what}: {', '.join(sorted(missing))}")


def _str_list(x, what):
    if not isinstance(x, list) or not all(isinstance(s, str) for s in x):
        raise FileFormatError(f"{what} must be a list of names")
    return x


def _str_map(x, what):
    if not isinstance(x, dict) or not all(isinstance(v, str) for v in x.values()):
        raise FileFormatError(f"{what} must map names to names")
    return x


def category_from_json(doc, name=None, validate=True, budget=None):
    """Parse a CategoryFile document.

    Composites with an identity may be omitted.  With ``validate`` the result
    must pass :func:`validate_category`; otherwise violations are left for
    the caller to report.
    """
    _check_keys(doc, CATEGORY_KEYS, CATEGORY_KEYS - {"composition"}, "category file")
    objects = _str_list(doc["objects"], "objects")
    if len(set(objects)) != len(objects):
        raise FileFormatError("object names are not unique")
    opos = {o: i for i, o in enumerate(objects)}
    mors, mpos = [], {}
    if not isinstance(doc["morphisms"], list):
        raise FileFormatError("morphisms must be a list")
    for entry in doc["morphisms"]:
        if not isinstance(entry, dict) or set(entry) != {"name", "src", "tgt"}:
            raise FileFormatError(f"morphism entries need exactly name, src, tgt: {entry!r}")
        n = entry["name"]
        if n in mpos:
            raise FileFormatError(f"duplicate morphism name {n!r}")
        for end in ("src", "tgt"):
            if entry[end] not in opos:
                raise FileFormatError(f"morphism {n!r} has unknown {end} {entry[end]!r}")
        mpos[n] = len(mors)
        mors.append((opos[entry["src"]], opos[entry["tgt"]], n))
    ids_doc = _str_map(doc["identities"], "identities")
    if set(ids_doc) != set(objects):
        raise FileFormatError("identities must name exactly one morphism per object")
    ids = []
    for o in objects:
        m = mpos.get(ids_doc[o])
        if m is None:
            raise FileFormatError(f"identity of {o!r} is an unknown morphism")
        ids.append(m)
    table = {}
    for entry in doc.get("composition", []):
        if not isinstance(entry, dict) or set(entry) != {"after", "before", "equals"}:
            raise FileFormatError(f"composition entries need after, before, equals: {entry!r}")
        try:
            key = (mpos[entry["after"]], mpos[entry["before"]])
            value = mpos[entry["equals"]]
        except KeyError as err:
            raise FileFormatError(f"composition names unknown morphism {err.args[0]!r}") from None
        if key in table and table[key] != value:
            raise FileFormatError(f"conflicting composites for {entry['after']}∘{entry['before']}")
        table[key] = value
    for o, i in zip(objects, ids):
        a = opos[o]
        if mors[i][0] != a or mors[i][1] != a:
            raise FileFormatError(f"identity of {o!r} is not an endomorphism of {o!r}")
    for m, (s, t, _) in enumerate(mors):
        table.setdefault((m, ids[s]), m)
        table.setdefault((ids[t], m), m)
    missing = [(g, f) for f in range(len(mors)) for g in range(len(mors))
               if mors[f][1] == mors[g][0] and (g, f) not in table]
    if missing:
        g, f = missing[0]
        raise InvalidCategory(f"composite {mors[g][2]}∘{mors[f][2]} is missing"
                              f" ({len(missing)} missing in all)")
    c = FinCategory.from_table(len(objects), mors, ids, table, obj_labels=objects, name=name)
    if validate:
        problems = validate_category(c, budget)
        if problems:
            raise InvalidCategory(f"{len(problems)} category law violations; first: "
                                  f"{problems[0].message}", problems)
    return c


def functor_from_parts(dom, cod, on_objects, on_morphisms, name=None, validate=True):
    on_objects = _str_map(on_objects, "on_objects")
    on_morphisms = _str_map(on_morphisms, "on_morphisms")
    if set(on_objects) != set(object_names(dom)):
        raise FileFormatError("on_objects must cover every domain object")
    if set(on_morphisms) != set(morphism_names(dom)):
        raise FileFormatError("on_morphisms must cover every domain morphism")
    obj = [resolve_object(cod, on_objects[n]) for n in object_names(dom)]
    mor = [resolve_morphism(cod, on_morphisms[n]) for n in morphism_names(dom)]
    F = FunctorData(dom, cod, obj, mor, name=name)
    if validate:
        problems = validate_functor(F)
        if problems:
            raise InvalidCategory(f"not a functor: {problems[0].message}", problems)
    return F


class Loader:
    """Reads files relative to their own location and shares repeated categories."""

    def __init__(self, budget=None):
        self.budget = budget
        self._categories = {}

    def read(self, path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as err:
            raise FileFormatError(f"cannot read {path}: {err.strerror}") from None
        try:
            return json.loads(text)
        except json.JSONDecodeError as err:
            raise FileFormatError(f"{path}: invalid JSON ({err.msg} at line {err.lineno})") from None

    def category(self, ref, base=Path("."), validate=True):
        """``ref`` is a path (relative to ``base``) or an inline CategoryFile."""
        if isinstance(ref, (str, Path)):
            path = (Path(base) / ref).resolve()
            key = ("path", str(path))
            if key not in self._categories:
                self._categories[key] = category_from_json(
                    self.read(path), name=path.stem, validate=validate, budget=self.budget)
            return self._categories[key]
        key = ("inline", json.dumps(ref, sort_keys=True))
        if key not in self._categories:
            self._categories[key] = category_from_json(ref, validate=validate,
                                                       budget=self.budget)
        return self._categories[key]

    def functor(self, ref, base=Path("."), validate=True):
        if isinstance(ref, (str, Path)):
            path = Path(base) / ref
            doc, base, name = self.read(path), path.parent, path.stem
        else:
            doc, name = ref, None
        _check_keys(doc, FUNCTOR_KEYS, FUNCTOR_KEYS, "functor file")
        dom = self.category(doc["dom"], base, validate)
        cod = self.category(doc["cod"], base, validate)
        return functor_from_parts(dom, cod, doc["on_objects"], doc["on_morphisms"], name=name,
                                  validate=validate)

    def marks(self, ref, ambient, base=Path(".")):
        """Marked classes in ``ambient``, with their closure violations."""
        doc = self.read(Path(base) / ref) if isinstance(ref, (str, Path)) else ref
        return marks_from_json(doc, ambient, self.budget)

    def adjunction(self, ref, base=Path(".")):
        """An adjunction file; without ``left_on_objects`` the left adjoint is searched for."""
        from .displacement import left_adjoint_via_displacements

        if isinstance(ref, (str, Path)):
            path = Path(base) / ref
            doc, base = self.read(path), path.parent
        else:
            doc = ref
        _check_keys(doc, ADJUNCTION_KEYS, {"right"}, "adjunction file")
        p = self.functor(doc["right"], base)
        E, B = p.dom, p.cod
        window = ([resolve_object(B, n) for n in _str_list(doc["window"], "window")]
                  if "window" in doc else list(B.objects))
        if ("left_on_objects" in doc) != ("unit" in doc):
            raise FileFormatError("left_on_objects and unit go together")
        if "unit" not in doc:
            adj = left_adjoint_via_displacements(p, window, self.budget)
            if adj is None:
                raise FileFormatError("the right adjoint has no left adjoint on this window")
            return adj
        left = _str_map(doc["left_on_objects"], "left_on_objects")
        unit = _str_map(doc["unit"], "unit")
        names = [obj_name(B, b) for b in window]
        if set(left) != set(names) or set(unit) != set(names):
            raise FileFormatError("left_on_objects and unit must cover the window")
        try:
            adj = build_adjunction(p, window, [resolve_object(E, left[n]) for n in names],
                                   [resolve_morphism(B, unit[n]) for n in names])
        except ValueError as err:
            raise FileFormatError(f"unit is not universal: {err}") from None
        problems = validate_adjunction(adj)
        if problems:
            raise FileFormatError(f"not an adjunction: {problems[0].message}")
        return adj

    def crossing(self, ref, base=Path(".")):
        """A crossing file: the category and the interleaved chains by name."""
        if isinstance(ref, (str, Path)):
            path = Path(base) / ref
            doc, base = self.read(path), path.parent
        else:
            doc = ref
        _check_keys(doc, CROSSING_KEYS, CROSSING_KEYS, "crossing file")
        c = self.category(doc["category"], base)

        def chain(x, what):
            if not isinstance(x, dict) or set(x) != {"objects", "links"}:
                raise FileFormatError(f"{what} needs exactly objects and links")
            return ChainData(tuple(resolve_object(c, n) for n in _str_list(x["objects"], what)),
                             tuple(resolve_morphism(c, n) for n in _str_list(x["links"], what)))

        return c, CrossingData(chain(doc["chain_c"], "chain_c"), chain(doc["chain_d"], "chain_d"),
                               tuple(resolve_morphism(c, n) for n in _str_list(doc["eta"], "eta")),
                               tuple(resolve_morphism(c, n)
                                     for n in _str_list(doc["epsilon"], "epsilon")))


def marks_from_json(doc, ambient, budget=None):
    _check_keys(doc, MARKS_KEYS, {"cofibrations", "trivial_cofibrations"}, "marks file")
    cls = {k: frozenset(resolve_morphism(ambient, n) for n in _str_list(doc[k], k))
           for k in MARKS_KEYS if k in doc}
    marks = marked_class(ambient, cls["cofibrations"], cls["trivial_cofibrations"])
    violations = []
    for name in ("cofibrations", "trivial_cofibrations"):
        violations.extend(closure_violations(ambient, cls[name], name, budget=budget))
    weak = cls.get("weak_equivalences")
    if weak is not None:
        violations.extend(closure_violations(ambient, weak, "weak_equivalences", cobase=False,
                                             budget=budget))
    return LoadedMarks(marks, weak, violations)


def load_category(path, validate=True, budget=None):
    return Loader(budget).category(path, validate=validate)


def load_functor(path, budget=None):
    return Loader(budget).functor(path)
