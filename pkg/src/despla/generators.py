"""Builtin finite instances.

Everything here is a small concrete category whose morphisms are functions
between finite sets ``{0, ..., k-1}`` (keys are image tuples), together with
the forgetful functors into :func:`finset` and the closed-form free
constructions used as oracles in tests.
"""
from itertools import permutations, product

from .adjunction import build_adjunction
from .budget import resolve
from .errors import BudgetExceeded
import numpy as np

from .fincat import CodeIndex, FinCategory, FunctorData


def _compose_functions(g, f):
    return tuple(g[i] for i in f)


def _fun_label(a, b, f):
    return f"{a}>{b}:" + "".join(str(x) for x in f)


def function_category(objects, admissible=None, name=None):
    """Concrete category of finite sets with extra structure.

    ``objects`` is a list of ``(size, structure, label)``; ``admissible(sa,
    sb, f)`` decides whether the function ``f`` (an image tuple) is a morphism
    between structures ``sa`` and ``sb``.  Omitting it gives all functions.
    """
    mors = []
    ids = []
    for ia, (na, sa, la) in enumerate(objects):
        for ib, (nb, sb, lb) in enumerate(objects):
            for f in product(range(nb), repeat=na):
                if admissible is None or admissible(sa, sb, f):
                    if ia == ib and f == tuple(range(na)):
                        ids.append((ia, len(mors)))
                    mors.append((ia, ib, f, f"{la}>{lb}:" + "".join(map(str, f))))
    ids = [m for _, m in sorted(ids)]
    cat = FinCategory.concrete(len(objects), mors, ids, _compose_functions,
                               obj_labels=[o[2] for o in objects], name=name)
    _vectorise_functions(cat, [o[0] for o in objects])
    return cat


def _vectorise_functions(cat, sizes):
    # a function a -> b is coded by its endpoints and its image digits
    n = cat.n_objects
    width = max(sizes, default=0) or 1
    base = max(max(sizes, default=0), 1) + 1
    rows = np.zeros((cat.n_morphisms, width), dtype=np.int64)
    for m, key in enumerate(cat.keys):
        rows[m, :len(key)] = key
    size = np.asarray(sizes, dtype=np.int64)
    src = np.asarray(cat.src, dtype=np.int64)
    tgt = np.asarray(cat.tgt, dtype=np.int64)
    powers = base ** np.arange(width, dtype=np.int64)
    mask_of = np.arange(width)[None, :] < size[:, None]

    def code(s, t, r):
        return (s * n + t) * base ** width + r @ powers

    index = CodeIndex(code(src, tgt, rows))

    def vec(gs, fs):
        fsrc = src[fs]
        comp = np.take_along_axis(rows[gs], rows[fs], axis=1) * mask_of[fsrc]
        return index.find(code(fsrc, tgt[gs], comp))

    cat._compose_vec = vec


def carrier_functor(cat, sizes, base):
    """Forgetful functor from a function category to ``base = finset(n)``."""
    obj_map = [sizes[a] for a in cat.objects]
    mor_map = [base.lookup[(obj_map[cat.src[m]], obj_map[cat.tgt[m]], cat.keys[m])]
               for m in cat.morphisms]
    return FunctorData(cat, base, obj_map, mor_map, name="forget")


_finsets = {}


def finset(n, budget=None):
    """Skeletal category of finite sets of sizes ``0..n`` and all functions.

    Instances are shared, so forgetful functors built at the same size have
    literally the same codomain.
    """
    budget = resolve(budget)
    if n > budget.finset_size:
        raise BudgetExceeded("finset size", budget.finset_size, n)
    if n not in _finsets:
        _finsets[n] = function_category([(k, None, str(k)) for k in range(n + 1)],
                                        name=f"FinSet<={n}")
    return _finsets[n]


def function_index(base, f, a=None, b=None):
    """Index of the function ``f`` (image tuple) in a finset category."""
    a = len(f) if a is None else a
    if b is None:
        b = max(f) + 1 if f else 0
    return base.lookup[(a, b, tuple(f))]


# pointed sets -----------------------------------------------------------------

def pointed(n, skeletal=False, budget=None):
    """Pointed sets of size ``1..n`` and the forgetful functor to ``finset(n)``.

    Objects are ``(size, basepoint)``; with ``skeletal`` only basepoint 0 is
    kept.  Labels read ``"3@1"`` for the 3-element set pointed at 1.
    """
    base = finset(n, budget)
    objects = []
    for k in range(1, n + 1):
        for x in range(1 if skeletal else k):
            objects.append((k, x, f"{k}@{x}"))
    cat = function_category(objects, lambda sa, sb, f: f[sa] == sb,
                            name=f"Pointed<={n}")
    cat.structures = [(k, x) for k, x, _ in objects]
    return cat, carrier_functor(cat, [o[0] for o in objects], base)


def pointed_object(cat, size, basepoint):
    return cat.object_index(f"{size}@{basepoint}")


# M-sets -----------------------------------------------------------------------

def cyclic_monoid(k):
    """Cayley table of Z/k with identity 0."""
    return [[(i + j) % k for j in range(k)] for i in range(k)]


def monoid_actions(table, carrier):
    """All actions of the monoid on ``{0..carrier-1}`` as tuples of functions.

    ``act[g]`` is the function of element ``g``; ``act[0]`` is the identity
    and ``act[g·h] = act[g]∘act[h]``.
    """
    m = len(table)
    funcs = list(product(range(carrier), repeat=carrier))
    ident = tuple(range(carrier))
    out = []
    act = [None] * m
    act[0] = ident

    def ok_partial():
        for g in range(m):
            if act[g] is None:
                continue
            for h in range(m):
                if act[h] is None:
                    continue
                gh = table[g][h]
                if act[gh] is not None and act[gh] != _compose_functions(act[g], act[h]):
                    return False
        return True

    def rec(g):
        if g == m:
            out.append(tuple(act))
            return
        for f in funcs:
            act[g] = f
            if ok_partial():
                rec(g + 1)
        act[g] = None

    rec(1)
    return out


def _canonical_action(act, carrier):
    best = None
    for perm in permutations(range(carrier)):
        inv = [0] * carrier
        for i, p in enumerate(perm):
            inv[p] = i
        # transport: act'(g)(perm(x)) = perm(act(g)(x))
        conj = tuple(tuple(perm[f[inv[y]]] for y in range(carrier)) for f in act)
        if best is None or conj < best:
            best = conj
    return best


def _action_label(k, act):
    return f"{k}:" + "|".join("".join(map(str, f)) for f in act[1:])


def mset(table, carrier, skeletal=False, name=None, budget=None):
    """Sets of size ``0..carrier`` with an action of the monoid ``table``.

    Returns the category and its forgetful functor to ``finset(carrier)``.
    Labels read ``"2:10"``: size, then the function of each non-identity
    element.
    """
    budget = resolve(budget)
    if len(table) > budget.monoid_order:
        raise BudgetExceeded("monoid order", budget.monoid_order, len(table))
    if carrier > budget.carrier:
        raise BudgetExceeded("carrier size", budget.carrier, carrier)
    base = finset(carrier, budget.override(finset_size=max(budget.finset_size, carrier)))
    objects = []
    for k in range(carrier + 1):
        acts = monoid_actions(table, k)
        if skeletal:
            seen = []
            for a in acts:
                c = _canonical_action(a, k)
                if c not in seen:
                    seen.append(c)
            acts = seen
        for a in acts:
            objects.append((k, a, _action_label(k, a)))

    cat = function_category(objects, lambda sa, sb, f: all(
        f[ga[x]] == gb[f[x]] for ga, gb in zip(sa, sb) for x in range(len(f))),
        name=name or f"{len(table)}-Set<={carrier}")
    cat.structures = [(k, a) for k, a, _ in objects]
    return cat, carrier_functor(cat, [o[0] for o in objects], base)


def mset_object(cat, size, act):
    return cat.object_index(_action_label(size, act))


# tiny categories --------------------------------------------------------------

def empty_category():
    return FinCategory.from_table(0, [], [], {}, name="0")


def unit_category():
    return FinCategory.from_table(1, [(0, 0, "id_0")], [0], {(0, 0): 0},
                                  obj_labels=["0"], name="1")


def walking_arrow():
    """The interval category ``[1]``: ``0 -> 1``."""
    mors = [(0, 0, "id_0"), (1, 1, "id_1"), (0, 1, "u")]
    table = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}
    return FinCategory.from_table(2, mors, [0, 1], table, obj_labels=["0", "1"],
                                  name="[1]")


def discrete(n):
    mors = [(a, a, f"id_{a}") for a in range(n)]
    return FinCategory.from_table(n, mors, list(range(n)),
                                  {(a, a): a for a in range(n)}, name=f"disc{n}")


def cyclic_group_category(k):
    """One-object category of the group Z/k."""
    mors = [(0, 0, "e" if i == 0 else f"s{i}") for i in range(k)]
    table = {(i, j): (i + j) % k for i in range(k) for j in range(k)}
    return FinCategory.from_table(1, mors, [0], table, obj_labels=["*"], name=f"Z/{k}")


def poset_category(n, leq, labels=None):
    """Category of a preorder on ``0..n-1`` given by ``leq(a, b)``."""
    mors = []
    index = {}
    for a in range(n):
        for b in range(n):
            if a == b or leq(a, b):
                index[(a, b)] = len(mors)
                mors.append((a, b, f"{a}<={b}"))
    ids = [index[(a, a)] for a in range(n)]
    table = {}
    for (a, b), f in index.items():
        for (b2, c), g in index.items():
            if b2 == b:
                table[(g, f)] = index[(a, c)]
    return FinCategory.from_table(n, mors, ids, table, obj_labels=labels, name=f"poset{n}")


def chain_shape(n):
    return poset_category(n, lambda a, b: a <= b)


def discrete_to_arrow():
    """The one-object discrete category mapped to the source of ``[1]``."""
    one = unit_category()
    arrow = walking_arrow()
    return FunctorData(one, arrow, [0], [arrow.ids[0]], name="disc->arrow")


# closed-form free constructions (oracles) --------------------------------------

def add_basepoint(pcat, base, k):
    """Object ``k ⊎ {*}`` of a labelled pointed category, pointed at the new element."""
    return pointed_object(pcat, k + 1, k)


def add_basepoint_map(pcat, base, f_index):
    """``f ⊎ {*}`` for a function of ``base``."""
    a, b = base.src[f_index], base.tgt[f_index]
    f = base.keys[f_index]
    g = tuple(f) + (b,)
    return pcat.lookup[(add_basepoint(pcat, base, a), add_basepoint(pcat, base, b), g)]


def free_action(table, k):
    """Free action on ``M × {0..k-1}``: element ``(g, s)`` sits at ``g*k + s``."""
    m = len(table)
    return tuple(tuple(table[h][g] * k + s for g in range(m) for s in range(k))
                 for h in range(m))


def free_mset_object(mcat, table, k):
    return mset_object(mcat, len(table) * k, free_action(table, k))


def free_mset_map(mcat, table, base, f_index):
    a, b = base.src[f_index], base.tgt[f_index]
    f = base.keys[f_index]
    m = len(table)
    g = tuple(h * b + f[s] for h in range(m) for s in range(a))
    return mcat.lookup[(free_mset_object(mcat, table, a), free_mset_object(mcat, table, b), g)]


# closed-form adjunctions ---------------------------------------------------------

def pointed_adjunction(n, budget=None):
    """Add-a-basepoint ``⊣`` forgetful, on ``Pointed<=n`` over ``FinSet<=n`` with window ``<= n-1``."""
    pcat, U = pointed(n, budget=budget)
    base = U.cod
    window = list(range(n))
    gammas = [add_basepoint(pcat, base, k) for k in window]
    # unit: the inclusion k -> k+1
    units = [function_index(base, tuple(range(k)), k, k + 1) for k in window]
    return build_adjunction(U, window, gammas, units)


def free_mset_adjunction(table, carrier, window=None, skeletal=False, budget=None):
    """Free M-set ``⊣`` forgetful; the window defaults to sizes ``k`` with ``|M|·k <= carrier``."""
    budget = resolve(budget)
    budget = budget.override(carrier=max(budget.carrier, carrier),
                             finset_size=max(budget.finset_size, carrier))
    mcat, U = mset(table, carrier, skeletal=skeletal, budget=budget)
    base = U.cod
    m = len(table)
    if window is None:
        window = [k for k in range(carrier + 1) if m * k <= carrier]
    gammas, units = [], []
    for k in window:
        act = free_action(table, k)
        if skeletal:
            act = _canonical_action(act, m * k)
            obj = mset_object(mcat, m * k, act)
            units.append(_free_unit_skeletal(mcat, U, base, table, k, obj))
        else:
            obj = mset_object(mcat, m * k, act)
            # unit: s -> (identity, s)
            units.append(function_index(base, tuple(range(k)), k, m * k))
        gammas.append(obj)
    return build_adjunction(U, window, gammas, units)


def _free_unit_skeletal(mcat, U, base, table, k, obj):
    # transport the standard unit along an isomorphism of actions
    m = len(table)
    act = free_action(table, k)
    target = mcat.structures[obj][1]
    for perm in permutations(range(m * k)):
        if all(perm[f[x]] == g[perm[x]] for f, g in zip(act, target) for x in range(m * k)):
            return function_index(base, tuple(perm[s] for s in range(k)), k, m * k)
    raise AssertionError("free action has no representative")
