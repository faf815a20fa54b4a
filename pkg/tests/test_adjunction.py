import pytest
from hypothesis import given, strategies as st

from despla import generators as gen
from despla.adjunction import (build_adjunction, check_hom_bijection, check_transpose_naturality,
                               validate_adjunction)
from despla.displacement import adjoint_window, left_adjoint_via_displacements
from despla.fincat import identity_functor

from instances import random_pair, rng_for


def test_identity_adjunction():
    c = gen.finset(2)
    adj = build_adjunction(identity_functor(c), list(c.objects), list(c.objects),
                           [c.ids[b] for b in c.objects])
    assert validate_adjunction(adj) == []
    assert check_transpose_naturality(adj) == []
    assert all(adj.counit_at(e) == c.ids[e] for e in c.objects)


def test_non_universal_unit_rejected():
    cat, p = gen.pointed(2)
    # Γ(1) = (2, 0) with the unit hitting the basepoint is not initial
    target = gen.pointed_object(cat, 2, 0)
    unit = gen.function_index(p.cod, (0,), 1, 2)
    with pytest.raises(ValueError):
        build_adjunction(p, [1], [target], [unit])


def test_free_pointed_on_one_point_builds():
    cat, p = gen.pointed(2)
    adj = build_adjunction(p, [1], [gen.pointed_object(cat, 2, 0)],
                           [gen.function_index(p.cod, (1,), 1, 2)])
    assert validate_adjunction(adj) == []


def test_pointed_transpose_round_trip():
    adj = gen.pointed_adjunction(3)
    E = adj.total
    for b in adj.window_objects:
        for e in E.objects:
            for f in E.hom(adj.gamma(b), e):
                assert adj.untranspose(b, e, adj.transpose(b, f)) == f
    assert check_transpose_naturality(adj) == []


def test_tampered_unit_detected():
    adj = gen.pointed_adjunction(3)
    comps = list(adj.unit.components)
    B = adj.base
    # replace the unit at 1 with the other map 1 -> 2
    b = adj.window_objects[1]
    others = [m for m in B.hom(b, B.tgt[comps[1]]) if m != comps[1]]
    comps[1] = others[0]
    adj.unit.components = tuple(comps)
    assert validate_adjunction(adj) != []


def test_adjoint_window_pointed():
    _, p = gen.pointed(3)
    # the free pointed set on 3 points needs 4 points
    assert list(adjoint_window(p)) == [0, 1, 2]


@given(st.integers(0, 10 ** 6))
def test_synthesized_adjoints_validate(seed):
    p = random_pair(rng_for(seed))
    window = list(adjoint_window(p))
    if not window:
        return
    adj = left_adjoint_via_displacements(p, window)
    assert adj is not None
    assert validate_adjunction(adj) == []
    assert check_hom_bijection(adj) == []
