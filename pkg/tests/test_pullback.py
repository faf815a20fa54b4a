from math import factorial

from despla import generators as gen
from despla.fincat import (FunctorData, check_equivalence, constant_functor, identity_functor,
                           validate_category, validate_functor)
from despla.pullback import (comparison_functor, pseudopullback, validate_pseudopullback,
                             verify_pseudopullback_square)

import oracles


def test_singleton_family_equivalent_to_domain():
    _, p = gen.pointed(2)
    pp = pseudopullback([p])
    assert validate_category(pp.total) == []
    assert check_equivalence(pp.total, p.dom) is not None


def test_two_identities_on_point():
    u = gen.unit_category()
    pp = pseudopullback([identity_functor(u), identity_functor(u)])
    assert pp.total.n_objects == 1 and pp.total.n_morphisms == 1


def test_pointed_and_z2_count():
    _, p = gen.pointed(2)
    _, q = gen.mset(gen.cyclic_monoid(2), 2)
    pp = pseudopullback([p, q])
    # [DERIVED] per size n: (basepoints) * n! * (Z/2 actions) * n!
    expected = 0
    for n in range(3):
        pointed = n
        actions = len(oracles.actions(gen.cyclic_monoid(2), n))
        expected += pointed * factorial(n) * actions * factorial(n)
    assert expected == 17
    assert pp.total.n_objects == expected
    assert validate_pseudopullback(pp) == []
    assert validate_category(pp.total) == []


def test_cone_lookup_round_trip():
    _, p = gen.pointed(2)
    pp = pseudopullback([p, p])
    for i, cone in enumerate(pp.cones):
        assert pp.object_of(*cone) == i
        b, es, isos = cone
        assert pp.canonical.obj_map[i] == b
        assert all(pp.base.tgt[iso] == p.obj_map[e] for iso, e in zip(isos, es))


def test_projections_are_functors():
    _, p = gen.pointed(2)
    c = gen.finset(2)
    pp = pseudopullback([p, identity_functor(c)])
    for tau in pp.projections:
        assert validate_functor(tau) == []


def test_own_square_is_pseudopullback():
    _, p = gen.pointed(2)
    _, q = gen.mset(gen.cyclic_monoid(2), 2)
    pp = pseudopullback([p, q])
    assert verify_pseudopullback_square(pp.projections, [p, q], pp.natiso)


def test_empty_corner_is_not_pseudopullback():
    _, p = gen.pointed(2)
    e = gen.empty_category()
    legs = [FunctorData(e, p.dom, [], []), FunctorData(e, p.dom, [], [])]
    assert not verify_pseudopullback_square(legs, [p, p])


def test_identity_square_over_point():
    c = gen.chain_shape(2)
    i = identity_functor(c)
    assert verify_pseudopullback_square([i, i], [i, i])


def test_comparison_needs_commuting_cone():
    c = gen.finset(1)
    i = identity_functor(c)
    K, _ = comparison_functor([i, i], [i, i])
    assert K is not None and validate_functor(K) == []
    K, _ = comparison_functor([i, constant_functor(c, c, 1)], [i, i])
    assert K is None
