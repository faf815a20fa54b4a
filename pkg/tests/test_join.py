import pytest
from hypothesis import given, strategies as st

from despla import generators as gen
from despla.errors import InvalidPartition, MalformedJoin
from despla.fincat import (FunctorData, compose_functors, constant_functor,
                           find_initial, find_isomorphism, identity_functor, validate_category,
                           validate_functor)
from despla.join import (BridgeDecomposition, JoinedCategory, adjoined_map, assemble_bridge,
                         check_bimodule, check_join_preserves_pseudopullback, check_joined,
                         decompose_bridge, join_functor, join_one, recognize_join)

from instances import random_bridge, random_preorder, rng_for


def test_join_of_empty_is_point():
    j = join_one(gen.empty_category()).joined
    assert (j.n_objects, j.n_morphisms) == (1, 1)


def test_join_of_point_is_arrow():
    j = join_one(gen.unit_category()).joined
    assert find_isomorphism(j, gen.walking_arrow()) is not None


def test_join_of_discrete_two():
    jc = join_one(gen.discrete(2))
    assert (jc.joined.n_objects, jc.joined.n_morphisms) == (3, 5)
    assert jc.zero == 2
    assert validate_category(jc.joined) == []


@pytest.mark.parametrize("c", [gen.finset(2), gen.pointed(2)[0], gen.cyclic_group_category(3),
                               gen.chain_shape(3)])
def test_join_invariants(c):
    jc = join_one(c)
    check_joined(jc)
    assert validate_category(jc.joined) == []
    assert find_initial(jc.joined) == jc.zero
    assert jc.joined.n_morphisms == c.n_morphisms + c.n_objects + 1


def test_malformed_join_detected():
    c = gen.chain_shape(2)
    fake = JoinedCategory(c, c, 1, FunctorData(gen.unit_category(), c, [0], [0]))
    with pytest.raises(MalformedJoin):
        check_joined(fake)


def test_join_of_identity():
    c = gen.finset(2)
    jp = join_functor(identity_functor(c))
    assert list(jp.obj_map) == list(jp.dom.objects)
    assert list(jp.mor_map) == list(jp.dom.morphisms)


def test_join_of_constant():
    c, d = gen.chain_shape(3), gen.finset(2)
    jp = join_functor(constant_functor(c, d, 1))
    jc, jd = join_one(c), join_one(d)
    for x in c.objects:
        assert jp.mor_map[adjoined_map(jc, x)] == adjoined_map(jd, 1)


def test_join_of_pointed_commutes_with_embeddings():
    cat, p = gen.pointed(2)
    jp = join_functor(p)
    assert validate_functor(jp) == []
    ec, eb = join_one(cat).embed, join_one(p.cod).embed
    lhs = compose_functors(eb, p)
    rhs = compose_functors(jp, ec)
    assert lhs.obj_map == rhs.obj_map and lhs.mor_map == rhs.mor_map


# bridges -----------------------------------------------------------------------------

def test_decompose_identity():
    b = gen.chain_shape(2)
    jc = join_one(b)
    d = decompose_bridge(identity_functor(jc.joined))
    assert d.a_minus == (jc.zero,)
    assert d.a_plus == tuple(b.objects)
    assert d.f_plus.obj_map == tuple(b.objects)


def test_decompose_constant_zero():
    b = gen.finset(1)
    jc = join_one(b)
    a = gen.chain_shape(3)
    d = decompose_bridge(constant_functor(a, jc.joined, jc.zero))
    assert d.a_plus == () and d.a_minus == (0, 1, 2)


def test_decompose_walking_arrow():
    b = gen.finset(2)
    jc = join_one(b)
    a = gen.walking_arrow()
    f = FunctorData(a, jc.joined, [jc.zero, 2], [jc.joined.ids[jc.zero], b.ids[2],
                                                  adjoined_map(jc, 2)])
    d = decompose_bridge(f)
    assert d.a_minus == (0,) and d.a_plus == (1,)
    assert d.f_plus.obj_map == (2,)


def test_assemble_empty_minus_is_embedding():
    b = gen.finset(2)
    a = gen.chain_shape(2)
    f_plus = FunctorData(a, b, [1, 2], [b.ids[1], b.ids[2], b.hom(1, 2)[0]])
    f = assemble_bridge(a, BridgeDecomposition((), (0, 1), f_plus))
    emb = compose_functors(join_one(b).embed, f_plus)
    assert f.obj_map == emb.obj_map and f.mor_map == emb.mor_map


def test_assemble_discrete_split():
    a, b = gen.discrete(2), gen.finset(2)
    jc = join_one(b)
    from despla.fincat import full_subcategory
    sub, _ = full_subcategory(a, [1])
    d = BridgeDecomposition((0,), (1,), FunctorData(sub, b, [2], [b.ids[2]]))
    f = assemble_bridge(a, d)
    assert validate_functor(f) == []
    assert f.obj_map == (jc.zero, 2)
    assert f.mor_map == (jc.joined.ids[jc.zero], b.ids[2])


def test_partition_must_be_down_closed():
    a = gen.walking_arrow()
    b = gen.finset(1)
    from despla.fincat import full_subcategory
    sub, _ = full_subcategory(a, [0])
    d = BridgeDecomposition((1,), (0,), FunctorData(sub, b, [1], [b.ids[1]]))
    with pytest.raises(InvalidPartition):
        assemble_bridge(a, d)


def test_not_a_joined_codomain():
    with pytest.raises(MalformedJoin):
        decompose_bridge(identity_functor(gen.discrete(2)))


@given(st.integers(0, 10 ** 6))
def test_bridge_round_trips(seed):
    rng = rng_for(seed)
    a = random_preorder(rng, rng.randint(1, 4))
    b = random_preorder(rng, rng.randint(1, 3))
    f = random_bridge(rng, a, b)
    if f is None:
        return
    assert validate_functor(f) == []
    d = decompose_bridge(f)
    g = assemble_bridge(a, d)
    assert g.obj_map == f.obj_map and g.mor_map == f.mor_map
    d2 = decompose_bridge(g, verify_square=False)
    assert d2 == d and not d2 != d
    assert check_bimodule(a, d)


def test_recognize_join_of_rebuilt_category():
    jc = join_one(gen.chain_shape(2))
    j = jc.joined.to_explicit()
    found, iso = recognize_join(j)
    assert validate_functor(iso) == []
    assert iso.obj_map[jc.zero] == found.zero


def test_recognize_join_rejects():
    with pytest.raises(MalformedJoin):
        recognize_join(gen.discrete(2))


# joins and pseudopullbacks -----------------------------------------------------------------

def test_join_preserves_singleton_identity():
    v = check_join_preserves_pseudopullback([identity_functor(gen.chain_shape(2))])
    assert v.holds


def test_join_preserves_two_identities_on_point():
    u = gen.unit_category()
    v = check_join_preserves_pseudopullback([identity_functor(u), identity_functor(u)])
    assert v.holds and v.right.n_objects == 2


def test_join_preserves_two_forgetful():
    _, p = gen.pointed(2)
    _, q = gen.mset(gen.cyclic_monoid(2), 2)
    assert check_join_preserves_pseudopullback([p, q]).holds
