import pytest
from hypothesis import given, strategies as st

from strategies import conjugate, covers, small_groupoids

from highdesc.catalog import free_action_groupoid
from highdesc.groupoid import (GroupoidFunctor, NatIso, action_groupoid, cech_groupoid, cech_nerve_comparison,
                               check_axioms, cyclic_group, cylinder, cylinder_to_natiso, delooping,
                               disjoint_union_groupoid, from_tables, functor_to_point, groups_isomorphic,
                               groups_up_to_order, is_isomorphic_groupoid, klein_group, natiso_to_cylinder, nerve,
                               nerve_of_functor, pair_groupoid, product_groupoid, projection_functor, symmetric_group)
from highdesc.site import FiniteSet


@given(small_groupoids())
def test_constructed_groupoids_satisfy_axioms(g):
    assert check_axioms(g).valid


def test_broken_composition_is_reported():
    g = delooping(cyclic_group(2))
    bad = dict(g.compose)
    bad[(1, 1)] = 1
    h = from_tables(g.objects, {f: (g.source[f], g.target[f]) for f in g.morphisms}, bad,
                    identity=g.identity, inverse=g.inverse)
    r = check_axioms(h)
    assert not r.valid and r.defects


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_groups_up_to_order_are_groups_and_distinct(n):
    gs = groups_up_to_order(n)
    for G in gs:
        G.check()
    for i, G in enumerate(gs):
        for H in gs[i + 1:]:
            assert groups_isomorphic(G, H) is None


def test_small_group_isomorphisms():
    assert groups_isomorphic(cyclic_group(6), cyclic_group(6)) is not None
    assert groups_isomorphic(klein_group(), cyclic_group(4)) is None
    assert groups_isomorphic(symmetric_group(3), cyclic_group(6)) is None


@given(small_groupoids(), st.randoms(use_true_random=False))
def test_cylinder_round_trip(g, rnd):
    F = GroupoidFunctor.identity(g)
    G, eta = conjugate(F, g, rnd.choice)
    assert G.check() == [] and eta.check() == []
    cyl = cylinder(g)
    H = natiso_to_cylinder(eta, cyl)
    assert H.check() == []
    assert cyl.i0.then(H) == F and cyl.i1.then(H) == G
    back = cylinder_to_natiso(H, g, cyl)
    assert back.component == eta.component


@given(small_groupoids(), st.randoms(use_true_random=False))
def test_natiso_composition_and_inverse(g, rnd):
    F = GroupoidFunctor.identity(g)
    G, eta = conjugate(F, g, rnd.choice)
    K, theta = conjugate(G, g, rnd.choice)
    assert eta.then(theta).check() == []
    assert eta.inverse().check() == []
    assert eta.then(eta.inverse()).component == NatIso.identity(F).component


@given(covers(max_total=4))
def test_cech_nerve_comparison_is_levelwise_bijective(c):
    phi = cech_nerve_comparison(c)
    assert phi.check() == []
    for comp in phi.components:
        assert comp.is_injective() and comp.is_surjective()


@given(small_groupoids())
def test_groupoid_nerve_identities(g):
    assert nerve(g, 3).check_identities() == []


@given(small_groupoids())
def test_nerve_of_functor_commutes_with_faces(g):
    assert nerve_of_functor(functor_to_point(g), 3).check() == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_action_has_trivial_automorphism_groups(n):
    g = free_action_groupoid(n)
    assert all(len(g.automorphisms(x)) == 1 for x in g.objects)


def test_trivial_action_has_full_automorphism_groups():
    G = cyclic_group(3)
    g = action_groupoid(G, FiniteSet([0, 1]), lambda h, m: m)
    assert all(len(g.automorphisms(x)) == 3 for x in g.objects)


def test_action_must_be_an_action():
    G = cyclic_group(3)
    with pytest.raises(ValueError):
        action_groupoid(G, FiniteSet([0, 1]), lambda h, m: (m + h) % 2)


@given(covers(max_total=4))
def test_cech_groupoid_is_equivalent_to_base(c):
    C = cech_groupoid(c)
    assert check_axioms(C).valid
    assert len(C.orbits()) == len(c.M)
    assert projection_functor(c).check() == []


def test_isomorphism_of_groupoids():
    B2 = delooping(cyclic_group(2))
    assert is_isomorphic_groupoid(product_groupoid(B2, pair_groupoid(1)), B2)
    assert not is_isomorphic_groupoid(product_groupoid(B2, pair_groupoid(2)), B2)
    assert is_isomorphic_groupoid(disjoint_union_groupoid([B2, pair_groupoid(2)]),
                                  disjoint_union_groupoid([pair_groupoid(2), B2]))
