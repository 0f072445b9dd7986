import random

import pytest
from hypothesis import given, settings, strategies as st

from strategies import conjugate

from highdesc.catalog import free_action_groupoid, not_weak_equivalences, weak_equivalences
from highdesc.descent import DescentObject, is_equivalence, random_morphism, random_object
from highdesc.equivariant import (constant_grid, cylinder_report, eval_on_groupoid, exchange, interval_transport,
                                  pullback_equivariant, theorem_harness, transport_composite_cell,
                                  trivial_comparison, unfold_bun_object)
from highdesc.groupoid import (GroupoidFunctor, NatIso, action_groupoid, connected_groupoid, cyclic_group, delooping, pair_groupoid,
                               product_groupoid)
from highdesc.prestacks import instance_by_name
from highdesc.site import FiniteSet

INSTANCES = ["grbtriv:2", "grbtriv:3", "bun:2", "bun:3", "jandl:2", "jandl:3"]
TARGETS = [pair_groupoid(2), pair_groupoid(3), delooping(cyclic_group(2)), connected_groupoid(2, cyclic_group(2)),
           free_action_groupoid(2)]


@pytest.mark.parametrize("n", [2, 3])
def test_bun_objects_unfold_to_actions(n):
    Z = cyclic_group(n)
    M = FiniteSet(range(n))
    act = lambda g, m: (g + m) % n
    D = eval_on_groupoid(instance_by_name(f"bun:{n}"), action_groupoid(Z, M, act))
    rng = random.Random(n)
    for _ in range(10):
        X = random_object(D, rng)
        table, bad = unfold_bun_object(D, Z, M, act, X)
        assert bad == [] and len(table) == n * n * n


def test_non_cocycle_does_not_unfold():
    Z = cyclic_group(3)
    M = FiniteSet([0])
    D = eval_on_groupoid(instance_by_name("bun:3"), action_groupoid(Z, M, lambda g, m: m))
    k = tuple(1 if f == (1, 0) else 0 for f in D.C.basis[1])
    _, bad = unfold_bun_object(D, Z, M, lambda g, m: m, DescentObject(k, D.C.zero(2)))
    assert bad


@pytest.mark.parametrize("name", INSTANCES)
@pytest.mark.parametrize("H", TARGETS, ids=lambda g: g.name)
@settings(max_examples=8)
@given(rnd=st.randoms(use_true_random=False))
def test_transport_along_conjugations(name, H, rnd):
    x = instance_by_name(name)
    F = GroupoidFunctor.identity(H)
    G, eta = conjugate(F, H, rnd.choice)
    t = interval_transport(x, eta)
    objs = [random_object(t.base, rnd) for _ in range(3)]
    morphs = [random_morphism(t.base, X, rnd) for X in objs]
    assert t.defects(objs, morphs) == []


@pytest.mark.parametrize("name", INSTANCES)
@settings(max_examples=5)
@given(rnd=st.randoms(use_true_random=False))
def test_transport_composite(name, rnd):
    x = instance_by_name(name)
    H = pair_groupoid(3)
    F = GroupoidFunctor.identity(H)
    G, eta = conjugate(F, H, rnd.choice)
    _, theta = conjugate(G, H, rnd.choice)
    X = random_object(eval_on_groupoid(x, H), rnd)
    assert transport_composite_cell(x, eta, theta, X) is not None


def test_transport_rejects_non_natural_data():
    H = delooping(cyclic_group(2))
    F = GroupoidFunctor.identity(H)
    bad = NatIso(F, F, {"*": "not-a-morphism"})
    with pytest.raises(ValueError):
        interval_transport(instance_by_name("bun:2"), bad)


@pytest.mark.parametrize("name", INSTANCES)
def test_cylinder_projection_is_an_equivalence(name):
    assert cylinder_report(instance_by_name(name), delooping(cyclic_group(2))).equivalence


@pytest.mark.parametrize("name", INSTANCES)
def test_trivial_comparison_is_an_equivalence(name):
    assert is_equivalence(trivial_comparison(instance_by_name(name), [0, 1])).equivalence


@pytest.mark.parametrize("name", ["grbtriv:2", "bun:3", "jandl:3"])
def test_pullback_is_contravariantly_functorial(name):
    x = instance_by_name(name)
    B2 = delooping(cyclic_group(2))
    P = product_groupoid(B2, pair_groupoid(2))
    pr = GroupoidFunctor(P, B2, {o: o[0] for o in P.objects}, {f: f[0] for f in P.morphisms})
    inc = GroupoidFunctor(B2, P, {"*": ("*", 0)}, {g: (g, (0, 0)) for g in B2.morphisms})
    comp = pullback_equivariant(x, inc.then(pr))
    a, b = pullback_equivariant(x, pr), pullback_equivariant(x, inc)
    rng = random.Random(1)
    for _ in range(5):
        X = random_object(comp.source, rng)
        assert comp.on_obj(X) == b.on_obj(a.on_obj(X))


@pytest.mark.parametrize("name,F", not_weak_equivalences())
def test_harness_refuses_non_equivalences(name, F):
    r = theorem_harness(instance_by_name("bun:2"), F)
    assert not r.passed and r.failure.startswith("precondition")


def test_harness_rejects_bad_mode():
    with pytest.raises(ValueError):
        theorem_harness(instance_by_name("bun:2"), weak_equivalences()[2][1], mode="sheaf")


def test_harness_reports_serialise():
    r = theorem_harness(instance_by_name("grbtriv:2"), weak_equivalences()[0][1], "prestack")
    d = r.as_dict()
    assert d["passed"] and d["agree"] and d["strong_part"]["equivalence"]


@pytest.mark.parametrize("name", ["grbtriv:2", "bun:2", "grbtriv:3"])
def test_exchange_on_a_constant_grid(name):
    L, R, E, rep = exchange(constant_grid([0, 1], bound=3), instance_by_name(name), seed=2)
    assert rep.isomorphism, rep.failures
    X = L.random_object(random.Random(4))
    assert E.inverse().on_obj(E.on_obj(X)) == X
