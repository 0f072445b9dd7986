import random

import pytest

from highdesc.descent import random_morphism, random_object
from highdesc.equivariant import eval_on_groupoid
from highdesc.groupoid import cyclic_group, delooping, trivial_groupoid
from highdesc.plus import (PlusMorphism, PlusObject, compose_plus, covering_groupoid, covering_square_check,
                           plus_eval, plus_on_groupoid, verify_stack)
from highdesc.prestacks import instance_by_name
from highdesc.site import SPLIT, SURJECTION, Cover, FiniteSet, SetMap, enumerate_covers

INSTANCES = ["grbtriv:2", "grbtriv:3", "bun:2", "jandl:2", "jandl:3"]


def test_covering_groupoid_over_a_set_is_the_cech_groupoid():
    c = Cover.from_pairs({"a": 0, "b": 0, "c": 1})
    H, Pi = covering_groupoid(trivial_groupoid(c.M), c)
    assert len(H.morphisms) == 4 + 1 and Pi.check() == []


@pytest.mark.parametrize("pairs", [{"a": "*", "b": "*"}, {"a": "*"}, {"a": "*", "b": "*", "c": "*"}])
def test_covering_square(pairs):
    B2 = delooping(cyclic_group(2))
    c = Cover.from_pairs(pairs)
    assert covering_square_check(B2, c)
    H, Pi = covering_groupoid(B2, c)
    assert H.check_axioms().valid and Pi.check() == []


@pytest.mark.parametrize("name", INSTANCES)
@pytest.mark.parametrize("cls", [SPLIT, SURJECTION])
def test_embedding_is_an_equivalence_over_sets(name, cls):
    P = plus_eval(instance_by_name(name), FiniteSet([0, 1]), cls, extra=2)
    r = P.embedding_report()
    assert r.fully_faithful and r.essentially_surjective, r.failures


@pytest.mark.parametrize("name", ["grbtriv:2", "bun:2", "jandl:3"])
def test_embedding_over_b2(name):
    P = plus_on_groupoid(instance_by_name(name), delooping(cyclic_group(2)), extra=2)
    assert P.embedding_report().equivalence


@pytest.mark.parametrize("name", INSTANCES)
def test_iso_classes_match_the_value(name):
    x = instance_by_name(name)
    G = delooping(cyclic_group(2))
    P = plus_on_groupoid(x, G, extra=1)
    assert len(P.iso_classes()) == eval_on_groupoid(x, G).pi0_count()


def _random_plus_morphism(P, rng):
    covers = P.covers()
    c = rng.choice(covers)
    D = P.desc(c)
    x = random_object(D, rng)
    o = PlusObject(c, x)
    m = random_morphism(D, x, rng)
    p = PlusObject(c, m.target)
    ident = SetMap.identity(c.Y)
    return PlusMorphism(o, p, c, ident, ident, m)


@pytest.mark.parametrize("name", INSTANCES)
def test_to_canonical_gives_a_two_cell(name):
    P = plus_eval(instance_by_name(name), FiniteSet([0, 1]), extra=2)
    rng = random.Random(11)
    for _ in range(6):
        m = _random_plus_morphism(P, rng)
        assert P.check_1morphism(m) == []
        mc, beta = P.to_canonical(m)
        assert P.check_1morphism(mc) == []
        D = P.desc(m.refinement)
        assert D.two_morphism_defects(beta) == []


@pytest.mark.parametrize("name", INSTANCES)
def test_plus_composition_is_a_morphism(name):
    P = plus_eval(instance_by_name(name), FiniteSet([0]), extra=2)
    rng = random.Random(5)
    for _ in range(6):
        m = _random_plus_morphism(P, rng)
        n_data = random_morphism(P.desc(m.refinement), m.data.target, rng)
        ident = SetMap.identity(m.refinement.Y)
        n = PlusMorphism(m.target, PlusObject(m.refinement, n_data.target), m.refinement, ident, ident, n_data)
        mn = compose_plus(P, m, n)
        assert P.check_1morphism(mn) == []
        assert P.check_1morphism(P.compose(P.identity(m.source), m)) == []


def test_find_1morphism_between_refined_copies():
    x = instance_by_name("grbtriv:2")
    P = plus_eval(x, FiniteSet(["*"]), extra=2)
    c = Cover.from_pairs({"a": "*", "b": "*"})
    D = P.desc(c)
    o = P.embed(P.desc(P.identity_cover()).trivial_object())
    p = PlusObject(c, D.trivial_object())
    m = P.find_1morphism(o, p)
    assert m is not None and P.check_1morphism(m) == []


@pytest.mark.parametrize("cls", [SPLIT, SURJECTION])
def test_split_and_surjection_agree(cls):
    x = instance_by_name("grbtriv:2")
    for cov in enumerate_covers(FiniteSet([0, 1]), 3, cls):
        pre, post = verify_stack(x, cov, plus=False), verify_stack(x, cov, plus=True)
        assert pre.fully_faithful and pre.equivalence and post.equivalence


def test_stack_report_serialises():
    r = verify_stack(instance_by_name("bun:2"), Cover.from_pairs({"a": 0, "b": 0}), witnesses=2)
    d = r.as_dict()
    assert d["equivalence"] and {"tau", "embed_base", "embed_cech"} <= set(d["steps"])
    assert r.witness.get("verified")
