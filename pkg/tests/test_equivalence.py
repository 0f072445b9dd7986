import pytest
from hypothesis import given, settings

from oracles import es_oracle, ff_oracle, groupoids_up_to_iso
from strategies import covers

from highdesc.catalog import not_weak_equivalences, weak_equivalences
from highdesc.equivalence import (_match_invariants, equivalence_report, explicit_weak_equivalence, factorize, functor_search,
                                  is_essentially_surjective, is_fully_faithful, is_strong_equivalence,
                                  is_weak_equivalence, morita_equivalent, morita_invariant, product_cover,
                                  product_cover_lemma_check)
from highdesc.groupoid import cyclic_group, delooping, klein_group
from highdesc.site import SPLIT, SURJECTION

SMALL = groupoids_up_to_iso(4)


def all_functors():
    for a in SMALL:
        for b in SMALL:
            yield from functor_search(a, b, want=lambda F: True, limit=6)


FUNCTORS = list(all_functors())


def test_functor_enumeration_yields_functors():
    assert len(FUNCTORS) > 100
    assert all(F.check() == [] for F in FUNCTORS)


def test_ff_and_es_match_counting_oracles():
    for F in FUNCTORS:
        assert is_fully_faithful(F).holds == ff_oracle(F)
        for cls in (SPLIT, SURJECTION):
            assert is_essentially_surjective(F, cls).holds == es_oracle(F)


def test_strong_iff_weak():
    for F in FUNCTORS:
        strong = is_strong_equivalence(F)
        assert (strong is not None) == is_weak_equivalence(F)
        if strong is not None:
            assert strong.check() == []


def test_reports_recheck():
    for F in FUNCTORS:
        assert equivalence_report(F).recheck(F)


def test_recheck_catches_tampering():
    _, F = weak_equivalences()[2]
    rep = equivalence_report(F)
    key = next(iter(rep.fully_faithful.bijection))
    rep.fully_faithful.bijection[key] = "nonsense-morphism"
    with pytest.raises(KeyError):
        rep.recheck(F)


@pytest.mark.parametrize("name,F", not_weak_equivalences())
def test_factorize_refuses_non_equivalences(name, F):
    with pytest.raises(ValueError, match="precondition"):
        factorize(F)


@pytest.mark.parametrize("name,F", weak_equivalences())
def test_catalog_is_weak(name, F):
    assert F.check() == [] and is_weak_equivalence(F)


@pytest.mark.parametrize("name,F", not_weak_equivalences())
def test_negative_catalog(name, F):
    assert F.check() == [] and not is_weak_equivalence(F)


def test_morita_invariant_distinguishes_group_orders():
    B2, B4, V = delooping(cyclic_group(2)), delooping(cyclic_group(4)), delooping(klein_group())
    assert not morita_equivalent(B2, B4).equivalent
    assert not morita_equivalent(B4, V).equivalent
    r = morita_equivalent(B4, B4)
    assert r.equivalent and is_weak_equivalence(r.zigzag[2])


def test_explicit_weak_equivalence_on_all_equivalent_pairs():
    for a in SMALL:
        for b in SMALL:
            m = _match_invariants(morita_invariant(a), morita_invariant(b))
            if m is not None:
                F = explicit_weak_equivalence(a, b, m)
                assert F.check() == [] and is_weak_equivalence(F)


@given(covers(max_base=2, max_total=4), covers(max_base=2, max_total=4))
def test_product_of_covers_is_a_cover(c, d):
    assert product_cover_lemma_check(c, d)
    assert len(product_cover(c, d).Y) == len(c.Y) * len(d.Y)


@settings(max_examples=20)
@given(covers(max_base=2, max_total=4, cover_class=SPLIT), covers(max_base=2, max_total=4, cover_class=SPLIT))
def test_product_of_split_covers_is_split(c, d):
    assert product_cover(c, d).cover_class == SPLIT
