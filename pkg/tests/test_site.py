import pytest
from hypothesis import given, strategies as st

from strategies import covers, finite_sets, set_maps

from highdesc.site import (SPLIT, SURJECTION, Cover, FiniteSet, SetMap, augmentation, canonical_common_refinement,
                           check_topology_axioms, compose_covers, cover_map_nerve, cover_nerve, enumerate_covers,
                           fiber_product, grid_surface, pullback_cover, rp2, split_defect, tetrahedron, torus7,
                           TriangulatedSurface)


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        FiniteSet(["a", "b", "a"])


def test_mixed_labels_have_a_total_order():
    s = FiniteSet([("x", 1), "b", 3, "a", 1])
    assert s.elements == (1, 3, "a", "b", ("x", 1))


@given(finite_sets(), finite_sets())
def test_set_equality_is_order_free(a, b):
    assert (a == b) == (set(a) == set(b))
    assert FiniteSet(reversed(a.elements)) == a


def test_setmap_rejects_partial_and_out_of_range():
    A, B = FiniteSet([1, 2]), FiniteSet(["x"])
    with pytest.raises(ValueError):
        SetMap(A, B, {1: "x"})
    with pytest.raises(ValueError):
        SetMap(A, B, {1: "x", 2: "y"})


@given(st.data())
def test_fiber_product_symmetric_up_to_swap(data):
    C = data.draw(finite_sets(min_size=1))
    f, g = data.draw(set_maps(codomain=C)), data.draw(set_maps(codomain=C))
    P, p1, p2 = fiber_product(f, g)
    Q, q1, q2 = fiber_product(g, f)
    assert {(b, a) for a, b in P} == set(Q)
    assert all(f(p1(z)) == g(p2(z)) for z in P)


@given(st.data())
def test_fiber_product_associative_up_to_bijection(data):
    C = data.draw(finite_sets(min_size=1, max_size=3))
    f, g, h = (data.draw(set_maps(codomain=C)) for _ in range(3))
    P, _, _ = fiber_product(f, g)
    PQ, _, _ = fiber_product(SetMap(P, C, {z: f(z[0]) for z in P}), h)
    Q, _, _ = fiber_product(g, h)
    QP, _, _ = fiber_product(f, SetMap(Q, C, {z: g(z[0]) for z in Q}))
    left = {(a, b, c) for (a, b), c in PQ}
    right = {(a, b, c) for a, (b, c) in QP}
    assert left == right


@given(covers(cover_class=SPLIT))
def test_split_covers_are_surjections(c):
    assert c.total.is_surjective()
    assert split_defect(c.total, c.pieces) is None
    assert c.with_class(SURJECTION).total == c.total


def test_surjection_with_non_injective_piece_is_not_split():
    pi = SetMap(FiniteSet("abc"), FiniteSet([0, 1]), {"a": 0, "b": 0, "c": 1})
    pieces = [frozenset("ab"), frozenset("c")]
    assert "not injective" in split_defect(pi, pieces)
    with pytest.raises(ValueError):
        Cover(pi, SPLIT, tuple(pieces))
    Cover(pi, SURJECTION)


def test_non_surjection_is_not_a_cover():
    with pytest.raises(ValueError):
        Cover(SetMap(FiniteSet([0]), FiniteSet([0, 1]), {0: 0}))


@pytest.mark.parametrize("cls", [SPLIT, SURJECTION])
def test_topology_axioms(cls):
    M = FiniteSet(range(2))
    cs = enumerate_covers(M, 4, cls)
    maps = [SetMap(FiniteSet("pq"), M, {"p": 0, "q": 0}), SetMap(FiniteSet("r"), M, {"r": 1})]
    assert check_topology_axioms(cls, cs, maps) == []


@given(covers(), st.data())
def test_pullback_cover_is_a_cover_over_the_new_base(c, data):
    f = data.draw(set_maps(codomain=c.M))
    d, to_c = pullback_cover(c, f)
    assert d.M == f.domain
    assert all(f(d(z)) == c(to_c(z)) for z in d.Y)


@given(covers(max_total=4))
def test_cover_nerve_simplicial_identities(c):
    N = cover_nerve(c, 4)
    assert N.check_identities() == []
    assert augmentation(c).check() == []


@given(covers(max_total=4), covers(max_total=4))
def test_common_refinement_maps_to_both(c, d):
    if c.M != d.M:
        d = Cover.identity(c.M)
    r = canonical_common_refinement(c, d)
    for z in r.cover.Y:
        assert c(r.to_left(z)) == r.cover(z) == d(r.to_right(z))
    assert cover_map_nerve(r.cover, c, r.to_left, 3).check() == []


def test_composite_of_split_covers_is_split():
    inner = Cover.from_pairs({"u": "a", "v": "a", "w": "b"}, cover_class=SPLIT)
    outer = Cover.from_pairs({"a": 0, "b": 0}, cover_class=SPLIT)
    assert compose_covers(inner, outer).cover_class == SPLIT


def test_enumerate_covers_counts():
    # compositions of at most 5 into 2 positive parts
    assert len(enumerate_covers(FiniteSet(range(2)), 5)) == 1 + 2 + 3 + 4
    assert len(enumerate_covers(FiniteSet(), 3)) == 1


@pytest.mark.parametrize("make,orientable,chi", [
    (tetrahedron, True, 2), (torus7, True, 0), (rp2, False, 1),
    (lambda: grid_surface(3, 3, klein=True), False, 0), (lambda: grid_surface(3, 4), True, 0)])
def test_surfaces(make, orientable, chi):
    r = make().validate()
    assert r.closed and r.connected and r.orientable == orientable and r.euler == chi


def test_subdivision_keeps_surface_type():
    s = torus7()
    t = s.subdivide(0, "new")
    assert t.validate().closed and t.euler() == s.euler()
    with pytest.raises(ValueError):
        s.subdivide(0, s.vertices.elements[0])


def test_open_surface_is_flagged():
    s = tetrahedron()
    r = TriangulatedSurface.from_faces(s.faces[:-1]).validate()
    assert not r.closed and r.defects
