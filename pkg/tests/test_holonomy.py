import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strategies import closed_surfaces, orientable_surfaces

from highdesc.groupoid import cyclic_group
from highdesc.holonomy import (DiscreteTwoForm, GerbeData, NotABundle, OrientifoldData, cover_summary, difference_bundle, gerbe_holonomy, is_integer,
                               jandl_holonomy, kan_bundle_check, lift_oriented, orientation_double_cover,
                               orientifold_from_twisted, oriented_holonomy, perturb_bundle, push_down, random_bundle,
                               random_closed_theta, random_form, random_gerbe, shift_by_curvature, trivial_gerbe,
                               surface_data, trivialize, twist, zero_form)
from highdesc.site import FiniteSet, rp2, tetrahedron, torus7

seeds = st.integers(0, 2**32 - 1)


@given(orientable_surfaces, seeds)
def test_holonomy_is_additive_and_odd(make, seed):
    s, rng = make(), random.Random(seed)
    w1, w2 = random_form(s, rng), random_form(s, rng)
    h = oriented_holonomy(w1 + w2)
    assert h == (oriented_holonomy(w1) + oriented_holonomy(w2)) % 1
    assert oriented_holonomy(-w1) == -oriented_holonomy(w1) % 1
    assert oriented_holonomy(w1, reverse=True) == -oriented_holonomy(w1) % 1
    assert isinstance(h, Fraction) and 0 <= h < 1


def test_eighth_per_face_on_the_tetrahedron():
    s = tetrahedron()
    assert oriented_holonomy(DiscreteTwoForm(s, (Fraction(1, 8),) * 4)) == Fraction(1, 2)


def test_oriented_holonomy_rejects_non_orientable_surfaces():
    with pytest.raises(ValueError, match="orientable"):
        oriented_holonomy(zero_form(rp2()))


@settings(max_examples=20)
@given(orientable_surfaces, seeds)
def test_bundles_have_integral_curvature(make, seed):
    s, rng = make(), random.Random(seed)
    b = random_bundle(s, rng)
    assert b.defects() == [] and is_integer(b.total_curvature())
    bad = perturb_bundle(b, rng)
    assert bad.defects()
    with pytest.raises(NotABundle):
        shift_by_curvature(zero_form(s), bad)


@settings(max_examples=15)
@given(orientable_surfaces, seeds)
def test_gerbes_trivialize_consistently(make, seed):
    s, rng = make(), random.Random(seed)
    g = random_gerbe(s, rng)
    assert g.defects() == []
    order = list(range(len(s.faces)))
    rng.shuffle(order)
    T1, T2 = trivialize(g), trivialize(g, order)
    L = difference_bundle(T1, T2)
    assert L.defects() == []
    assert T1.omega + L.curvature() == T2.omega
    assert gerbe_holonomy(g) == gerbe_holonomy(g, order)


@given(orientable_surfaces, seeds)
def test_trivial_gerbe_has_the_form_holonomy(make, seed):
    s, rng = make(), random.Random(seed)
    w = random_form(s, rng)
    assert gerbe_holonomy(trivial_gerbe(w)) == oriented_holonomy(w)


def test_broken_gerbe_cocycle_is_rejected():
    # tetrahedron vertices lie in three faces only, so no quadruple exists there
    t = torus7()
    g = random_gerbe(t, random.Random(0))
    c = dict(g.c)
    key = next(iter(sorted(c, key=repr)))
    c[key] += Fraction(1, 3)
    bad = GerbeData(t, g.B, g.A, c)
    assert any("cocycle identity" in d for d in bad.defects())
    with pytest.raises(ValueError):
        trivialize(bad)


def test_twisting_keeps_holonomy():
    s = torus7()
    rng = random.Random(9)
    g = random_gerbe(s, rng)
    sd = surface_data(s)
    lam = {key: Fraction(rng.randint(-5, 5), 4) for key in sd.incidences()}
    g2 = twist(g, lam, {}, {})
    assert gerbe_holonomy(g2) == gerbe_holonomy(g)


@pytest.mark.parametrize("make,chi,connected", [(tetrahedron, 4, False), (torus7, 0, False), (rp2, 2, True)])
def test_orientation_double_cover(make, chi, connected):
    D = orientation_double_cover(make())
    assert D.check() == []
    summ = cover_summary(D)
    assert summ["total_euler"] == chi and summ["total_connected"] == connected and summ["total_orientable"]


@given(orientable_surfaces, seeds)
def test_lift_and_push_down(make, seed):
    w = random_form(make(), random.Random(seed))
    o = lift_oriented(w)
    assert push_down(o) == w
    assert jandl_holonomy(o) == oriented_holonomy(w)


@settings(max_examples=15)
@given(closed_surfaces, seeds)
def test_jandl_holonomy_independent_of_domain(make, seed):
    s, rng = make(), random.Random(seed)
    vals = [Fraction(rng.randint(-9, 9), rng.choice((1, 2, 4))) for _ in s.faces]
    o = orientifold_from_twisted(s, vals, random_closed_theta(s, rng))
    assert o.defects() == []
    h = jandl_holonomy(o)
    for _ in range(10):
        dom = tuple(rng.choice((1, -1)) for _ in s.faces)
        assert jandl_holonomy(o, dom) == h
        assert jandl_holonomy(o.with_orientations(dom)) == h


def test_half_integral_data_on_rp2():
    s = rp2()
    rng = random.Random(1)
    for _ in range(20):
        vals = [Fraction(rng.randint(0, 1), 2) for _ in s.faces]
        o = orientifold_from_twisted(s, vals, random_closed_theta(s, rng))
        assert jandl_holonomy(o) in (0, Fraction(1, 2))


def test_orientifold_defects_are_reported():
    s = rp2()
    o = orientifold_from_twisted(s, [0] * len(s.faces))
    omega = dict(o.omega)
    omega[(0, 1)] = Fraction(1, 3)
    bad = OrientifoldData(o.cover, omega, o.f, o.sigma, o.theta)
    assert any("deck-odd" in d for d in bad.defects())
    theta = dict(o.theta)
    theta[next(iter(theta))] = Fraction(1, 2)
    bad = OrientifoldData(o.cover, o.omega, o.f, o.sigma, theta)
    assert any("closed" in d for d in bad.defects())
    with pytest.raises(ValueError):
        jandl_holonomy(bad)


@pytest.mark.parametrize("n,size", [(2, 2), (2, 4), (3, 3), (3, 6)])
def test_canonical_bundle_of_a_free_action(n, size):
    G = cyclic_group(n)
    r = kan_bundle_check(G, FiniteSet(range(size)), lambda g, m: (m // n) * n + (m + g) % n)
    assert r.matches and r.defects == []


def test_canonical_bundle_needs_a_free_action():
    with pytest.raises(ValueError, match="free"):
        kan_bundle_check(cyclic_group(2), FiniteSet([0, 1]), lambda g, m: m)
