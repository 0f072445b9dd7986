"""Hypothesis strategies for the finite objects of the package."""

from fractions import Fraction

from hypothesis import strategies as st

from highdesc.groupoid import (GroupoidFunctor, NatIso, action_groupoid, connected_groupoid, cyclic_group, delooping,
                               disjoint_union_groupoid, klein_group, pair_groupoid)
from highdesc.site import Cover, FiniteSet, SetMap, grid_surface, rp2, tetrahedron, torus7

labels = st.one_of(st.integers(-5, 20), st.text("abcxyz", min_size=1, max_size=3))


@st.composite
def finite_sets(draw, min_size=0, max_size=5):
    return FiniteSet(draw(st.sets(labels, min_size=min_size, max_size=max_size)))


@st.composite
def set_maps(draw, domain=None, codomain=None):
    dom = domain if domain is not None else draw(finite_sets())
    cod = codomain if codomain is not None else draw(finite_sets(min_size=1))
    return SetMap(dom, cod, {x: draw(st.sampled_from(cod.elements)) for x in dom})


@st.composite
def covers(draw, max_base=3, max_total=5, cover_class="surjection"):
    m = draw(st.integers(1, max_base))
    extra = draw(st.integers(0, max_total - m))
    M = FiniteSet(range(m))
    fibers = list(range(m)) + [draw(st.integers(0, m - 1)) for _ in range(extra)]
    pairs = {f"y{i}": x for i, x in enumerate(fibers)}
    return Cover.from_pairs(pairs, M, cover_class)


@st.composite
def small_groupoids(draw):
    """Disjoint unions of pair groupoids, deloopings and free or non-free action groupoids."""
    kinds = draw(st.lists(st.sampled_from(["pair1", "pair2", "pair3", "b2", "b3", "conn2", "act", "v"]),
                          min_size=1, max_size=3))
    parts = []
    Z2 = cyclic_group(2)
    for k in kinds:
        if k.startswith("pair"):
            parts.append(pair_groupoid(int(k[-1])))
        elif k == "b2":
            parts.append(delooping(Z2))
        elif k == "b3":
            parts.append(delooping(cyclic_group(3)))
        elif k == "conn2":
            parts.append(connected_groupoid(2, Z2))
        elif k == "v":
            parts.append(delooping(klein_group()))
        else:
            n = draw(st.integers(1, 3))
            fixed = draw(st.integers(0, n))
            # Z/2 swaps 2i <-> 2i+1 for i < n - fixed and fixes the rest
            pts = list(range(2 * n))
            act = {}
            for g in Z2.elements:
                for m in pts:
                    act[(g, m)] = m ^ g if m // 2 < n - fixed else m
            parts.append(action_groupoid(Z2, FiniteSet(pts), act))
    return parts[0] if len(parts) == 1 else disjoint_union_groupoid(parts)


closed_surfaces = st.sampled_from([tetrahedron, torus7, rp2, lambda: grid_surface(3, 3, klein=True),
                                   lambda: grid_surface(3, 4)])
orientable_surfaces = st.sampled_from([tetrahedron, torus7, lambda: grid_surface(3, 4)])

rationals = st.builds(Fraction, st.integers(-40, 40), st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12]))


def conjugate(F, H, rng_choice):
    """A functor G naturally isomorphic to F, with eta_x any arrow out of F(x)."""
    g = F.source
    eta = {x: rng_choice([f for f in H.morphisms if H.source[f] == F.F0(x)]) for x in g.objects}
    obj = {x: H.target[eta[x]] for x in g.objects}
    mor = {f: H.compose[(H.compose[(H.inverse[eta[g.source[f]]], F.F1(f))], eta[g.target[f]])]
           for f in g.morphisms}
    G = GroupoidFunctor(g, H, obj, mor)
    return G, NatIso(F, G, eta)
