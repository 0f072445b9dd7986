"""Finite groupoids, functors, natural isomorphisms, nerves and the cylinder.

Composition is stored diagrammatically: ``compose[(f, g)]`` is defined when
``target(f) == source(g)`` and means "first f, then g".  In the usual notation
this is g o f, so the action-groupoid rule (g, m) o (h, n) = (gh, n) reads
``compose[((h, n), (g, m))] == (g*h, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

from .site import (
    Cover,
    FiniteSet,
    SetMap,
    SimplicialMap,
    SimplicialSet,
    canonical,
    fiber_product,
    label_key,
)

Label = Hashable


# ---------------------------------------------------------------- groups


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    elements: tuple
    mul: dict  # (a, b) -> a*b
    name: str = ""

    def __post_init__(self):
        for a in self.elements:
            for b in self.elements:
                if self.mul.get((a, b)) not in self.elements:
                    raise ValueError(f"multiplication table incomplete at {(a, b)!r}")

    @property
    def identity(self) -> Label:
        for e in self.elements:
            if all(self.mul[(e, g)] == g for g in self.elements):
                return e
        raise ValueError("no identity element")

    def inv(self, a: Label) -> Label:
        e = self.identity
        for b in self.elements:
            if self.mul[(a, b)] == e:
                return b
        raise ValueError(f"{a!r} has no inverse")

    def order(self) -> int:
        return len(self.elements)

    def check(self) -> list[str]:
        bad = []
        els = self.elements
        for a, b, c in product(els, repeat=3):
            if self.mul[(self.mul[(a, b)], c)] != self.mul[(a, self.mul[(b, c)])]:
                bad.append(f"associativity fails at {(a, b, c)!r}")
                break
        try:
            self.identity
            for a in els:
                self.inv(a)
        except ValueError as exc:
            bad.append(str(exc))
        return bad


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(range(n))
    return FiniteGroup(els, {(a, b): (a + b) % n for a in els for b in els}, f"Z/{n}")


def klein_group() -> FiniteGroup:
    els = tuple(product(range(2), range(2)))
    return FiniteGroup(els, {(a, b): ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2) for a in els for b in els}, "V4")


def symmetric_group(n: int) -> FiniteGroup:
    from itertools import permutations

    els = tuple(permutations(range(n)))
    # (p*q)(i) = p(q(i))
    return FiniteGroup(els, {(p, q): tuple(p[q[i]] for i in range(n)) for p in els for q in els}, f"S{n}")


def groups_up_to_order(n: int) -> list[FiniteGroup]:
    """One representative of every group of order <= min(n, 7)."""
    if n > 7:
        raise ValueError("group catalogue only goes to order 7")
    out = [cyclic_group(k) for k in range(1, n + 1)]
    if n >= 4:
        out.append(klein_group())
    if n >= 6:
        out.append(symmetric_group(3))
    return sorted(out, key=lambda g: (g.order(), g.name))


def groups_isomorphic(G: FiniteGroup, H: FiniteGroup) -> dict | None:
    """Brute-force isomorphism search; returns the map or None."""
    if G.order() != H.order():
        return None
    gen = _generators(G)
    eG, eH = G.identity, H.identity
    for images in product(H.elements, repeat=len(gen)):
        phi = {eG: eH}
        frontier = [eG]
        ok = True
        while frontier and ok:
            nxt = []
            for a in frontier:
                for g, h in zip(gen, images):
                    b, hb = G.mul[(a, g)], H.mul[(phi[a], h)]
                    if b in phi:
                        if phi[b] != hb:
                            ok = False
                            break
                    else:
                        phi[b] = hb
                        nxt.append(b)
                if not ok:
                    break
            frontier = nxt
        if ok and len(set(phi.values())) == G.order():
            return phi
    return None


def _generators(G: FiniteGroup) -> list:
    gens, span = [], {G.identity}
    for g in G.elements:
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        while frontier:
            nxt = []
            for a in frontier:
                for s in gens:
                    b = G.mul[(a, s)]
                    if b not in span:
                        span.add(b)
                        nxt.append(b)
            frontier = nxt
    return gens


# ---------------------------------------------------------------- groupoids


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    objects: FiniteSet
    morphisms: FiniteSet
    source: dict
    target: dict
    identity: dict
    inverse: dict
    compose: dict
    name: str = ""

    def s(self, f: Label) -> Label:
        return self.source[f]

    def t(self, f: Label) -> Label:
        return self.target[f]

    def comp(self, f: Label, g: Label) -> Label:
        """First f, then g."""
        return self.compose[(f, g)]

    def hom(self, x: Label, y: Label) -> tuple:
        return tuple(f for f in self.morphisms if self.source[f] == x and self.target[f] == y)

    def automorphisms(self, x: Label) -> tuple:
        return self.hom(x, x)

    def automorphism_group(self, x: Label) -> FiniteGroup:
        els = self.automorphisms(x)
        # group product a*b = "b then a" so the group acts on the left
        return FiniteGroup(els, {(a, b): self.compose[(b, a)] for a in els for b in els})

    def orbits(self) -> list[frozenset]:
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for f in self.morphisms:
            a, b = find(self.source[f]), find(self.target[f])
            if a != b:
                parent[a] = b
        groups: dict = {}
        for x in self.objects:
            groups.setdefault(find(x), set()).add(x)
        return sorted((frozenset(g) for g in groups.values()), key=lambda g: label_key(min(g, key=label_key)))

    def composable_pairs(self) -> FiniteSet:
        t = SetMap(self.morphisms, self.objects, self.target)
        s = SetMap(self.morphisms, self.objects, self.source)
        return fiber_product(t, s)[0]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteGroupoid)
            and self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.source == other.source
            and self.target == other.target
            and self.identity == other.identity
            and self.inverse == other.inverse
            and self.compose == other.compose
        )

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def check_axioms(self) -> "GroupoidReport":
        return check_axioms(self)


@dataclass(frozen=True)
class GroupoidReport:
    valid: bool
    defects: tuple


def check_axioms(g: FiniteGroupoid) -> GroupoidReport:
    d: list[str] = []
    O, A = g.objects, g.morphisms
    for name, table, dom, cod in (("source", g.source, A, O), ("target", g.target, A, O),
                                  ("identity", g.identity, O, A), ("inverse", g.inverse, A, A)):
        for x in dom:
            if x not in table:
                d.append(f"{name} undefined on {x!r}")
            elif table[x] not in cod:
                d.append(f"{name}({x!r}) = {table[x]!r} out of range")
    if d:
        return GroupoidReport(False, tuple(d))
    pairs = {(f, h) for f in A for h in A if g.target[f] == g.source[h]}
    for key in g.compose:
        if key not in pairs:
            d.append(f"composition defined on non-composable pair {key!r}")
    for f, h in canonical(pairs):
        if (f, h) not in g.compose:
            d.append(f"composition missing on composable pair {(f, h)!r}")
            continue
        c = g.compose[(f, h)]
        if c not in A:
            d.append(f"composite of {(f, h)!r} is not a morphism")
        elif g.source[c] != g.source[f] or g.target[c] != g.target[h]:
            d.append(f"composite of {(f, h)!r} has wrong source/target")
    if d:
        return GroupoidReport(False, tuple(d))
    for x in O:
        i = g.identity[x]
        if g.source[i] != x or g.target[i] != x:
            d.append(f"identity of {x!r} is not an endomorphism of {x!r}")
    for f in A:
        if g.compose[(g.identity[g.source[f]], f)] != f or g.compose[(f, g.identity[g.target[f]])] != f:
            d.append(f"unit law fails for {f!r}")
        fi = g.inverse[f]
        if g.source[fi] != g.target[f] or g.target[fi] != g.source[f]:
            d.append(f"inverse of {f!r} has wrong source/target")
        elif g.compose[(f, fi)] != g.identity[g.source[f]] or g.compose[(fi, f)] != g.identity[g.target[f]]:
            d.append(f"inverse law fails for {f!r}")
    out_of = {}
    for f in A:
        out_of.setdefault(g.source[f], []).append(f)
    for f, h in canonical(pairs):
        fh = g.compose[(f, h)]
        for k in out_of.get(g.target[h], ()):
            if g.compose[(fh, k)] != g.compose[(f, g.compose[(h, k)])]:
                d.append(f"associativity fails on {(f, h, k)!r}")
    return GroupoidReport(not d, tuple(d))


def from_tables(objects: Iterable, morphisms: dict, compose: dict, identity: dict | None = None,
                inverse: dict | None = None, name: str = "") -> FiniteGroupoid:
    """Build from morphisms {f: (source, target)} and a composition table; identity
    and inverse tables are derived when omitted."""
    O = FiniteSet(objects)
    A = FiniteSet(morphisms)
    src = {f: st[0] for f, st in morphisms.items()}
    tgt = {f: st[1] for f, st in morphisms.items()}
    if identity is None:
        identity = {}
        for x in O:
            for f in A:
                if src[f] == x and tgt[f] == x and all(
                    compose.get((f, h), h) == h for h in A if src[h] == x
                ):
                    identity[x] = f
                    break
    if inverse is None:
        inverse = {}
        for f in A:
            for h in A:
                if src[h] == tgt[f] and tgt[h] == src[f] and compose.get((f, h)) == identity.get(src[f]):
                    inverse[f] = h
                    break
    return FiniteGroupoid(O, A, src, tgt, dict(identity), dict(inverse), dict(compose), name)


def trivial_groupoid(M: FiniteSet | Iterable) -> FiniteGroupoid:
    M = M if isinstance(M, FiniteSet) else FiniteSet(M)
    ident = {x: x for x in M}
    return FiniteGroupoid(M, M, ident, ident, ident, ident, {(x, x): x for x in M}, "trivial")


def delooping(G: FiniteGroup) -> FiniteGroupoid:
    """B(G): one object '*', morphisms the group elements.  "f then g" is g*f."""
    pt = FiniteSet(["*"])
    A = FiniteSet(G.elements)
    st = {g: "*" for g in A}
    comp = {(f, g): G.mul[(g, f)] for f in A for g in A}
    return FiniteGroupoid(pt, A, st, dict(st), {"*": G.identity}, {g: G.inv(g) for g in A}, comp,
                          f"B({G.name})")


def action_groupoid(G: FiniteGroup, M: FiniteSet | Iterable, act: Callable | dict) -> FiniteGroupoid:
    """M // G with morphisms (g, m): m -> g.m and (g, m) o (h, n) = (gh, n)."""
    M = M if isinstance(M, FiniteSet) else FiniteSet(M)
    a = act if callable(act) else (lambda g, m: act[(g, m)])
    for g in G.elements:
        for m in M:
            if a(g, m) not in M:
                raise ValueError(f"action of {g!r} on {m!r} leaves the set")
    e = G.identity
    for m in M:
        if a(e, m) != m:
            raise ValueError(f"identity does not act trivially on {m!r}")
        for g in G.elements:
            for h in G.elements:
                if a(G.mul[(g, h)], m) != a(g, a(h, m)):
                    raise ValueError(f"action is not compatible with the product at {(g, h, m)!r}")
    A = FiniteSet((g, m) for g in G.elements for m in M)
    src = {(g, m): m for g, m in A}
    tgt = {(g, m): a(g, m) for g, m in A}
    comp = {}
    for h, n in A:
        hn = a(h, n)
        for g in G.elements:
            comp[((h, n), (g, hn))] = (G.mul[(g, h)], n)
    return FiniteGroupoid(M, A, src, tgt, {m: (e, m) for m in M}, {(g, m): (G.inv(g), a(g, m)) for g, m in A},
                          comp, f"{len(M)}//{G.name}")


def cech_groupoid(c: Cover) -> FiniteGroupoid:
    """Objects Y, morphisms Y x_M Y with (y0, y1): y0 -> y1."""
    A, _, _ = fiber_product(c.total, c.total)
    src = {p: p[0] for p in A}
    tgt = {p: p[1] for p in A}
    comp = {}
    for (y0, y1) in A:
        for (z1, y2) in A:
            if z1 == y1:
                comp[((y0, y1), (y1, y2))] = (y0, y2)
    return FiniteGroupoid(c.Y, A, src, tgt, {y: (y, y) for y in c.Y}, {(a, b): (b, a) for a, b in A}, comp, "cech")


def pair_groupoid(n: int | Iterable) -> FiniteGroupoid:
    objs = FiniteSet(range(n)) if isinstance(n, int) else FiniteSet(n)
    A = FiniteSet((a, b) for a in objs for b in objs)
    comp = {((a, b), (b2, c)): (a, c) for a, b in A for b2, c in A if b == b2}
    g = FiniteGroupoid(objs, A, {p: p[0] for p in A}, {p: p[1] for p in A}, {x: (x, x) for x in objs},
                       {(a, b): (b, a) for a, b in A}, comp, f"pair({len(objs)})")
    return g


def interval_groupoid() -> FiniteGroupoid:
    """Two objects a, b and the isomorphism l: a -> b."""
    mor = {"id_a": ("a", "a"), "id_b": ("b", "b"), "l": ("a", "b"), "l_inv": ("b", "a")}
    comp = {
        ("id_a", "id_a"): "id_a", ("id_a", "l"): "l", ("l", "id_b"): "l", ("l", "l_inv"): "id_a",
        ("id_b", "id_b"): "id_b", ("id_b", "l_inv"): "l_inv", ("l_inv", "id_a"): "l_inv", ("l_inv", "l"): "id_b",
    }
    return from_tables(["a", "b"], mor, comp, {"a": "id_a", "b": "id_b"},
                       {"id_a": "id_a", "id_b": "id_b", "l": "l_inv", "l_inv": "l"}, "I")


def product_groupoid(g: FiniteGroupoid, h: FiniteGroupoid) -> FiniteGroupoid:
    O = FiniteSet(product(g.objects, h.objects))
    A = FiniteSet(product(g.morphisms, h.morphisms))
    comp = {}
    for (f1, u1) in A:
        for f2 in g.morphisms:
            if g.source[f2] != g.target[f1]:
                continue
            for u2 in h.morphisms:
                if h.source[u2] == h.target[u1]:
                    comp[((f1, u1), (f2, u2))] = (g.compose[(f1, f2)], h.compose[(u1, u2)])
    return FiniteGroupoid(
        O, A,
        {(f, u): (g.source[f], h.source[u]) for f, u in A},
        {(f, u): (g.target[f], h.target[u]) for f, u in A},
        {(x, y): (g.identity[x], h.identity[y]) for x, y in O},
        {(f, u): (g.inverse[f], h.inverse[u]) for f, u in A},
        comp, f"{g.name}x{h.name}",
    )


def disjoint_union_groupoid(parts: Sequence[FiniteGroupoid]) -> FiniteGroupoid:
    O = FiniteSet((i, x) for i, p in enumerate(parts) for x in p.objects)
    A = FiniteSet((i, f) for i, p in enumerate(parts) for f in p.morphisms)
    src, tgt, ident, inv, comp = {}, {}, {}, {}, {}
    for i, p in enumerate(parts):
        for f in p.morphisms:
            src[(i, f)] = (i, p.source[f])
            tgt[(i, f)] = (i, p.target[f])
            inv[(i, f)] = (i, p.inverse[f])
        for x in p.objects:
            ident[(i, x)] = (i, p.identity[x])
        for (f, h), c in p.compose.items():
            comp[((i, f), (i, h))] = (i, c)
    return FiniteGroupoid(O, A, src, tgt, ident, inv, comp, "+".join(p.name for p in parts))


def connected_groupoid(n_objects: int, G: FiniteGroup) -> FiniteGroupoid:
    """pair(n) x B(G), relabelled as (x, g, y)."""
    return relabel(product_groupoid(pair_groupoid(n_objects), delooping(G)),
                   lambda x: x[0], lambda f: (f[0][0], f[1], f[0][1]), f"pair({n_objects})xB({G.name})")


def relabel(g: FiniteGroupoid, on_obj: Callable, on_mor: Callable, name: str | None = None) -> FiniteGroupoid:
    return FiniteGroupoid(
        FiniteSet(on_obj(x) for x in g.objects),
        FiniteSet(on_mor(f) for f in g.morphisms),
        {on_mor(f): on_obj(x) for f, x in g.source.items()},
        {on_mor(f): on_obj(x) for f, x in g.target.items()},
        {on_obj(x): on_mor(f) for x, f in g.identity.items()},
        {on_mor(f): on_mor(h) for f, h in g.inverse.items()},
        {(on_mor(f), on_mor(h)): on_mor(c) for (f, h), c in g.compose.items()},
        g.name if name is None else name,
    )


# ---------------------------------------------------------------- functors


@dataclass(frozen=True, eq=False)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    on_objects: dict
    on_morphisms: dict

    def F0(self, x: Label) -> Label:
        return self.on_objects[x]

    def F1(self, f: Label) -> Label:
        return self.on_morphisms[f]

    def check(self) -> list[str]:
        G, H = self.source, self.target
        bad = []
        for x in G.objects:
            if self.on_objects.get(x) not in H.objects:
                bad.append(f"object {x!r} has no valid image")
        for f in G.morphisms:
            if self.on_morphisms.get(f) not in H.morphisms:
                bad.append(f"morphism {f!r} has no valid image")
        if bad:
            return bad
        for f in G.morphisms:
            Ff = self.F1(f)
            if H.source[Ff] != self.F0(G.source[f]) or H.target[Ff] != self.F0(G.target[f]):
                bad.append(f"F does not commute with source/target at {f!r}")
            if H.inverse[Ff] != self.F1(G.inverse[f]):
                bad.append(f"F does not commute with inverse at {f!r}")
        for x in G.objects:
            if self.F1(G.identity[x]) != H.identity[self.F0(x)]:
                bad.append(f"F does not preserve the identity of {x!r}")
        for (f, h), c in G.compose.items():
            if H.compose.get((self.F1(f), self.F1(h))) != self.F1(c):
                bad.append(f"F does not preserve the composite of {(f, h)!r}")
        return bad

    def then(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """First self, then other."""
        return GroupoidFunctor(self.source, other.target,
                               {x: other.F0(self.F0(x)) for x in self.source.objects},
                               {f: other.F1(self.F1(f)) for f in self.source.morphisms})

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GroupoidFunctor) and self.source == other.source and self.target == other.target
                and self.on_objects == other.on_objects and self.on_morphisms == other.on_morphisms)

    __hash__ = object.__hash__

    @classmethod
    def identity(cls, g: FiniteGroupoid) -> "GroupoidFunctor":
        return cls(g, g, {x: x for x in g.objects}, {f: f for f in g.morphisms})


def projection_functor(c: Cover) -> GroupoidFunctor:
    """Pi^Y: Cech(Y) -> (M => M)."""
    C, T = cech_groupoid(c), trivial_groupoid(c.M)
    return GroupoidFunctor(C, T, {y: c(y) for y in c.Y}, {p: c(p[0]) for p in C.morphisms})


def quotient_functor(G: FiniteGroup, M: FiniteSet, act: Callable) -> GroupoidFunctor:
    """M // G -> (M/G => M/G) onto orbit representatives."""
    A = action_groupoid(G, M, act)
    orbit_of = {}
    for orb in A.orbits():
        rep = min(orb, key=label_key)
        for m in orb:
            orbit_of[m] = rep
    Q = trivial_groupoid(FiniteSet(set(orbit_of.values())))
    return GroupoidFunctor(A, Q, dict(orbit_of), {f: orbit_of[A.source[f]] for f in A.morphisms})


def functor_to_point(g: FiniteGroupoid) -> GroupoidFunctor:
    pt = trivial_groupoid(["*"])
    return GroupoidFunctor(g, pt, {x: "*" for x in g.objects}, {f: "*" for f in g.morphisms})


def point_into(g: FiniteGroupoid, x: Label) -> GroupoidFunctor:
    pt = trivial_groupoid(["*"])
    return GroupoidFunctor(pt, g, {"*": x}, {"*": g.identity[x]})


@dataclass(frozen=True, eq=False)
class NatIso:
    """eta: F => G with eta_x: F(x) -> G(x) in the target groupoid."""

    source_functor: GroupoidFunctor
    target_functor: GroupoidFunctor
    component: dict

    def check(self) -> list[str]:
        F, G = self.source_functor, self.target_functor
        H = F.target
        bad = []
        if F.source is not G.source and F.source != G.source:
            return ["functors have different sources"]
        for x in F.source.objects:
            e = self.component.get(x)
            if e not in H.morphisms:
                bad.append(f"no component at {x!r}")
                continue
            if H.source[e] != F.F0(x) or H.target[e] != G.F0(x):
                bad.append(f"component at {x!r} has wrong endpoints")
        if bad:
            return bad
        for f in F.source.morphisms:
            x, y = F.source.source[f], F.source.target[f]
            if H.compose[(F.F1(f), self.component[y])] != H.compose[(self.component[x], G.F1(f))]:
                bad.append(f"naturality fails at {f!r}")
        return bad

    def then(self, other: "NatIso") -> "NatIso":
        """Vertical composite F => G => K."""
        H = self.source_functor.target
        return NatIso(self.source_functor, other.target_functor,
                      {x: H.compose[(e, other.component[x])] for x, e in self.component.items()})

    def inverse(self) -> "NatIso":
        H = self.source_functor.target
        return NatIso(self.target_functor, self.source_functor,
                      {x: H.inverse[e] for x, e in self.component.items()})

    @classmethod
    def identity(cls, F: GroupoidFunctor) -> "NatIso":
        return cls(F, F, {x: F.target.identity[F.F0(x)] for x in F.source.objects})


# ---------------------------------------------------------------- cylinder


@dataclass(frozen=True, eq=False)
class Cylinder:
    groupoid: FiniteGroupoid
    i0: GroupoidFunctor
    i1: GroupoidFunctor


def cylinder(g: FiniteGroupoid) -> Cylinder:
    C = product_groupoid(g, interval_groupoid())
    i0 = GroupoidFunctor(g, C, {x: (x, "a") for x in g.objects}, {f: (f, "id_a") for f in g.morphisms})
    i1 = GroupoidFunctor(g, C, {x: (x, "b") for x in g.objects}, {f: (f, "id_b") for f in g.morphisms})
    return Cylinder(C, i0, i1)


def natiso_to_cylinder(eta: NatIso, cyl: Cylinder | None = None) -> GroupoidFunctor:
    """The functor Gamma x I -> Omega restricting to F, G and sending id_x x l to eta_x."""
    F, G = eta.source_functor, eta.target_functor
    g, H = F.source, F.target
    cyl = cyl or cylinder(g)
    e = eta.component
    obj = {}
    for x in g.objects:
        obj[(x, "a")] = F.F0(x)
        obj[(x, "b")] = G.F0(x)
    mor = {}
    for f in g.morphisms:
        x, y = g.source[f], g.target[f]
        mor[(f, "id_a")] = F.F1(f)
        mor[(f, "id_b")] = G.F1(f)
        mor[(f, "l")] = H.compose[(F.F1(f), e[y])]
        mor[(f, "l_inv")] = H.compose[(G.F1(f), H.inverse[e[y]])]
    return GroupoidFunctor(cyl.groupoid, H, obj, mor)


def cylinder_to_natiso(Hf: GroupoidFunctor, g: FiniteGroupoid, cyl: Cylinder | None = None) -> NatIso:
    cyl = cyl or cylinder(g)
    F = cyl.i0.then(Hf)
    G = cyl.i1.then(Hf)
    comp = {x: Hf.F1((g.identity[x], "l")) for x in g.objects}
    return NatIso(F, G, comp)


# ---------------------------------------------------------------- nerves


def nerve(g: FiniteGroupoid, max_level: int = 4) -> SimplicialSet:
    """Degree 0: objects; degree 1: morphisms; degree n >= 2: composable
    n-tuples (f1, ..., fn) with t(f_i) = s(f_{i+1})."""
    if not 1 <= max_level <= 4:
        raise ValueError("max_level must be between 1 and 4")
    top = max_level
    levels = [g.objects, g.morphisms]
    out_of: dict = {}
    for f in g.morphisms:
        out_of.setdefault(g.source[f], []).append(f)
    chains = [(f,) for f in g.morphisms]
    for n in range(2, top + 1):
        chains = [c + (h,) for c in chains for h in out_of.get(g.target[c[-1]], ())]
        levels.append(FiniteSet(chains))

    def tup(x, n):
        return (x,) if n == 1 else x

    def untup(t):
        return t[0] if len(t) == 1 else t

    faces = [(), (SetMap(g.morphisms, g.objects, g.target), SetMap(g.morphisms, g.objects, g.source))]
    for n in range(2, top + 1):
        fs = []
        for i in range(n + 1):
            def d(x, i=i, n=n):
                if i == 0:
                    return untup(x[1:])
                if i == n:
                    return untup(x[:-1])
                return untup(x[: i - 1] + (g.compose[(x[i - 1], x[i])],) + x[i + 1:])
            fs.append(SetMap(levels[n], levels[n - 1], {x: d(x) for x in levels[n]}))
        faces.append(tuple(fs))
    degs = [(SetMap(g.objects, g.morphisms, g.identity),)]
    for n in range(1, top):
        ds = []
        for i in range(n + 1):
            def s(x, i=i, n=n):
                t = tup(x, n)
                obj = g.source[t[0]] if i == 0 else g.target[t[i - 1]]
                return t[:i] + (g.identity[obj],) + t[i:]
            ds.append(SetMap(levels[n], levels[n + 1], {x: s(x) for x in levels[n]}))
        degs.append(tuple(ds))
    return SimplicialSet(tuple(levels), tuple(faces), tuple(degs), name=f"N({g.name})")


def nerve_of_functor(F: GroupoidFunctor, max_level: int = 4,
                     source_nerve: SimplicialSet | None = None,
                     target_nerve: SimplicialSet | None = None) -> SimplicialMap:
    A = source_nerve or nerve(F.source, max_level)
    B = target_nerve or nerve(F.target, max_level)
    comps = [SetMap(A.levels[0], B.levels[0], dict(F.on_objects)),
             SetMap(A.levels[1], B.levels[1], dict(F.on_morphisms))]
    for n in range(2, A.top + 1):
        comps.append(SetMap(A.levels[n], B.levels[n], {x: tuple(F.F1(f) for f in x) for x in A.levels[n]}))
    return SimplicialMap(A, B, tuple(comps))


def cech_nerve_comparison(c: Cover, max_level: int = 4) -> SimplicialMap:
    """Levelwise bijection nerve(Cech(Y)) -> cover_nerve(Y) (chains to vertex tuples)."""
    from .site import cover_nerve

    B = cover_nerve(c, max_level)
    A = nerve(cech_groupoid(c), B.top)
    comps = [SetMap.identity(A.levels[0]), SetMap(A.levels[1], B.levels[1], {p: p for p in A.levels[1]})]
    for n in range(2, A.top + 1):
        comps.append(SetMap(A.levels[n], B.levels[n],
                            {x: tuple(f[0] for f in x) + (x[-1][1],) for x in A.levels[n]}))
    return SimplicialMap(A, B, tuple(comps))


def is_isomorphic_groupoid(g: FiniteGroupoid, h: FiniteGroupoid) -> bool:
    """Decided via connected-component types (vertex group and orbit size)."""
    def types(x):
        out = []
        for orb in x.orbits():
            rep = min(orb, key=label_key)
            out.append((len(orb), x.automorphism_group(rep)))
        return out

    a, b = types(g), types(h)
    if len(a) != len(b):
        return False
    used = [False] * len(b)
    for n, G in a:
        for j, (m, H) in enumerate(b):
            if not used[j] and n == m and groups_isomorphic(G, H) is not None:
                used[j] = True
                break
        else:
            return False
    return True
