"""Fully faithful, essentially surjective, weak, strong and surjective
equivalences of finite groupoids; the factorization of a weak equivalence;
Morita equivalence."""

from __future__ import annotations

from dataclasses import dataclass


from .groupoid import (
    FiniteGroupoid,
    GroupoidFunctor,
    NatIso,
    cech_groupoid,
    groups_isomorphic,
    nerve_of_functor,
)
from .site import (
    SPLIT,
    SURJECTION,
    Cover,
    FiniteSet,
    SetMap,
    fiber_product,
    label_key,
    product_set,
)


@dataclass(frozen=True)
class FullyFaithful:
    holds: bool
    bijection: dict | None = None  # (x, y, lam) -> f
    counterexample: tuple | None = None  # ((x, y), lam, preimages)


def is_fully_faithful(F: GroupoidFunctor) -> FullyFaithful:
    """Is (s, t, F1): G1 -> (G0 x G0) x_{L0 x L0} L1 a bijection?"""
    G, L = F.source, F.target
    hom_L: dict = {}
    for lam in L.morphisms:
        hom_L.setdefault((L.source[lam], L.target[lam]), []).append(lam)
    fibers: dict = {}
    for f in G.morphisms:
        fibers.setdefault((G.source[f], G.target[f], F.F1(f)), []).append(f)
    for x in G.objects:
        for y in G.objects:
            for lam in hom_L.get((F.F0(x), F.F0(y)), ()):
                pre = fibers.get((x, y, lam), [])
                if len(pre) != 1:
                    return FullyFaithful(False, counterexample=((x, y), lam, tuple(pre)))
    return FullyFaithful(True, bijection={k: v[0] for k, v in fibers.items()})


@dataclass(frozen=True)
class EssentiallySurjective:
    holds: bool
    cover_class: str
    induced_map: SetMap
    section: SetMap | None = None
    missed: tuple = ()


def essential_surjection_map(F: GroupoidFunctor) -> SetMap:
    """G0 x_{L0} L1 -> L0, (x, lam: F0 x -> l) |-> l."""
    G, L = F.source, F.target
    F0 = SetMap(G.objects, L.objects, dict(F.on_objects))
    s = SetMap(L.morphisms, L.objects, dict(L.source))
    P, _, p2 = fiber_product(F0, s)
    return SetMap(P, L.objects, {pl: L.target[pl[1]] for pl in P})


def is_essentially_surjective(F: GroupoidFunctor, cover_class: str = SURJECTION) -> EssentiallySurjective:
    if cover_class not in (SPLIT, SURJECTION):
        raise ValueError(f"unknown cover class {cover_class!r}")
    m = essential_surjection_map(F)
    sec = m.section()
    if sec is None:
        missed = tuple(l for l in m.codomain if not m.fiber(l))
        return EssentiallySurjective(False, cover_class, m, None, missed)
    return EssentiallySurjective(True, cover_class, m, sec)


@dataclass(frozen=True)
class EquivalenceReport:
    fully_faithful: FullyFaithful
    essentially_surjective: dict  # cover class -> EssentiallySurjective
    section: SetMap | None

    @property
    def weak(self) -> bool:
        return self.fully_faithful.holds and self.essentially_surjective[SURJECTION].holds

    def recheck(self, F: GroupoidFunctor) -> bool:
        """Re-verify stored witnesses against F."""
        G, L = F.source, F.target
        ff = self.fully_faithful
        if ff.holds:
            for (x, y, lam), f in ff.bijection.items():
                if (G.source[f], G.target[f], F.F1(f)) != (x, y, lam):
                    return False
        else:
            (x, y), lam, pre = ff.counterexample
            actual = [f for f in G.hom(x, y) if F.F1(f) == lam]
            if len(actual) == 1 or sorted(actual, key=label_key) != sorted(pre, key=label_key):
                return False
        if self.section is not None:
            for l in L.objects:
                x, lam = self.section(l)
                if L.source[lam] != F.F0(x) or L.target[lam] != l:
                    return False
        return True


def equivalence_report(F: GroupoidFunctor) -> EquivalenceReport:
    es = {c: is_essentially_surjective(F, c) for c in (SPLIT, SURJECTION)}
    return EquivalenceReport(is_fully_faithful(F), es, es[SPLIT].section)


def is_weak_equivalence(F: GroupoidFunctor, cover_class: str = SURJECTION) -> bool:
    return is_fully_faithful(F).holds and is_essentially_surjective(F, cover_class).holds


@dataclass(frozen=True, eq=False)
class StrongEquivalence:
    """F with quasi-inverse G, eta: F then G => id, eps: G then F => id."""

    functor: GroupoidFunctor
    inverse: GroupoidFunctor
    eta: NatIso
    eps: NatIso

    def check(self) -> list[str]:
        bad = self.inverse.check() + self.eta.check() + self.eps.check()
        F, G = self.functor, self.inverse
        if self.eta.source_functor != F.then(G) or self.eta.target_functor != GroupoidFunctor.identity(F.source):
            bad.append("eta has the wrong endpoints")
        if self.eps.source_functor != G.then(F) or self.eps.target_functor != GroupoidFunctor.identity(F.target):
            bad.append("eps has the wrong endpoints")
        return bad


def _unique_lift(F: GroupoidFunctor, x, y, lam):
    for f in F.source.hom(x, y):
        if F.F1(f) == lam:
            return f
    raise ValueError("functor is not full")


def is_strong_equivalence(F: GroupoidFunctor) -> StrongEquivalence | None:
    """Fully faithful plus a section of the essential-surjectivity map gives an
    explicit quasi-inverse (first-match section)."""
    if not is_fully_faithful(F).holds:
        return None
    es = is_essentially_surjective(F, SPLIT)
    if not es.holds:
        return None
    G, L = F.source, F.target
    sec = es.section
    G0 = {l: sec(l)[0] for l in L.objects}
    phi = {l: sec(l)[1] for l in L.objects}  # phi_l: F G0 l -> l
    G1 = {}
    for lam in L.morphisms:
        a, b = L.source[lam], L.target[lam]
        target_mor = L.compose[(L.compose[(phi[a], lam)], L.inverse[phi[b]])]
        G1[lam] = _unique_lift(F, G0[a], G0[b], target_mor)
    Ginv = GroupoidFunctor(L, G, G0, G1)
    eps = NatIso(Ginv.then(F), GroupoidFunctor.identity(L), dict(phi))
    eta = {x: _unique_lift(F, G0[F.F0(x)], x, phi[F.F0(x)]) for x in G.objects}
    return StrongEquivalence(F, Ginv, NatIso(F.then(Ginv), GroupoidFunctor.identity(G), eta), eps)


def strong_from_retract(G: GroupoidFunctor, P: GroupoidFunctor) -> StrongEquivalence:
    """G: A -> B with a fully faithful retract P (G then P = id_A).  The
    transformation P then G => id_B has components the unique lifts of
    identities along P."""
    if G.then(P) != GroupoidFunctor.identity(G.source):
        raise ValueError("P is not a retract of G")
    if not is_fully_faithful(P).holds:
        raise ValueError("retract is not fully faithful")
    A, B = G.source, G.target
    eps = {b: _unique_lift(P, G.F0(P.F0(b)), b, A.identity[P.F0(b)]) for b in B.objects}
    eta = {a: A.identity[a] for a in A.objects}
    return StrongEquivalence(G, P, NatIso(G.then(P), GroupoidFunctor.identity(A), eta),
                             NatIso(P.then(G), GroupoidFunctor.identity(B), eps))


# ---------------------------------------------------------------- factorization


@dataclass(frozen=True, eq=False)
class Factorization:
    """F = G then H through Lam.  G is strong with retract P; H is a
    surjective equivalence."""

    middle: FiniteGroupoid
    G: GroupoidFunctor
    H: GroupoidFunctor
    retract: GroupoidFunctor
    strong: StrongEquivalence


def factorize(F: GroupoidFunctor) -> Factorization:
    """Lam0 = G0 x_{F0, s} O1, H0 = target, Lam1 = Lam0 x_{O0} O1 x_{O0} Lam0."""
    ff = is_fully_faithful(F)
    es = is_essentially_surjective(F)
    if not ff.holds:
        raise ValueError(f"precondition: not fully faithful, fiber {ff.counterexample!r}")
    if not es.holds:
        raise ValueError(f"precondition: not essentially surjective, missed {es.missed!r}")
    Gm, O = F.source, F.target
    L0 = FiniteSet((g, w) for g in Gm.objects for w in O.morphisms if O.source[w] == F.F0(g))
    H0 = {lam: O.target[lam[1]] for lam in L0}
    by_H0: dict = {}
    for lam in L0:
        by_H0.setdefault(H0[lam], []).append(lam)
    L1 = FiniteSet((a, w, b) for w in O.morphisms
                   for a in by_H0.get(O.source[w], ()) for b in by_H0.get(O.target[w], ()))
    src = {m: m[0] for m in L1}
    tgt = {m: m[2] for m in L1}
    ident = {lam: (lam, O.identity[H0[lam]], lam) for lam in L0}
    inv = {(a, w, b): (b, O.inverse[w], a) for a, w, b in L1}
    out_of: dict = {}
    for m in L1:
        out_of.setdefault(m[0], []).append(m)
    comp = {(m, n): (m[0], O.compose[(m[1], n[1])], n[2]) for m in L1 for n in out_of.get(m[2], ())}
    Lam = FiniteGroupoid(L0, L1, src, tgt, ident, inv, comp, "factor")
    G0 = {g: (g, O.identity[F.F0(g)]) for g in Gm.objects}
    G1 = {f: (G0[Gm.source[f]], F.F1(f), G0[Gm.target[f]]) for f in Gm.morphisms}
    G = GroupoidFunctor(Gm, Lam, G0, G1)
    H = GroupoidFunctor(Lam, O, H0, {m: m[1] for m in L1})
    P0 = {lam: lam[0] for lam in L0}
    P1 = {}
    for a, w, b in L1:
        # unique g: a0 -> b0 with F g = a1 ; w ; b1^-1
        want = O.compose[(O.compose[(a[1], w)], O.inverse[b[1]])]
        P1[(a, w, b)] = _unique_lift(F, a[0], b[0], want)
    P = GroupoidFunctor(Lam, Gm, P0, P1)
    return Factorization(Lam, G, H, P, strong_from_retract(G, P))


def is_surjective_equivalence(H: GroupoidFunctor) -> bool:
    return is_fully_faithful(H).holds and SetMap(H.source.objects, H.target.objects, dict(H.on_objects)).is_surjective()


def nerve_levels_surjective(H: GroupoidFunctor, upto: int = 3) -> list[bool]:
    m = nerve_of_functor(H, max_level=upto)
    return [m.components[n].is_surjective() for n in range(upto + 1)]


# ---------------------------------------------------------------- Morita


def morita_invariant(G: FiniteGroupoid) -> list:
    """One automorphism group per orbit (orbit representative = least object)."""
    out = []
    for orb in G.orbits():
        rep = min(orb, key=label_key)
        out.append((rep, G.automorphism_group(rep)))
    return out


def _match_invariants(a: list, b: list) -> list | None:
    """Pair up orbits with isomorphic groups; returns [(rep_a, rep_b, iso)] or None."""
    if len(a) != len(b):
        return None
    used = [False] * len(b)
    pairs = []

    def rec(i):
        if i == len(a):
            return True
        ra, Ga = a[i]
        for j, (rb, Gb) in enumerate(b):
            if used[j]:
                continue
            phi = groups_isomorphic(Ga, Gb)
            if phi is None:
                continue
            used[j] = True
            pairs.append((ra, rb, phi))
            if rec(i + 1):
                return True
            used[j] = False
            pairs.pop()
        return False

    return pairs if rec(0) else None


def explicit_weak_equivalence(G: FiniteGroupoid, L: FiniteGroupoid, matching: list) -> GroupoidFunctor:
    """Collapse each orbit of G onto the matched representative of L."""
    obj, mor = {}, {}
    connector = {}
    for ra, rb, phi in matching:
        orb = next(o for o in G.orbits() if ra in o)
        for x in orb:
            obj[x] = rb
            connector[x] = G.identity[x] if x == ra else G.hom(ra, x)[0]
        for f in G.morphisms:
            x, y = G.source[f], G.target[f]
            if x in orb:
                g = G.compose[(G.compose[(connector[x], f)], G.inverse[connector[y]])]
                mor[f] = phi[g]
    return GroupoidFunctor(G, L, obj, mor)


@dataclass(frozen=True, eq=False)
class MoritaResult:
    equivalent: bool
    zigzag: tuple | None = None  # (Omega, leg to G, leg to L)
    invariant: tuple = ()  # orders of orbit groups, for the distinguishing case


def morita_equivalent(G: FiniteGroupoid, L: FiniteGroupoid) -> MoritaResult:
    a, b = morita_invariant(G), morita_invariant(L)
    m = _match_invariants(a, b)
    if m is None:
        inv = (tuple(sorted(g.order() for _, g in a)), tuple(sorted(g.order() for _, g in b)))
        return MoritaResult(False, None, inv)
    F = explicit_weak_equivalence(G, L, m)
    return MoritaResult(True, (G, GroupoidFunctor.identity(G), F))


def functor_search(G: FiniteGroupoid, L: FiniteGroupoid, want=is_weak_equivalence, limit: int | None = None):
    """Backtracking enumeration of all functors G -> L; yields those for which
    ``want`` holds.  Pruning uses only hom-set sizes and functoriality."""
    objs = list(G.objects)
    homsize = {}
    for f in L.morphisms:
        k = (L.source[f], L.target[f])
        homsize[k] = homsize.get(k, 0) + 1
    Ghom = {}
    for f in G.morphisms:
        k = (G.source[f], G.target[f])
        Ghom[k] = Ghom.get(k, 0) + 1
    found = 0

    def assign_objects(i, F0):
        if i == len(objs):
            yield from assign_morphisms(F0)
            return
        x = objs[i]
        for y in L.objects:
            ok = True
            for x2, y2 in list(F0.items()) + [(x, y)]:
                for a, b, c, d in ((x, x2, y, y2), (x2, x, y2, y)):
                    if Ghom.get((a, b), 0) != homsize.get((c, d), 0):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                F0[x] = y
                yield from assign_objects(i + 1, F0)
                del F0[x]

    def assign_morphisms(F0):
        mors = [f for f in G.morphisms if f not in G.identity.values()]
        F1 = {G.identity[x]: L.identity[F0[x]] for x in G.objects}

        def rec(j):
            if j == len(mors):
                yield GroupoidFunctor(G, L, dict(F0), dict(F1))
                return
            f = mors[j]
            if f in F1:
                yield from rec(j + 1)
                return
            fi = G.inverse[f]
            for lam in L.hom(F0[G.source[f]], F0[G.target[f]]):
                F1[f] = lam
                if fi != f:
                    if fi in F1:
                        del F1[f]
                        continue
                    F1[fi] = L.inverse[lam]
                elif L.inverse[lam] != lam:
                    del F1[f]
                    continue
                if _consistent(G, L, F1):
                    yield from rec(j + 1)
                del F1[f]
                if fi != f:
                    del F1[fi]

        yield from rec(0)

    for F in assign_objects(0, {}):
        if want(F):
            yield F
            found += 1
            if limit is not None and found >= limit:
                return


def _consistent(G, L, F1) -> bool:
    for (f, h), c in G.compose.items():
        if f in F1 and h in F1 and c in F1:
            if L.compose[(F1[f], F1[h])] != F1[c]:
                return False
    return True


def zigzag_search(G: FiniteGroupoid, L: FiniteGroupoid) -> tuple | None:
    """Brute-force oracle: a span G <- Omega -> L of weak equivalences with
    Omega in {G, L}, found by exhaustive functor search."""
    for F in functor_search(G, L, limit=1):
        return (G, GroupoidFunctor.identity(G), F)
    for F in functor_search(L, G, limit=1):
        return (L, F, GroupoidFunctor.identity(L))
    return None


def check_zigzag(z: tuple, G: FiniteGroupoid, L: FiniteGroupoid) -> bool:
    Om, a, b = z
    return (a.source == Om and b.source == Om and a.target == G and b.target == L
            and not a.check() and not b.check() and is_weak_equivalence(a) and is_weak_equivalence(b))


# ---------------------------------------------------------------- covers


def product_cover(c: Cover, d: Cover) -> Cover:
    Y, M = product_set(c.Y, d.Y), product_set(c.M, d.M)
    pi = SetMap(Y, M, {(y, z): (c(y), d(z)) for y, z in Y})
    pieces = ()
    if c.cover_class == d.cover_class == SPLIT:
        pieces = tuple(frozenset((y, z) for y in P for z in Q) for P in c.pieces for Q in d.pieces)
    cls = SPLIT if pieces else SURJECTION
    return Cover(pi, cls, pieces)


def product_cover_lemma_check(c: Cover, d: Cover) -> bool:
    try:
        p = product_cover(c, d)
    except ValueError:
        return False
    if c.cover_class == d.cover_class == SPLIT:
        return p.cover_class == SPLIT
    return p.total.is_surjective()


def cech_functor(src: Cover, dst: Cover, s: SetMap) -> GroupoidFunctor:
    """Cech(Z) -> Cech(Y) induced by a refinement s: Z -> Y over M."""
    if src.M != dst.M:
        raise ValueError("base mismatch")
    for z in src.Y:
        if dst(s(z)) != src(z):
            raise ValueError(f"refinement triangle does not commute at {z!r}")
    A, B = cech_groupoid(src), cech_groupoid(dst)
    return GroupoidFunctor(A, B, dict(s.assignment), {(a, b): (s(a), s(b)) for a, b in A.morphisms})
