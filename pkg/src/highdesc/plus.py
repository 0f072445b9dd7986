"""The plus construction.

X+(Gamma) has objects (Y, G): a cover Y of the objects of Gamma and a descent
object G of X over the covering groupoid Gamma^Y.  A 1-morphism lives on a
common refinement Z with maps to both covers; 2-morphisms are compared after
refining to a common refinement.  Covers are drawn from a bounded enumeration
(|Y| <= |Gamma_0| + extra, default extra = |Gamma_0| + 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field


from .descent import (DescentBicategory, DescentMorphism, DescentObject, Descent2Morphism, DescentPullback,
                      EngineReport, find_morphism, is_equivalence, lift_morphism)
from .groupoid import FiniteGroupoid, GroupoidFunctor, cech_groupoid, nerve, nerve_of_functor, trivial_groupoid
from .prestacks import PrestackInstance
from .site import (SPLIT, SURJECTION, Cover, FiniteSet, SetMap, augmentation, canonical_common_refinement,
                   enumerate_covers, fiber_product)


# ---------------------------------------------------------------- covering groupoids


def covering_groupoid(G: FiniteGroupoid, c: Cover) -> tuple[FiniteGroupoid, GroupoidFunctor]:
    """Gamma^Y with morphisms (y, g, y') for g: pi(y) -> pi(y'), and Pi: Gamma^Y -> Gamma.
    Over a discrete groupoid the label g is dropped, so M^Y is literally the Cech groupoid."""
    if c.M != G.objects:
        raise ValueError("cover must cover the object set")
    discrete = all(G.source[f] == G.target[f] and G.identity[G.source[f]] == f for f in G.morphisms)
    if discrete:
        H = cech_groupoid(c)
        return H, GroupoidFunctor(H, G, {y: c(y) for y in c.Y}, {p: G.identity[c(p[0])] for p in H.morphisms})
    mors = [(y, g, y2) for y in c.Y for g in G.morphisms for y2 in c.Y
            if G.source[g] == c(y) and G.target[g] == c(y2)]
    A = FiniteSet(mors)
    comp = {}
    for (y0, g, y1) in A:
        for (z1, h, y2) in A:
            if z1 == y1:
                comp[((y0, g, y1), (y1, h, y2))] = (y0, G.compose[(g, h)], y2)
    H = FiniteGroupoid(c.Y, A, {m: m[0] for m in A}, {m: m[2] for m in A},
                       {y: (y, G.identity[c(y)], y) for y in c.Y},
                       {(y, g, y2): (y2, G.inverse[g], y) for (y, g, y2) in A}, comp, f"{G.name}^Y")
    Pi = GroupoidFunctor(H, G, {y: c(y) for y in c.Y}, {m: m[1] for m in A})
    return H, Pi


def covering_square_check(G: FiniteGroupoid, c: Cover) -> bool:
    """Gamma^Y_1 is the pullback Y x Gamma_1 x Y: morphisms y -> y' biject with Hom(pi y, pi y')."""
    H, Pi = covering_groupoid(G, c)
    for y in c.Y:
        for y2 in c.Y:
            hs = H.hom(y, y2)
            if sorted(map(repr, (Pi.F1(h) for h in hs))) != sorted(map(repr, G.hom(c(y), c(y2)))):
                return False
    return True


# ---------------------------------------------------------------- plus data


@dataclass(frozen=True)
class PlusObject:
    cover: Cover
    data: DescentObject


@dataclass(frozen=True)
class PlusMorphism:
    source: PlusObject
    target: PlusObject
    refinement: Cover
    to_source: SetMap
    to_target: SetMap
    data: DescentMorphism


@dataclass(frozen=True)
class Plus2Morphism:
    source: PlusMorphism
    target: PlusMorphism
    refinement: Cover
    to_source: SetMap
    to_target: SetMap
    data: Descent2Morphism


_DESC_CACHE: dict = {}
_MAP_CACHE: dict = {}


class PlusBicategory:
    def __init__(self, x: PrestackInstance, G: FiniteGroupoid, cover_class: str = SURJECTION,
                 extra: int | None = None, normalized: bool = True):
        self.x = x
        self.G = G
        self.cover_class = cover_class
        self.extra = len(G.objects) + 2 if extra is None else extra
        self.normalized = normalized
        gkey = (G.objects, G.morphisms, frozenset(G.compose.items()))
        self._desc = _DESC_CACHE.setdefault((gkey, x.coeff, normalized), {})
        self._nerve_maps = _MAP_CACHE.setdefault((gkey, x.coeff, normalized), {})

    @property
    def bound(self) -> int:
        return len(self.G.objects) + self.extra

    def covers(self) -> list[Cover]:
        return enumerate_covers(self.G.objects, self.bound, self.cover_class)

    def identity_cover(self) -> Cover:
        return Cover.identity(self.G.objects, self.cover_class)

    # -- descent bicategories over covering groupoids

    def nerve_over(self, c: Cover):
        key = c
        if key not in self._desc:
            H, Pi = covering_groupoid(self.G, c)
            N = nerve(H)
            self._desc[key] = (H, Pi, N, DescentBicategory(N, self.x.coeff, self.normalized))
        return self._desc[key]

    def desc(self, c: Cover) -> DescentBicategory:
        return self.nerve_over(c)[3]

    def refinement_functor(self, fine: Cover, coarse: Cover, s: SetMap) -> DescentPullback:
        """Pullback X(Gamma^coarse) -> X(Gamma^fine) along s: fine -> coarse over Gamma_0."""
        for z in fine.Y:
            if coarse(s(z)) != fine(z):
                raise ValueError("refinement triangle does not commute")
        key = (fine, coarse, s)
        if key not in self._nerve_maps:
            Hf, _, Nf, Df = self.nerve_over(fine)
            Hc, _, Nc, Dc = self.nerve_over(coarse)
            if Hc.morphisms and len(next(iter(Hc.morphisms))) == 2:
                on_m = {m: (s(m[0]), s(m[1])) for m in Hf.morphisms}
            else:
                on_m = {m: (s(m[0]), m[1], s(m[2])) for m in Hf.morphisms}
            F = GroupoidFunctor(Hf, Hc, {z: s(z) for z in fine.Y}, on_m)
            f = nerve_of_functor(F, source_nerve=Nf, target_nerve=Nc)
            self._nerve_maps[key] = DescentPullback(f, Dc, Df)
        return self._nerve_maps[key]

    def base_functor(self, c: Cover) -> DescentPullback:
        """X(Gamma) -> X(Gamma^Y) along Pi^Y, using the identity cover for X(Gamma)."""
        ident = self.identity_cover()
        return self.refinement_functor(c, ident, SetMap(c.Y, ident.Y, {y: c(y) for y in c.Y}))

    # -- cells

    def embed(self, x: DescentObject) -> PlusObject:
        return PlusObject(self.identity_cover(), x)

    def restrict(self, o: PlusObject, fine: Cover, s: SetMap) -> DescentObject:
        return self.refinement_functor(fine, o.cover, s).on_obj(o.data)

    def canonical(self, o: PlusObject, p: PlusObject):
        ref = canonical_common_refinement(o.cover, p.cover)
        return ref.cover, ref.to_left, ref.to_right

    def stable_hom(self, o: PlusObject, p: PlusObject):
        Z, s, t = self.canonical(o, p)
        D = self.desc(Z)
        return Z, s, t, D, self.restrict(o, Z, s), self.restrict(p, Z, t)

    def find_1morphism(self, o: PlusObject, p: PlusObject) -> PlusMorphism | None:
        Z, s, t, D, a, b = self.stable_hom(o, p)
        m = find_morphism(D, a, b)
        return None if m is None else PlusMorphism(o, p, Z, s, t, m)

    def is_1_isomorphic(self, o: PlusObject, p: PlusObject) -> bool:
        return self.find_1morphism(o, p) is not None

    def identity(self, o: PlusObject) -> PlusMorphism:
        ident = SetMap.identity(o.cover.Y)
        return PlusMorphism(o, o, o.cover, ident, ident, self.desc(o.cover).identity(o.data))

    def check_1morphism(self, m: PlusMorphism) -> list[str]:
        bad = []
        Z = m.refinement
        for z in Z.Y:
            if m.source.cover(m.to_source(z)) != Z(z) or m.target.cover(m.to_target(z)) != Z(z):
                bad.append("refinement triangle does not commute")
                break
        if bad:
            return bad
        D = self.desc(Z)
        if m.data.source != self.restrict(m.source, Z, m.to_source) or \
                m.data.target != self.restrict(m.target, Z, m.to_target):
            return ["descent morphism does not connect the refined objects"]
        return D.morphism_defects(m.data)

    def to_canonical(self, m: PlusMorphism) -> tuple[PlusMorphism, Descent2Morphism]:
        """Move a 1-morphism to the canonical common refinement, with the
        2-isomorphism over the original refinement relating the two."""
        Zc, s, t, Dc, a, b = self.stable_hom(m.source, m.target)
        u = SetMap(m.refinement.Y, Zc.Y, {z: (m.to_source(z), m.to_target(z)) for z in m.refinement.Y})
        F = self.refinement_functor(m.refinement, Zc, u)
        got = lift_morphism(F, a, b, m.data)
        if got is None:
            raise ValueError("refinement functor is not full on this Hom category")
        mc, beta = got
        return PlusMorphism(m.source, m.target, Zc, s, t, mc), beta

    def compose(self, m: PlusMorphism, n: PlusMorphism) -> PlusMorphism:
        """m then n on Z'' = Z x_{Y'} Z'; falls back to the canonical
        refinements when that fiber product does not cover."""
        if m.target != n.source:
            raise ValueError("plus morphisms not composable")
        Z2, p1, p2 = fiber_product(m.to_target, n.to_source)
        zeta = p1.then(m.refinement.total)
        if set(zeta.image()) != set(self.G.objects):
            m, _ = self.to_canonical(m)
            n, _ = self.to_canonical(n)
            Z2, p1, p2 = fiber_product(m.to_target, n.to_source)
            zeta = p1.then(m.refinement.total)
        W = Cover(zeta, self.cover_class if self.cover_class == SURJECTION else SURJECTION)
        if self.cover_class == SPLIT:
            W = W.with_class(SPLIT)
        Fm = self.refinement_functor(W, m.refinement, p1)
        Fn = self.refinement_functor(W, n.refinement, p2)
        D = self.desc(W)
        data = D.compose(Fm.on_1(m.data), Fn.on_1(n.data))
        return PlusMorphism(m.source, n.target, W, p1.then(m.to_source), p2.then(n.to_target), data)

    def same_2cell(self, b: Plus2Morphism, c: Plus2Morphism) -> bool:
        """Compare two 2-cell representatives on V = pairs with equal images
        in both 1-morphism refinements."""
        if b.source != c.source or b.target != c.target:
            return False
        pairs = {(w, v): b.refinement(w) for w in b.refinement.Y for v in c.refinement.Y
                 if b.to_source(w) == c.to_source(v) and b.to_target(w) == c.to_target(v)}
        if set(pairs.values()) != set(self.G.objects):
            raise ValueError("representatives have no compatible common refinement")
        V = Cover(SetMap(FiniteSet(pairs), self.G.objects, pairs), SURJECTION)
        pb = SetMap(V.Y, b.refinement.Y, {q: q[0] for q in V.Y})
        pc = SetMap(V.Y, c.refinement.Y, {q: q[1] for q in V.Y})
        return self.refinement_functor(V, b.refinement, pb).on_2(b.data).beta == \
            self.refinement_functor(V, c.refinement, pc).on_2(c.data).beta

    # -- global structure

    def object_representatives(self) -> list[PlusObject]:
        """One plus object per pi_0 class of each X(Gamma^Y), Y bounded."""
        reps = []
        for c in self.covers():
            D = self.desc(c)
            reps.extend(PlusObject(c, x) for x in D.pi0_representatives())
        return reps

    def iso_classes(self) -> list[list[PlusObject]]:
        classes: list[list[PlusObject]] = []
        for o in self.object_representatives():
            for cl in classes:
                if self.is_1_isomorphic(cl[0], o):
                    cl.append(o)
                    break
            else:
                classes.append([o])
        return classes

    def embedding_report(self) -> EngineReport:
        """X(Gamma) -> X+(Gamma) is an equivalence iff every bounded refinement
        functor X(Gamma) -> X(Gamma^W) is (fully faithful gives the Hom part,
        essential surjectivity the object part)."""
        ff, es, fails = True, True, []
        for c in self.covers():
            r = is_equivalence(self.base_functor(c))
            ff &= r.fully_faithful
            es &= r.essentially_surjective
            fails += [f"cover {sorted(map(repr, c.Y))}: {f}" for f in r.failures]
        return EngineReport(ff, es, [], fails)


def plus_eval(x: PrestackInstance, M: FiniteSet, cover_class: str = SURJECTION, extra: int | None = None,
              normalized: bool = True) -> PlusBicategory:
    return PlusBicategory(x, trivial_groupoid(M), cover_class, extra, normalized)


def plus_on_groupoid(x: PrestackInstance, G: FiniteGroupoid, cover_class: str = SURJECTION,
                     extra: int | None = None, normalized: bool = True) -> PlusBicategory:
    return PlusBicategory(x, G, cover_class, extra, normalized)


def compose_plus(P: PlusBicategory, m: PlusMorphism, n: PlusMorphism) -> PlusMorphism:
    return P.compose(m, n)


# ---------------------------------------------------------------- stack verification


@dataclass
class StackReport:
    cover: Cover
    plus: bool
    fully_faithful: bool
    essentially_surjective: bool
    steps: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def equivalence(self) -> bool:
        return self.fully_faithful and self.essentially_surjective

    def as_dict(self) -> dict:
        return {"plus": self.plus, "fully_faithful": self.fully_faithful,
                "essentially_surjective": self.essentially_surjective, "equivalence": self.equivalence,
                "steps": self.steps, "witness": self.witness}


_EMBED_CACHE: dict = {}


def _embedding(P: PlusBicategory) -> EngineReport:
    key = (P.x.coeff, P.G.objects, P.G.morphisms, frozenset(P.G.compose.items()), P.cover_class, P.extra)
    if key not in _EMBED_CACHE:
        _EMBED_CACHE[key] = P.embedding_report()
    return _EMBED_CACHE[key]


def verify_stack(x: PrestackInstance, c: Cover, plus: bool = True, extra: int | None = None,
                 witnesses: int = 4, seed: int | None = None, cech_extra: int = 1) -> StackReport:
    """Decide tau_Y for X (plus=False) or for X+ (plus=True).

    For X+ the descent bicategory along Y is X+(Cech(Y)).  tau_Y for X+ is
    compared with tau_Y for X through the two canonical embeddings
    X(M) -> X+(M) and X(Cech Y) -> X+(Cech Y); when both embeddings are
    equivalences tau_Y for X+ is an equivalence exactly when tau_Y for X is.
    The embedding over the Cech groupoid is checked on covers exceeding |Y|
    by at most ``cech_extra`` points."""
    tau = DescentPullback(augmentation(c), DescentBicategory(augmentation(c).target, x.coeff, True),
                          DescentBicategory(augmentation(c).source, x.coeff, True))
    r = is_equivalence(tau, witnesses=witnesses, seed=seed)
    steps = {"tau": r.as_dict()}
    if not plus:
        return StackReport(c, False, r.fully_faithful, r.essentially_surjective, steps, r.witness)
    P_base = plus_eval(x, c.M, c.cover_class, extra)
    P_cech = plus_on_groupoid(x, cech_groupoid(c), c.cover_class, cech_extra)
    e1 = _embedding(P_base)
    e2 = _embedding(P_cech)
    steps["embed_base"] = e1.as_dict()
    steps["embed_cech"] = e2.as_dict()
    if not (e1.equivalence and e2.equivalence):
        return StackReport(c, True, False, False, steps, {"failure": "an embedding into the plus construction "
                                                                      "is not an equivalence"})
    return StackReport(c, True, r.fully_faithful, r.essentially_surjective, steps, r.witness)
