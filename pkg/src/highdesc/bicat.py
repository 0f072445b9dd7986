"""Generic strict bicategories given by enumeration, homotopy limits over a
cosimplicial bicategory, and a brute-force equivalence test.

A bicategory here is any object with

    objects(), one_cells(x, y), two_cells(f, g),
    src1(f), tgt1(f), id1(x), id2(f),
    otimes(f, g)   -- "f after g" on 1-cells,
    otimes2(c, d)  -- horizontal composite of 2-cells, same order,
    circ(c, d)     -- "c after d" vertically,
    cells_equal(c, d).

Everything is assumed strict, which holds for every shipped instance.  This
module is the slow, literal reference; the cochain engine in ``descent`` is
checked against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .prestacks import PointwisePullback, PrestackInstance
from .site import SimplicialMap, SimplicialSet


@dataclass(frozen=True)
class HolimObject:
    P: Any
    Q: Any
    mu: Any


@dataclass(frozen=True)
class HolimMorphism:
    source: HolimObject
    target: HolimObject
    A: Any
    alpha: Any


@dataclass(frozen=True)
class Holim2Morphism:
    source: HolimMorphism
    target: HolimMorphism
    beta: Any


@dataclass(frozen=True, eq=False)
class CosimplicialBicategory:
    """levels[n] for n = 0..3, coface(n, i): levels[n-1] -> levels[n] and
    optionally codegeneracy(n, j): levels[n+1] -> levels[n]."""

    levels: tuple
    cofaces: tuple            # cofaces[n][i], n = 1..3
    codegeneracies: tuple = ()  # codegeneracies[n][j]: levels[n+1] -> levels[n]

    def d(self, n: int, i: int):
        return self.cofaces[n][i]

    def s(self, n: int, j: int):
        return self.codegeneracies[n][j]


def pointwise_cosimplicial(x: PrestackInstance, S: SimplicialSet) -> CosimplicialBicategory:
    """n -> X(S_n) with pullbacks along the face (and degeneracy) maps."""
    if S.top < 3:
        raise ValueError("need simplicial levels 0..3")
    levels = tuple(x.eval(S.levels[n]) for n in range(4))
    cofaces = [()]
    for n in range(1, 4):
        cofaces.append(tuple(PointwisePullback(levels[n - 1], levels[n], S.faces[n][i]) for i in range(n + 1)))
    codegs = []
    if S.degeneracies:
        for n in range(min(3, len(S.degeneracies))):
            codegs.append(tuple(PointwisePullback(levels[n + 1], levels[n], S.degeneracies[n][j])
                                for j in range(n + 1)))
    return CosimplicialBicategory(levels, tuple(cofaces), tuple(codegs))


def constant_cosimplicial(B) -> CosimplicialBicategory:
    ident = _Identity()
    cofaces = ((),) + tuple(tuple(ident for _ in range(n + 1)) for n in range(1, 4))
    codegs = tuple(tuple(ident for _ in range(n + 1)) for n in range(3))
    return CosimplicialBicategory((B, B, B, B), cofaces, codegs)


class _Identity:
    def on_obj(self, x):
        return x

    def on_1(self, f):
        return f

    def on_2(self, c):
        return c


class Holim:
    """holim of a cosimplicial bicategory, enumerated.

    Object: P in B0, Q: d0 P -> d1 P in B1, mu: d2 Q (x) d0 Q => d1 Q in B2 with
    the coherence square in B3.  1-morphism (A, alpha) with
    alpha: Q' (x) d0 A => d1 A (x) Q.  2-morphism beta: A => A'.
    With ``normalized`` the data must restrict to identities along the
    codegeneracies.
    """

    def __init__(self, C: CosimplicialBicategory, normalized: bool = False):
        if normalized and not C.codegeneracies:
            raise ValueError("normalized holim needs codegeneracies")
        self.C = C
        self.normalized = normalized
        self.B = C.levels

    # -- verification ------------------------------------------------------

    def object_defects(self, P, Q, mu) -> list[str]:
        C, B = self.C, self.B
        bad = []
        if B[1].src1(Q) != C.d(1, 0).on_obj(P) or B[1].tgt1(Q) != C.d(1, 1).on_obj(P):
            bad.append("O2: gluing 1-cell has the wrong endpoints")
            return bad
        lhs_1 = B[2].otimes(C.d(2, 2).on_1(Q), C.d(2, 0).on_1(Q))
        if B[2].src2(mu) != lhs_1 or B[2].tgt2(mu) != C.d(2, 1).on_1(Q):
            bad.append("O3: 2-cell has the wrong boundary")
            return bad
        d3 = [C.d(3, i).on_2(mu) for i in range(4)]
        q01 = C.d(3, 2).on_1(C.d(2, 2).on_1(Q))
        q23 = C.d(3, 0).on_1(C.d(2, 0).on_1(Q))
        lhs = B[3].circ(d3[2], B[3].otimes2(B[3].id2(q01), d3[0]))
        rhs = B[3].circ(d3[1], B[3].otimes2(d3[3], B[3].id2(q23)))
        if not B[3].cells_equal(lhs, rhs):
            bad.append("O4: coherence fails")
        if self.normalized:
            if C.s(0, 0).on_1(Q) != B[0].id1(P):
                bad.append("unit: gluing 1-cell not trivial on degenerate edges")
            for j in range(2):
                c = C.s(1, j).on_2(mu)
                if not B[1].cells_equal(c, B[1].id2(B[1].src2(c))):
                    bad.append(f"unit: 2-cell not trivial along s{j}")
        return bad

    def morphism_defects(self, X: HolimObject, Y: HolimObject, A, alpha) -> list[str]:
        C, B = self.C, self.B
        bad = []
        if B[0].src1(A) != X.P or B[0].tgt1(A) != Y.P:
            return ["1M1: 1-cell has the wrong endpoints"]
        if (B[1].src2(alpha) != B[1].otimes(Y.Q, C.d(1, 0).on_1(A))
                or B[1].tgt2(alpha) != B[1].otimes(C.d(1, 1).on_1(A), X.Q)):
            return ["1M2: 2-cell has the wrong boundary"]
        a0 = C.d(2, 2).on_1(C.d(1, 1).on_1(A))
        a2 = C.d(2, 0).on_1(C.d(1, 0).on_1(A))
        q12 = C.d(2, 0).on_1(X.Q)
        qp01 = C.d(2, 2).on_1(Y.Q)
        al = [C.d(2, i).on_2(alpha) for i in range(3)]
        B2 = B[2]
        path1 = B2.circ(B2.otimes2(B2.id2(a0), X.mu),
                        B2.circ(B2.otimes2(al[2], B2.id2(q12)), B2.otimes2(B2.id2(qp01), al[0])))
        path2 = B2.circ(al[1], B2.otimes2(Y.mu, B2.id2(a2)))
        if not B2.cells_equal(path1, path2):
            bad.append("1M3: compatibility with the 2-cells fails")
        if self.normalized:
            c = C.s(0, 0).on_2(alpha)
            if not B[0].cells_equal(c, B[0].id2(B[0].src2(c))):
                bad.append("unit: 2-cell not trivial on degenerate edges")
        return bad

    def two_morphism_defects(self, m: HolimMorphism, n: HolimMorphism, beta) -> list[str]:
        C, B = self.C, self.B
        if B[0].src2(beta) != m.A or B[0].tgt2(beta) != n.A:
            return ["2M1: 2-cell has the wrong boundary"]
        B1 = B[1]
        lhs = B1.circ(n.alpha, B1.otimes2(B1.id2(m.target.Q), C.d(1, 0).on_2(beta)))
        rhs = B1.circ(B1.otimes2(C.d(1, 1).on_2(beta), B1.id2(m.source.Q)), m.alpha)
        return [] if B1.cells_equal(lhs, rhs) else ["2M2: compatibility fails"]

    # -- enumeration -------------------------------------------------------

    def objects(self) -> list[HolimObject]:
        C, B = self.C, self.B
        out = []
        for P in B[0].objects():
            for Q in B[1].one_cells(C.d(1, 0).on_obj(P), C.d(1, 1).on_obj(P)):
                lhs = B[2].otimes(C.d(2, 2).on_1(Q), C.d(2, 0).on_1(Q))
                for mu in B[2].two_cells(lhs, C.d(2, 1).on_1(Q)):
                    if not self.object_defects(P, Q, mu):
                        out.append(HolimObject(P, Q, mu))
        return out

    def morphisms(self, X: HolimObject, Y: HolimObject) -> list[HolimMorphism]:
        C, B = self.C, self.B
        out = []
        for A in B[0].one_cells(X.P, Y.P):
            src = B[1].otimes(Y.Q, C.d(1, 0).on_1(A))
            tgt = B[1].otimes(C.d(1, 1).on_1(A), X.Q)
            for alpha in B[1].two_cells(src, tgt):
                if not self.morphism_defects(X, Y, A, alpha):
                    out.append(HolimMorphism(X, Y, A, alpha))
        return out

    def two_morphisms(self, m: HolimMorphism, n: HolimMorphism) -> list[Holim2Morphism]:
        return [Holim2Morphism(m, n, b) for b in self.B[0].two_cells(m.A, n.A)
                if not self.two_morphism_defects(m, n, b)]

    # -- structure ---------------------------------------------------------

    def identity(self, X: HolimObject) -> HolimMorphism:
        B0, B1 = self.B[0], self.B[1]
        A = B0.id1(X.P)
        return HolimMorphism(X, X, A, B1.id2(X.Q))

    def compose(self, m: HolimMorphism, n: HolimMorphism) -> HolimMorphism:
        """m then n."""
        C, B1 = self.C, self.B[1]
        A, Bc = m.A, n.A
        gamma = B1.circ(B1.otimes2(B1.id2(C.d(1, 1).on_1(Bc)), m.alpha),
                        B1.otimes2(n.alpha, B1.id2(C.d(1, 0).on_1(A))))
        return HolimMorphism(m.source, n.target, self.B[0].otimes(Bc, A), gamma)


@dataclass(frozen=True, eq=False)
class HolimFunctor:
    """Functor between holims induced by a levelwise strict map of cosimplicial
    bicategories (components[n] : source level n -> target level n)."""

    source: Holim
    target: Holim
    components: tuple

    def on_obj(self, X: HolimObject) -> HolimObject:
        c = self.components
        return HolimObject(c[0].on_obj(X.P), c[1].on_1(X.Q), c[2].on_2(X.mu))

    def on_1(self, m: HolimMorphism) -> HolimMorphism:
        c = self.components
        return HolimMorphism(self.on_obj(m.source), self.on_obj(m.target), c[0].on_1(m.A), c[1].on_2(m.alpha))

    def on_2(self, b: Holim2Morphism) -> Holim2Morphism:
        return Holim2Morphism(self.on_1(b.source), self.on_1(b.target), self.components[0].on_2(b.beta))


def pointwise_holim_functor(x: PrestackInstance, f: SimplicialMap, normalized: bool = False) -> HolimFunctor:
    """f*: holim X(S) -> holim X(S') for f: S' -> S."""
    src = Holim(pointwise_cosimplicial(x, f.target), normalized)
    tgt = Holim(pointwise_cosimplicial(x, f.source), normalized)
    comps = tuple(PointwisePullback(src.B[n], tgt.B[n], f.components[n]) for n in range(4))
    return HolimFunctor(src, tgt, comps)


# ---------------------------------------------------------------- brute-force equivalence


@dataclass
class BruteReport:
    fully_faithful: bool
    essentially_surjective: bool
    witness: str = ""

    @property
    def equivalence(self) -> bool:
        return self.fully_faithful and self.essentially_surjective


def brute_force_equivalence(F: HolimFunctor, max_pairs: int | None = None) -> BruteReport:
    """Decide F by exhaustive enumeration.  All 1-cells of a holim of
    2-groupoids are invertible, so 1-isomorphic means "some 1-cell exists"."""
    S, T = F.source, F.target
    src_objs = S.objects()
    tgt_objs = T.objects()
    images = [F.on_obj(x) for x in src_objs]
    es, witness = True, ""
    for y in tgt_objs:
        if not any(T.morphisms(fx, y) for fx in images):
            es, witness = False, f"object not in the essential image: {y!r}"
            break
    ff = True
    pairs = [(a, b) for a in range(len(src_objs)) for b in range(len(src_objs))]
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    for i, j in pairs:
        x, xp = src_objs[i], src_objs[j]
        homs = S.morphisms(x, xp)
        fhoms = [F.on_1(m) for m in homs]
        for mp in T.morphisms(images[i], images[j]):
            if not any(T.two_morphisms(fm, mp) for fm in fhoms):
                ff = False
                witness = witness or f"1-cell not in the essential image of Hom: {mp!r}"
                break
        if not ff:
            break
        for m1 in homs:
            for m2 in homs:
                src2 = S.two_morphisms(m1, m2)
                n_src = len({F.components[0].on_2(b.beta) for b in src2})
                n_tgt = len(T.two_morphisms(F.on_1(m1), F.on_1(m2)))
                if not n_src == len(src2) == n_tgt:
                    ff = False
                    witness = witness or f"2-cells {n_src} -> {n_tgt} between {m1!r} and {m2!r}"
                    break
            if not ff:
                break
        if not ff:
            break
    return BruteReport(ff, es, witness)


def iso_classes(H: Holim, objs: Sequence[HolimObject] | None = None) -> list[list[HolimObject]]:
    objs = list(objs if objs is not None else H.objects())
    classes: list[list[HolimObject]] = []
    for x in objs:
        for cl in classes:
            if H.morphisms(cl[0], x):
                cl.append(x)
                break
        else:
            classes.append([x])
    return classes
