"""Descent bicategories in cochain form and the equivalence engine.

For a prestack given by strict 2-group data (K, A, sign) and a simplicial set
S with levels 0..3 the homotopy limit has

    objects      (k, mu)      k in C^1(S; K), mu in C^2(S; A)
                              delta k = 0,  delta_k mu = 0
    1-morphisms  (a, alpha)   a in C^0(S; K), alpha in C^1(S; A)
                              k' = k - delta a,
                              delta_k' alpha = mu' - sign(a(v0)) mu
    2-morphisms  beta         beta in C^0(S; A) with alpha' = alpha - delta_k' beta

where delta_k is the coboundary twisted by sign(k(first edge)) on the 0-th
face.  These are exactly the conditions produced by the enumerative holim in
``bicat`` (tests compare both).

Pullback along f: S' -> S decides as follows (all groups of prime order).
f* is fully faithful iff H^0(K) is an isomorphism, H^1(K) is injective and
for every class k in H^1(K): H^0_k(A), H^1_k(A) are isomorphisms and
H^2_k(A) is injective.  It is an equivalence iff additionally H^1(K) and
every H^2_k(A) are surjective.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

from typing import Sequence

import numpy as np

from . import linalg as la
from .prestacks import AbGroup, Coefficients, PrestackInstance
from .site import (Cover, FiniteSet, SetMap, SimplicialMap, SimplicialSet, augmentation, canonical_common_refinement,
                   constant_simplicial, cover_map_nerve, cover_nerve)


def seeded_rng(seed: int | None = None) -> random.Random:
    if seed is None:
        seed = int(os.environ.get("HD_SEED", "0"))
    return random.Random(seed)


# ---------------------------------------------------------------- cochains


class Cochains:
    """Cochain coordinates on a simplicial set.  In normalized mode cochains
    vanish on degenerate simplices and only the others carry coordinates."""

    def __init__(self, S: SimplicialSet, normalized: bool = False):
        if S.top < 3:
            raise ValueError("descent needs simplicial levels 0..3")
        self.S = S
        self.normalized = normalized
        self.basis: list[list] = []
        for n in range(4):
            deg = S.degenerate(n) if normalized else set()
            self.basis.append([x for x in S.levels[n] if x not in deg])
        self.index = [{x: i for i, x in enumerate(b)} for b in self.basis]
        self._first = [None, {y: y for y in self.basis[1]}]
        for n in (2, 3):
            self._first.append({x: S.first_edge(n, x) for x in self.basis[n]})
        self._v0 = [None, None] + [{x: S.vertex0(n, x) for x in self.basis[n]} for n in (2, 3)]
        self._v0[1] = {y: S.vertex0(1, y) for y in self.basis[1]}

    def dim(self, n: int) -> int:
        return len(self.basis[n])

    def value(self, c: Sequence, n: int, x) -> int:
        i = self.index[n].get(x)
        return 0 if i is None else int(c[i])

    def zero(self, n: int) -> tuple:
        return (0,) * self.dim(n)

    def signs(self, n: int, k: Sequence | None, coeff: Coefficients) -> np.ndarray:
        """sign(k(first edge x)) for x in basis[n], n >= 1."""
        if k is None or not coeff.twisted:
            return np.ones(self.dim(n), dtype=np.int64)
        return np.array([coeff.sign(self.value(k, 1, self._first[n][x])) for x in self.basis[n]], dtype=np.int64)

    def vertex_signs(self, n: int, a: Sequence, coeff: Coefficients) -> np.ndarray:
        """sign(a(v0 x)) for x in basis[n]."""
        if not coeff.twisted:
            return np.ones(self.dim(n), dtype=np.int64)
        if n == 0:
            return np.array([coeff.sign(int(v)) for v in a], dtype=np.int64)
        return np.array([coeff.sign(self.value(a, 0, self._v0[n][x])) for x in self.basis[n]], dtype=np.int64)

    def delta(self, n: int, p: int, twist: np.ndarray | None = None) -> np.ndarray:
        """Coboundary C^n -> C^{n+1} mod p; ``twist`` multiplies the 0-th face."""
        if not 0 <= n <= 2:
            raise ValueError("coboundaries exist for degrees 0..2")
        rows, cols = self.basis[n + 1], self.index[n]
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        faces = self.S.faces[n + 1]
        for r, x in enumerate(rows):
            for i in range(n + 2):
                c = cols.get(faces[i](x))
                if c is None:
                    continue
                coef = -1 if i % 2 else 1
                if i == 0 and twist is not None:
                    coef *= int(twist[r])
                M[r, c] += coef
        return M % max(p, 1)

    def apply_delta(self, n: int, c: Sequence, p: int, twist=None) -> tuple:
        return tuple(int(v) for v in (self.delta(n, p, twist) @ np.asarray(c, dtype=np.int64)) % max(p, 1))


def pull_matrix(f: SimplicialMap, src: "Cochains", dst: "Cochains", n: int, p: int) -> np.ndarray:
    """f*: C^n(base) -> C^n(top) for f: top -> base; ``src`` lives on the base."""
    M = np.zeros((dst.dim(n), src.dim(n)), dtype=np.int64)
    comp = f.components[n]
    for r, x in enumerate(dst.basis[n]):
        c = src.index[n].get(comp(x))
        if c is not None:
            M[r, c] = 1
    return M % max(p, 1)


# ---------------------------------------------------------------- the bicategory


@dataclass(frozen=True)
class DescentObject:
    k: tuple
    mu: tuple


@dataclass(frozen=True)
class DescentMorphism:
    source: DescentObject
    target: DescentObject
    a: tuple
    alpha: tuple


@dataclass(frozen=True)
class Descent2Morphism:
    source: DescentMorphism
    target: DescentMorphism
    beta: tuple


def _modulus(G: AbGroup) -> int:
    if not G.finite:
        raise ValueError("descent needs finite coefficient groups")
    return G.n


class DescentBicategory:
    """Desc_X(S) for a 2-group prestack X, cochain presentation."""

    def __init__(self, S: SimplicialSet, coeff: Coefficients, normalized: bool = False, name: str = ""):
        self.S = S
        self.coeff = coeff
        self.normalized = normalized
        self.C = Cochains(S, normalized)
        self.pK = _modulus(coeff.K)
        self.pA = _modulus(coeff.A)
        self.name = name

    # -- conditions ---------------------------------------------------------

    def _dK(self, n):
        return self._cache(("K", n), lambda: self.C.delta(n, self.pK))

    def _cache(self, key, fn):
        store = self.__dict__.setdefault("_mats", {})
        if key not in store:
            store[key] = fn()
        return store[key]

    def dA(self, n: int, k: Sequence | None) -> np.ndarray:
        if not self.coeff.twisted or self.pA <= 2:
            return self._cache(("A", n), lambda: self.C.delta(n, self.pA))
        tw = self.C.signs(n + 1, k, self.coeff)
        key = ("A", n, tw.tobytes())
        return self._cache(key, lambda: self.C.delta(n, self.pA, tw))

    def _vec(self, c, p):
        return np.asarray(c, dtype=np.int64) % max(p, 1)

    def object_defects(self, x: DescentObject) -> list[str]:
        bad = []
        if len(x.k) != self.C.dim(1) or len(x.mu) != self.C.dim(2):
            return ["shape: cochain lengths do not match the simplicial set"]
        if (self._dK(1) @ self._vec(x.k, self.pK) % max(self.pK, 1)).any():
            bad.append("gate: gluing 1-cells are not composable (delta k != 0)")
            return bad
        if (self.dA(2, x.k) @ self._vec(x.mu, self.pA) % max(self.pA, 1)).any():
            bad.append("O4: coherence fails (delta_k mu != 0)")
        return bad

    def morphism_defects(self, m: DescentMorphism) -> list[str]:
        x, y = m.source, m.target
        if len(m.a) != self.C.dim(0) or len(m.alpha) != self.C.dim(1):
            return ["shape: cochain lengths do not match the simplicial set"]
        pK, pA = max(self.pK, 1), max(self.pA, 1)
        lhs = (self._vec(y.k, pK) + self._dK(0) @ self._vec(m.a, pK)) % pK
        if (lhs != self._vec(x.k, pK)).any():
            return ["gate: 1-cell does not intertwine the gluing data (k' != k - delta a)"]
        sg = self.C.vertex_signs(2, m.a, self.coeff)
        rhs = (self._vec(y.mu, pA) - sg * self._vec(x.mu, pA)) % pA
        if ((self.dA(1, y.k) @ self._vec(m.alpha, pA)) % pA != rhs).any():
            return ["1M3: compatibility with the 2-cells fails"]
        return []

    def two_morphism_defects(self, b: Descent2Morphism) -> list[str]:
        m, n = b.source, b.target
        if m.source != n.source or m.target != n.target:
            return ["2M1: parallel 1-morphisms required"]
        if tuple(m.a) != tuple(n.a):
            return ["2M1: 2-cells only relate 1-morphisms with equal 1-cell part"]
        pA = max(self.pA, 1)
        lhs = (self._vec(m.alpha, pA) - self.dA(0, m.target.k) @ self._vec(b.beta, pA)) % pA
        return [] if (lhs == self._vec(n.alpha, pA)).all() else ["2M2: compatibility fails"]

    # -- structure ----------------------------------------------------------

    def identity(self, x: DescentObject) -> DescentMorphism:
        return DescentMorphism(x, x, self.C.zero(0), self.C.zero(1))

    def compose(self, m: DescentMorphism, n: DescentMorphism) -> DescentMorphism:
        """m then n: (a + b, beta + sign(b(d1 y)) alpha)."""
        if m.target != n.source:
            raise ValueError("1-morphisms not composable")
        pK, pA = max(self.pK, 1), max(self.pA, 1)
        a = tuple(int(v) for v in (self._vec(m.a, pK) + self._vec(n.a, pK)) % pK)
        sg = self._edge_source_signs(n.a)
        alpha = tuple(int(v) for v in (self._vec(n.alpha, pA) + sg * self._vec(m.alpha, pA)) % pA)
        return DescentMorphism(m.source, n.target, a, alpha)

    def _edge_source_signs(self, a) -> np.ndarray:
        """sign(a(d1 y)) for 1-simplices y (d1 y is the initial vertex)."""
        return self.C.vertex_signs(1, a, self.coeff)

    def inverse(self, m: DescentMorphism) -> DescentMorphism:
        pK, pA = max(self.pK, 1), max(self.pA, 1)
        a = tuple(int(v) for v in (-self._vec(m.a, pK)) % pK)
        sg = self._edge_source_signs(a)
        alpha = tuple(int(v) for v in (-sg * self._vec(m.alpha, pA)) % pA)
        return DescentMorphism(m.target, m.source, a, alpha)

    def vcompose(self, b: Descent2Morphism, c: Descent2Morphism) -> Descent2Morphism:
        """b then c."""
        pA = max(self.pA, 1)
        beta = tuple(int(v) for v in (self._vec(b.beta, pA) + self._vec(c.beta, pA)) % pA)
        return Descent2Morphism(b.source, c.target, beta)

    def hcompose(self, b: Descent2Morphism, c: Descent2Morphism) -> Descent2Morphism:
        """Horizontal composite: b on the first leg, c on the second."""
        pA = max(self.pA, 1)
        sg = self.C.vertex_signs(0, c.source.a, self.coeff)
        beta = tuple(int(v) for v in (self._vec(c.beta, pA) + sg * self._vec(b.beta, pA)) % pA)
        return Descent2Morphism(self.compose(b.source, c.source), self.compose(b.target, c.target), beta)

    def id2(self, m: DescentMorphism) -> Descent2Morphism:
        return Descent2Morphism(m, m, self.C.zero(0))

    # -- linear-algebra views ------------------------------------------------

    def k_cocycles(self) -> np.ndarray:
        return la.kernel(self._dK(1), self.pK)

    def mu_cocycles(self, k) -> np.ndarray:
        return la.kernel(self.dA(2, k), self.pA)

    def trivial_object(self) -> DescentObject:
        return DescentObject(self.C.zero(1), self.C.zero(2))

    def objects(self, limit: int = 1 << 14) -> list[DescentObject]:
        out = []
        for k in la.span_elements(self.k_cocycles(), self.pK, limit):
            kt = tuple(int(v) for v in k)
            for mu in la.span_elements(self.mu_cocycles(kt), self.pA, limit):
                out.append(DescentObject(kt, tuple(int(v) for v in mu)))
                if len(out) > limit:
                    raise ValueError("too many objects to enumerate")
        return out

    def count_objects(self) -> int:
        total = 0
        for k in la.span_elements(self.k_cocycles(), self.pK):
            total += max(self.pA, 1) ** la.kernel_dim(self.dA(2, tuple(k)), self.pA) if self.pA > 1 else 1
        return total

    def morphisms(self, x: DescentObject, y: DescentObject, limit: int = 1 << 14) -> list[DescentMorphism]:
        pK, pA = self.pK, self.pA
        d0 = self._dK(0)
        rhs = (self._vec(x.k, pK) - self._vec(y.k, pK)) % max(pK, 1)
        a0 = la.solve(d0, rhs, pK) if self.C.dim(1) else np.zeros(self.C.dim(0), dtype=np.int64)
        if a0 is None:
            return []
        out = []
        for da in la.span_elements(la.kernel(d0, pK), pK, limit):
            a = tuple(int(v) for v in (a0 + da) % max(pK, 1))
            sg = self.C.vertex_signs(2, a, self.coeff)
            target = (self._vec(y.mu, pA) - sg * self._vec(x.mu, pA)) % max(pA, 1)
            D = self.dA(1, y.k)
            al0 = la.solve(D, target, pA)
            if al0 is None:
                continue
            for dal in la.span_elements(la.kernel(D, pA), pA, limit):
                out.append(DescentMorphism(x, y, a, tuple(int(v) for v in (al0 + dal) % max(pA, 1))))
        return out

    def two_morphisms(self, m: DescentMorphism, n: DescentMorphism) -> list[Descent2Morphism]:
        if tuple(m.a) != tuple(n.a) or m.source != n.source or m.target != n.target:
            return []
        pA = self.pA
        D = self.dA(0, m.target.k)
        rhs = (self._vec(m.alpha, pA) - self._vec(n.alpha, pA)) % max(pA, 1)
        b0 = la.solve(D, rhs, pA)
        if b0 is None:
            return []
        return [Descent2Morphism(m, n, tuple(int(v) for v in (b0 + db) % max(pA, 1)))
                for db in la.span_elements(la.kernel(D, pA), pA)]

    def is_1_isomorphic(self, x: DescentObject, y: DescentObject) -> bool:
        return find_morphism(self, x, y) is not None

    def iso_classes(self, objs: Sequence[DescentObject] | None = None) -> list[list[DescentObject]]:
        objs = list(objs if objs is not None else self.objects())
        classes: list[list[DescentObject]] = []
        for x in objs:
            for cl in classes:
                if self.is_1_isomorphic(cl[0], x):
                    cl.append(x)
                    break
            else:
                classes.append([x])
        return classes

    def pi0_count(self) -> int:
        """Number of 1-isomorphism classes, from cohomology (no enumeration of objects)."""
        return pi0_count(self)

    def pi0_representatives(self) -> list[DescentObject]:
        return pi0_representatives(self)


def find_morphism(D: DescentBicategory, x: DescentObject, y: DescentObject) -> DescentMorphism | None:
    """Some 1-morphism x -> y, by linear solves (the sign twist is handled by
    trying every a in the affine family when it matters)."""
    pK, pA = D.pK, D.pA
    d0 = D._dK(0)
    rhs = (D._vec(x.k, pK) - D._vec(y.k, pK)) % max(pK, 1)
    a0 = la.solve(d0, rhs, pK)
    if a0 is None:
        return None
    Dy = D.dA(1, y.k)
    twisted = D.coeff.twisted and pA > 2
    family = la.span_elements(la.kernel(d0, pK), pK) if twisted else [np.zeros(D.C.dim(0), dtype=np.int64)]
    for da in family:
        a = tuple(int(v) for v in (a0 + da) % max(pK, 1))
        sg = D.C.vertex_signs(2, a, D.coeff)
        target = (D._vec(y.mu, pA) - sg * D._vec(x.mu, pA)) % max(pA, 1)
        al = la.solve(Dy, target, pA)
        if al is not None:
            return DescentMorphism(x, y, a, tuple(int(v) for v in al % max(pA, 1)))
    return None


def pi0_representatives(D: DescentBicategory) -> list[DescentObject]:
    """One object per 1-isomorphism class: a gluing class k from H^1(K) and a
    class of H^2_k(A), up to the sign action of locally constant H^0(K)."""
    C = D.C
    pK, pA = D.pK, D.pA
    out = []
    for k in h1_representatives(D):
        if pA <= 1:
            out.append(DescentObject(k, C.zero(2)))
            continue
        Z = la.kernel(D.dA(2, k), pA)
        B = D.dA(1, k)
        comp = la.complement_basis(Z, B, pA)
        twisted = D.coeff.twisted and pA > 2
        zero_cocycles = ([tuple(int(v) for v in a) for a in la.span_elements(la.kernel(D._dK(0), pK), pK)]
                         if twisted else [])
        seen = set()
        for v in la.span_elements(comp, pA):
            key = tuple(la.reduce_mod_span(v, B, pA))
            if key in seen:
                continue
            out.append(DescentObject(k, tuple(int(t) for t in v)))
            seen.add(key)
            for a in zero_cocycles:
                sg = C.vertex_signs(2, a, D.coeff)
                seen.add(tuple(la.reduce_mod_span((sg * v) % pA, B, pA)))
    return out


def pi0_count(D: DescentBicategory) -> int:
    return len(pi0_representatives(D))


def h1_representatives(D: DescentBicategory) -> list[tuple]:
    Z = la.kernel(D._dK(1), D.pK)
    B = D._dK(0)
    comp = la.complement_basis(Z, B, D.pK)
    return [tuple(int(v) for v in k) for k in la.span_elements(comp, D.pK)]


# ---------------------------------------------------------------- pullback functors


@dataclass(frozen=True, eq=False)
class DescentPullback:
    """f*: Desc(S) -> Desc(S') for a simplicial map f: S' -> S."""

    f: SimplicialMap
    source: DescentBicategory
    target: DescentBicategory

    def _m(self, n, p):
        store = self.__dict__.setdefault("_mats", {})
        key = (n, p)
        if key not in store:
            store[key] = pull_matrix(self.f, self.source.C, self.target.C, n, p)
        return store[key]

    def pull(self, c: Sequence, n: int, p: int) -> tuple:
        if p <= 1:
            return (0,) * self.target.C.dim(n)
        return tuple(int(v) for v in (self._m(n, p) @ np.asarray(c, dtype=np.int64)) % p)

    def on_obj(self, x: DescentObject) -> DescentObject:
        return DescentObject(self.pull(x.k, 1, self.source.pK), self.pull(x.mu, 2, self.source.pA))

    def on_1(self, m: DescentMorphism) -> DescentMorphism:
        return DescentMorphism(self.on_obj(m.source), self.on_obj(m.target),
                               self.pull(m.a, 0, self.source.pK), self.pull(m.alpha, 1, self.source.pA))

    def on_2(self, b: Descent2Morphism) -> Descent2Morphism:
        return Descent2Morphism(self.on_1(b.source), self.on_1(b.target), self.pull(b.beta, 0, self.source.pA))

    def then(self, other: "DescentPullback") -> "DescentPullback":
        """(self then other) as functors = pullback along other.f then self.f."""
        return DescentPullback(other.f.then(self.f), self.source, other.target)


def pullback_functor(f: SimplicialMap, coeff: Coefficients, normalized: bool = False) -> DescentPullback:
    return DescentPullback(f, DescentBicategory(f.target, coeff, normalized), DescentBicategory(f.source, coeff, normalized))


# ---------------------------------------------------------------- the engine


@dataclass
class DegreeCheck:
    group: str
    degree: int
    twist: tuple
    dim_source: int
    dim_target: int
    injective: bool

    @property
    def iso(self) -> bool:
        return self.injective and self.dim_source == self.dim_target

    def describe(self) -> str:
        tw = "" if not any(self.twist) else " (twisted)"
        return f"H^{self.degree}({self.group}){tw}: dim {self.dim_source} -> {self.dim_target}, injective={self.injective}"


def _injective(dn, dprev, pull, dprev_t, p) -> bool:
    """H^n(f) injective: {z : dn z = 0, f* z in im dprev_t} = im dprev."""
    if p <= 1:
        return True
    n_w = dprev_t.shape[1]
    top = np.concatenate([dn, np.zeros((dn.shape[0], n_w), dtype=np.int64)], axis=1)
    bot = np.concatenate([pull, (-dprev_t) % p], axis=1)
    M = np.concatenate([top, bot], axis=0)
    lhs = la.kernel_dim(M, p) - la.kernel_dim(dprev_t, p)
    return lhs == la.rank(dprev, p)


def _h_dim(dn, dprev, p) -> int:
    if p <= 1:
        return 0
    return la.kernel_dim(dn, p) - la.rank(dprev, p)


def _zero_prev(rows: int, p: int) -> np.ndarray:
    return np.zeros((rows, 0), dtype=np.int64)


@dataclass
class EngineReport:
    fully_faithful: bool
    essentially_surjective: bool
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    witness: dict = field(default_factory=dict)

    @property
    def equivalence(self) -> bool:
        return self.fully_faithful and self.essentially_surjective

    def as_dict(self) -> dict:
        return {"fully_faithful": self.fully_faithful, "essentially_surjective": self.essentially_surjective,
                "equivalence": self.equivalence, "checks": [c.describe() for c in self.checks],
                "failures": list(self.failures), "witness": self.witness}


def analyze_pullback(F: DescentPullback) -> EngineReport:
    base, top = F.source, F.target
    pK, pA = base.pK, base.pA
    checks: list[DegreeCheck] = []
    ff, es = True, True
    failures = []

    def record(group, deg, twist, dn, dprev, dn_t, dprev_t, pull, p, need_iso_ff):
        nonlocal ff, es
        c = DegreeCheck(group, deg, twist, _h_dim(dn, dprev, p), _h_dim(dn_t, dprev_t, p),
                        _injective(dn, dprev, pull, dprev_t, p))
        checks.append(c)
        if need_iso_ff:
            if not c.iso:
                ff = False
                failures.append("not fully faithful: " + c.describe())
        else:
            if not c.injective:
                ff = False
                failures.append("not fully faithful: " + c.describe())
            elif not c.iso:
                es = False
                failures.append("not essentially surjective: " + c.describe())

    # K-part
    if pK > 1:
        d0, d1 = base._dK(0), base._dK(1)
        t0, t1 = top._dK(0), top._dK(1)
        record("K", 0, (), d0, _zero_prev(d0.shape[1], pK), t0, _zero_prev(t0.shape[1], pK),
               F._m(0, pK), pK, True)
        record("K", 1, (), d1, d0, t1, t0, F._m(1, pK), pK, False)
    # A-part for each class of gluing data
    if pA > 1:
        twisted = base.coeff.twisted and pA > 2
        reps = h1_representatives(base) if twisted else [None]
        for k in reps:
            kt = F.pull(k, 1, pK) if k is not None else None
            tw = tuple(k) if k is not None else ()
            b = [base.dA(n, k) for n in range(3)]
            t = [top.dA(n, kt) for n in range(3)]
            record("A", 0, tw, b[0], _zero_prev(b[0].shape[1], pA), t[0], _zero_prev(t[0].shape[1], pA),
                   F._m(0, pA), pA, True)
            record("A", 1, tw, b[1], b[0], t[1], t[0], F._m(1, pA), pA, True)
            record("A", 2, tw, b[2], b[1], t[2], t[1], F._m(2, pA), pA, False)
    return EngineReport(ff, es, checks, failures)


def is_equivalence(F: DescentPullback, witnesses: int = 0, seed: int | None = None) -> EngineReport:
    """Decide whether F is an equivalence (and fully faithful).  With
    ``witnesses`` > 0, random target objects are lifted and the lifts, as well
    as lifted morphisms, are re-verified against the defining conditions."""
    rep = analyze_pullback(F)
    if witnesses and rep.equivalence:
        rep.witness = quasi_inverse_witness(F, witnesses, seed)
    elif not rep.essentially_surjective and rep.fully_faithful:
        y = non_lifting_object(F)
        if y is not None:
            rep.witness = {"object_not_in_image": {"k": list(y.k), "mu": list(y.mu)}}
    return rep


# -- witnesses ---------------------------------------------------------------


def _block(rows):
    return np.concatenate([np.concatenate(r, axis=1) for r in rows], axis=0)


def lift_object(F: DescentPullback, y: DescentObject) -> tuple[DescentObject, DescentMorphism] | None:
    """An object x downstairs and a 1-morphism F(x) -> y, or None."""
    base, top = F.source, F.target
    Cb, Ct = base.C, top.C
    pK, pA = base.pK, base.pA
    # gluing 1-cells: delta k = 0, f*k - delta' a' = k'
    if pK > 1:
        d1, t0, P1 = base._dK(1), top._dK(0), F._m(1, pK)
        M = _block([[d1, np.zeros((d1.shape[0], Ct.dim(0)), dtype=np.int64)], [P1, (-t0) % pK]])
        rhs = np.concatenate([np.zeros(d1.shape[0], dtype=np.int64), np.asarray(y.k, dtype=np.int64)])
        sol = la.solve(M, rhs, pK)
        if sol is None:
            return None
        k = tuple(int(v) for v in sol[: Cb.dim(1)])
        a = tuple(int(v) for v in sol[Cb.dim(1):])
    else:
        k, a = Cb.zero(1), Ct.zero(0)
    if pA > 1:
        d2, P2 = base.dA(2, k), F._m(2, pA)
        t1 = top.dA(1, y.k)
        sg = Ct.vertex_signs(2, a, base.coeff)
        M = _block([[d2, np.zeros((d2.shape[0], Ct.dim(1)), dtype=np.int64)], [(sg[:, None] * P2) % pA, t1]])
        rhs = np.concatenate([np.zeros(d2.shape[0], dtype=np.int64), np.asarray(y.mu, dtype=np.int64)])
        sol = la.solve(M, rhs, pA)
        if sol is None:
            return None
        mu = tuple(int(v) for v in sol[: Cb.dim(2)])
        alpha = tuple(int(v) for v in sol[Cb.dim(2):])
    else:
        mu, alpha = Cb.zero(2), Ct.zero(1)
    x = DescentObject(k, mu)
    return x, DescentMorphism(F.on_obj(x), y, a, alpha)


def lift_morphism(F: DescentPullback, x: DescentObject, xt: DescentObject,
                  m: DescentMorphism) -> tuple[DescentMorphism, Descent2Morphism] | None:
    """Given m: F(x) -> F(xt), a morphism n: x -> xt and a 2-cell F(n) => m."""
    base, top = F.source, F.target
    Cb, Ct = base.C, top.C
    pK, pA = base.pK, base.pA
    if pK > 1:
        d0, P0 = base._dK(0), F._m(0, pK)
        M = np.concatenate([P0, d0], axis=0)
        rhs = np.concatenate([np.asarray(m.a, dtype=np.int64),
                              (np.asarray(x.k, dtype=np.int64) - np.asarray(xt.k, dtype=np.int64)) % pK])
        a = la.solve(M, rhs, pK)
        if a is None:
            return None
        a = tuple(int(v) for v in a)
    else:
        a = Cb.zero(0)
    if pA > 1:
        d1 = base.dA(1, xt.k)
        ktop = F.pull(xt.k, 1, pK) if pK > 1 else Ct.zero(1)
        t0 = top.dA(0, ktop)
        P1 = F._m(1, pA)
        sg = Cb.vertex_signs(2, a, base.coeff)
        r1 = (np.asarray(xt.mu, dtype=np.int64) - sg * np.asarray(x.mu, dtype=np.int64)) % pA
        M = _block([[d1, np.zeros((d1.shape[0], Ct.dim(0)), dtype=np.int64)], [P1, (-t0) % pA]])
        rhs = np.concatenate([r1, np.asarray(m.alpha, dtype=np.int64)])
        sol = la.solve(M, rhs, pA)
        if sol is None:
            return None
        alpha = tuple(int(v) for v in sol[: Cb.dim(1)])
        beta = tuple(int(v) for v in sol[Cb.dim(1):])
    else:
        alpha, beta = Cb.zero(1), Ct.zero(0)
    n = DescentMorphism(x, xt, a, alpha)
    return n, Descent2Morphism(F.on_1(n), m, beta)


def random_object(D: DescentBicategory, rng: random.Random) -> DescentObject:
    Zk = D.k_cocycles()
    k = _random_combo(Zk, D.pK, rng, D.C.dim(1))
    Zm = D.mu_cocycles(k)
    mu = _random_combo(Zm, D.pA, rng, D.C.dim(2))
    return DescentObject(k, mu)


def _random_combo(B: np.ndarray, p: int, rng: random.Random, n: int) -> tuple:
    if p <= 1 or B.shape[1] == 0:
        return (0,) * n
    coeffs = np.array([rng.randrange(p) for _ in range(B.shape[1])], dtype=np.int64)
    return tuple(int(v) for v in (B @ coeffs) % p)


def random_morphism(D: DescentBicategory, x: DescentObject, rng: random.Random) -> DescentMorphism:
    """A random 1-morphism out of x (its target is determined by the data)."""
    pK, pA = D.pK, D.pA
    a = tuple(rng.randrange(pK) for _ in range(D.C.dim(0))) if pK > 1 else D.C.zero(0)
    k2 = tuple(int(v) for v in (D._vec(x.k, pK) - D._dK(0) @ D._vec(a, pK)) % max(pK, 1))
    alpha = tuple(rng.randrange(pA) for _ in range(D.C.dim(1))) if pA > 1 else D.C.zero(1)
    sg = D.C.vertex_signs(2, a, D.coeff)
    mu2 = tuple(int(v) for v in (sg * D._vec(x.mu, pA) + D.dA(1, k2) @ D._vec(alpha, pA)) % max(pA, 1))
    return DescentMorphism(x, DescentObject(k2, mu2), a, alpha)


def quasi_inverse_witness(F: DescentPullback, samples: int = 8, seed: int | None = None) -> dict:
    """Lift random target objects and random morphisms between images and
    re-check every lift against the defining conditions."""
    rng = seeded_rng(seed)
    base, top = F.source, F.target
    lifted = 0
    for _ in range(samples):
        y = random_object(top, rng)
        res = lift_object(F, y)
        if res is None:
            return {"verified": False, "failure": "object did not lift"}
        x, m = res
        if base.object_defects(x) or top.morphism_defects(m):
            return {"verified": False, "failure": "lifted data failed the defining conditions"}
        # morphisms: a random morphism out of F(x) landing on some F(x')
        x2 = random_object(base, rng)
        n = find_morphism(top, F.on_obj(x), F.on_obj(x2))
        if n is not None:
            got = lift_morphism(F, x, x2, n)
            if got is None:
                return {"verified": False, "failure": "morphism did not lift"}
            nl, b = got
            if base.morphism_defects(nl) or top.two_morphism_defects(b):
                return {"verified": False, "failure": "lifted morphism failed the defining conditions"}
        lifted += 1
    return {"verified": True, "objects_lifted": lifted}


def non_lifting_object(F: DescentPullback) -> DescentObject | None:
    """A target object outside the essential image, searched among cocycle
    basis vectors and their class representatives."""
    top = F.target
    for k in h1_representatives(top):
        cand = [DescentObject(k, top.C.zero(2))]
        Z = top.mu_cocycles(k)
        B = top.dA(1, k)
        for j in range(la.complement_basis(Z, B, top.pA).shape[1] if top.pA > 1 else 0):
            v = la.complement_basis(Z, B, top.pA)[:, j]
            cand.append(DescentObject(k, tuple(int(t) for t in v)))
        for y in cand:
            if lift_object(F, y) is None:
                return y
    return None


# ---------------------------------------------------------------- high-level entry points


def descent_bicategory(x: PrestackInstance, c: Cover, normalized: bool = False) -> DescentBicategory:
    return DescentBicategory(cover_nerve(c), x.coeff, normalized, name=f"Desc({x.name})")


def eval_as_descent(x: PrestackInstance, M: FiniteSet) -> DescentBicategory:
    """X(M) presented as the normalized holim of the constant simplicial set,
    which is isomorphic to X(M)."""
    return DescentBicategory(constant_simplicial(M), x.coeff, True, name=f"{x.name}({M!r})")


def tau_functor(x: PrestackInstance, c: Cover, normalized: bool = True) -> DescentPullback:
    """tau_Y: X(M) -> Desc_X(Y), pullback along the augmentation of the nerve."""
    aug = augmentation(c)
    return DescentPullback(aug, DescentBicategory(aug.target, x.coeff, normalized),
                           DescentBicategory(aug.source, x.coeff, normalized))


def refinement_functor(x: PrestackInstance, src: Cover, dst: Cover, s: SetMap,
                       normalized: bool = False) -> DescentPullback:
    """s*: Desc(Y) -> Desc(Z) for a refinement s: Z -> Y over M (src = Z, dst = Y)."""
    f = cover_map_nerve(src, dst, s)
    return DescentPullback(f, DescentBicategory(f.target, x.coeff, normalized),
                           DescentBicategory(f.source, x.coeff, normalized))


@dataclass
class StableHom:
    """Hom category between two plus-objects computed on the canonical common
    refinement Z = Y x_M Y'."""

    refinement: Cover
    bicategory: DescentBicategory
    source: DescentObject
    target: DescentObject

    def morphisms(self) -> list[DescentMorphism]:
        return self.bicategory.morphisms(self.source, self.target)

    def some_morphism(self) -> DescentMorphism | None:
        return find_morphism(self.bicategory, self.source, self.target)

    def two_morphisms(self, m: DescentMorphism, n: DescentMorphism) -> list[Descent2Morphism]:
        return self.bicategory.two_morphisms(m, n)


def stable_hom(x: PrestackInstance, o_cover: Cover, o: DescentObject, p_cover: Cover, p: DescentObject,
               normalized: bool = False) -> StableHom:
    ref = canonical_common_refinement(o_cover, p_cover)
    Z = ref.cover
    Fo = refinement_functor(x, Z, o_cover, ref.to_left, normalized)
    Fp = refinement_functor(x, Z, p_cover, ref.to_right, normalized)
    return StableHom(Z, Fo.target, Fo.on_obj(o), Fp.on_obj(p))
