"""Exact surface holonomy on triangulated surfaces.

Phases are exponents in Q/Z, returned as Fractions in [0, 1).

Local data live on the face-indexed cover of a surface: the patches are the
closed faces, double overlaps are shared edges (and single vertices), triple
overlaps are vertices.  On a surface all cocycle conditions that involve a
restriction of a form to a lower-dimensional overlap are vacuous, so what
remains is

* a 2-form: one rational per face (reference orientation),
* a bundle with connection: a rational per face/edge incidence (the local
  connection integrated along the edge in its canonical direction) and a
  Q/Z transition value per edge endpoint, glued up to integers,
* gerbe data: a face value B, an edge value A for the pair (lo, hi) of faces
  on the edge, and a Q/Z value c per vertex and per triple of faces there.

Edges are stored in canonical direction (u, w) with u < w in label order and
``lo < hi`` are the indices of the two faces on the edge.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .site import TriangulatedSurface, canonical, edge_direction, face_edges, label_key

Q = Fraction


class NotABundle(ValueError):
    """Local data that fail integrality, so they do not define a bundle."""


def frac1(x) -> Fraction:
    """Representative of x mod 1 in [0, 1)."""
    x = Q(x)
    return x - (x.numerator // x.denominator)


def is_integer(x) -> bool:
    return Q(x).denominator == 1


def canonical_edge(e) -> tuple:
    return canonical(e)


def _perm_sign(ref: tuple, f: tuple) -> int:
    """+1 if f is a cyclic rotation of ref, -1 if of the reversed triple."""
    if set(ref) != set(f):
        raise ValueError(f"{f!r} is not a reordering of {ref!r}")
    rots = {ref, ref[1:] + ref[:1], ref[2:] + ref[:2]}
    return 1 if tuple(f) in rots else -1


# ---------------------------------------------------------------- surface combinatorics


@dataclass(frozen=True, eq=False)
class SurfaceData:
    """Cached incidences of a closed surface."""

    surface: TriangulatedSurface
    edges: tuple
    edge_faces: dict        # edge -> (lo, hi)
    vertex_faces: dict      # v -> sorted face indices
    cycles: dict            # v -> [(face, edge to next face)] in cyclic order

    @classmethod
    def of(cls, s: TriangulatedSurface) -> "SurfaceData":
        rep = s.validate()
        if not rep.closed:
            raise ValueError("surface is not closed: " + "; ".join(rep.defects[:3]))
        inc = s.edge_faces()
        edges = tuple(canonical_edge(e) for e in s.edges)
        ef = {canonical_edge(e): tuple(sorted(fs)) for e, fs in inc.items()}
        vf = {}
        for k, f in enumerate(s.faces):
            for v in f:
                vf.setdefault(v, []).append(k)
        cyc = {v: _vertex_cycle(s, v, ef) for v in s.vertices}
        return cls(s, edges, ef, {v: tuple(sorted(fs)) for v, fs in vf.items()}, cyc)

    def face_edge_list(self, k: int) -> list[tuple]:
        return [canonical_edge(e) for e in face_edges(self.surface.faces[k])]

    def incidences(self) -> list[tuple]:
        return [(k, e) for k in range(len(self.surface.faces)) for e in self.face_edge_list(k)]

    def boundary_sign(self, k: int, e: tuple) -> int:
        """+1 if the canonical direction of e runs along the boundary of face k."""
        return edge_direction(self.surface.faces[k], e)


_SD_CACHE: dict = {}


def surface_data(s: TriangulatedSurface) -> SurfaceData:
    key = id(s)
    hit = _SD_CACHE.get(key)
    if hit is None or hit[0] is not s:
        hit = (s, SurfaceData.of(s))
        _SD_CACHE[key] = hit
    return hit[1]


def _vertex_cycle(s: TriangulatedSurface, v, ef: dict) -> list[tuple]:
    """Faces around v in cyclic order, each with the edge leading to the next."""
    around = [k for k, f in enumerate(s.faces) if v in f]
    start = min(around)
    out, prev, cur = [], None, start
    while True:
        nxt = None
        for u in s.faces[cur]:
            if u == v:
                continue
            e = canonical_edge((u, v))
            lo, hi = ef[e]
            other = hi if lo == cur else lo
            if other != prev:
                nxt = (other, e)
                break
        out.append((cur, nxt[1]))
        prev, cur = cur, nxt[0]
        if cur == start:
            break
    return out


def orientation(s: TriangulatedSurface, reverse: bool = False) -> dict:
    """Coherent orientation signs; raises for non-orientable or open surfaces."""
    rep = s.validate()
    if not rep.closed:
        raise ValueError("surface is not closed")
    eps = s.orientation_signs()
    if eps is None:
        raise ValueError("surface is not orientable")
    return {k: -e for k, e in eps.items()} if reverse else eps


def _check_orientation(s: TriangulatedSurface, eps: dict) -> None:
    sd = surface_data(s)
    for e, (lo, hi) in sd.edge_faces.items():
        if eps[lo] * sd.boundary_sign(lo, e) != -eps[hi] * sd.boundary_sign(hi, e):
            raise ValueError(f"orientation is not coherent across edge {e!r}")


# ---------------------------------------------------------------- 2-forms


@dataclass(frozen=True, eq=False)
class DiscreteTwoForm:
    surface: TriangulatedSurface
    values: tuple   # Fraction per face, reference orientation

    def __post_init__(self):
        if len(self.values) != len(self.surface.faces):
            raise ValueError("one value per face expected")
        object.__setattr__(self, "values", tuple(Q(v) for v in self.values))

    def value(self, face: tuple) -> Fraction:
        """Integral over a face given as an ordered vertex triple."""
        for k, f in enumerate(self.surface.faces):
            if set(f) == set(face):
                return _perm_sign(f, tuple(face)) * self.values[k]
        raise KeyError(face)

    def __add__(self, other: "DiscreteTwoForm") -> "DiscreteTwoForm":
        if other.surface is not self.surface:
            raise ValueError("forms live on different surfaces")
        return DiscreteTwoForm(self.surface, tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "DiscreteTwoForm":
        return DiscreteTwoForm(self.surface, tuple(-a for a in self.values))

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscreteTwoForm) and other.surface is self.surface and other.values == self.values

    __hash__ = object.__hash__

    def subdivide(self, k: int, new_vertex, weights=(1, 1, 1)) -> "DiscreteTwoForm":
        """1 -> 3 split of face k; the mass of face k is shared by ``weights``."""
        s2 = self.surface.subdivide(k, new_vertex)
        tot = sum(Q(w) for w in weights)
        parts = tuple(self.values[k] * Q(w) / tot for w in weights)
        vals = self.values[:k] + parts + self.values[k + 1:]
        return DiscreteTwoForm(s2, vals)


def zero_form(s: TriangulatedSurface) -> DiscreteTwoForm:
    return DiscreteTwoForm(s, (Q(0),) * len(s.faces))


def random_form(s: TriangulatedSurface, rng: random.Random, denominators=(1, 2, 3, 4, 5, 6, 8)) -> DiscreteTwoForm:
    return DiscreteTwoForm(s, tuple(Q(rng.randint(-20, 20), rng.choice(denominators)) for _ in s.faces))


def oriented_holonomy(w: DiscreteTwoForm, eps: dict | None = None, reverse: bool = False) -> Fraction:
    """Face sum of w over the oriented surface, mod 1."""
    if eps is None:
        eps = orientation(w.surface, reverse)
    else:
        _check_orientation(w.surface, eps)
    return frac1(sum(eps[k] * v for k, v in enumerate(w.values)))


# ---------------------------------------------------------------- bundles with connection


@dataclass(frozen=True, eq=False)
class DiscreteBundleConnection:
    """conn[(k, e)]: local connection of patch k along edge e (canonical
    direction); trans[(e, v)]: transition lo -> hi at the endpoint v of e.

    Gluing: conn[hi, e] - conn[lo, e] - (trans[e, w] - trans[e, u]) is an
    integer for e = (u, w).  Cocycle: going around each vertex the signed
    transition values sum to an integer."""

    surface: TriangulatedSurface
    conn: dict
    trans: dict = field(default_factory=dict)

    def t(self, e, v) -> Fraction:
        return Q(self.trans.get((e, v), 0))

    def windings(self) -> dict:
        sd = surface_data(self.surface)
        out = {}
        for e, (lo, hi) in sd.edge_faces.items():
            u, w = e
            out[e] = self.conn[(hi, e)] - self.conn[(lo, e)] - (self.t(e, w) - self.t(e, u))
        return out

    def vertex_sums(self) -> dict:
        sd = surface_data(self.surface)
        out = {}
        for v, cyc in sd.cycles.items():
            tot = Q(0)
            for j, (k, e) in enumerate(cyc):
                nxt = cyc[(j + 1) % len(cyc)][0]
                lo, hi = sd.edge_faces[e]
                tot += self.t(e, v) if (k, nxt) == (lo, hi) else -self.t(e, v)
            out[v] = tot
        return out

    def defects(self) -> list[str]:
        sd = surface_data(self.surface)
        bad = [f"missing connection value on face {k} edge {e!r}" for k, e in sd.incidences() if (k, e) not in self.conn]
        if bad:
            return bad
        for e, n in self.windings().items():
            if not is_integer(n):
                bad.append(f"gluing along edge {e!r} is off by {n} (not an integer)")
        for v, s in self.vertex_sums().items():
            if not is_integer(s):
                bad.append(f"transitions around vertex {v!r} sum to {s} (not an integer)")
        return bad

    def curvature(self) -> DiscreteTwoForm:
        sd = surface_data(self.surface)
        vals = []
        for k in range(len(self.surface.faces)):
            vals.append(sum(sd.boundary_sign(k, e) * Q(self.conn[(k, e)]) for e in sd.face_edge_list(k)))
        return DiscreteTwoForm(self.surface, tuple(vals))

    def total_curvature(self, eps: dict | None = None) -> Fraction:
        eps = eps if eps is not None else orientation(self.surface)
        return sum(eps[k] * v for k, v in enumerate(self.curvature().values))


def shift_by_curvature(w: DiscreteTwoForm, l: DiscreteBundleConnection) -> DiscreteTwoForm:
    """w + curv(l); rejects local data that are not a bundle."""
    if l.surface is not w.surface:
        raise ValueError("form and bundle live on different surfaces")
    bad = l.defects()
    if bad:
        raise NotABundle(bad[0])
    return w + l.curvature()


def random_bundle(s: TriangulatedSurface, rng: random.Random, denominators=(1, 2, 3, 4, 6),
                  windings=(-2, 2)) -> DiscreteBundleConnection:
    """A valid bundle: random transitions fixed up at one edge per vertex,
    random connections on the lo side, hi side glued with random windings."""
    sd = surface_data(s)
    r = lambda: Q(rng.randint(-12, 12), rng.choice(denominators))
    trans = {}
    for v, cyc in sd.cycles.items():
        signed = []
        for j, (k, e) in enumerate(cyc):
            nxt = cyc[(j + 1) % len(cyc)][0]
            lo, hi = sd.edge_faces[e]
            signed.append((e, 1 if (k, nxt) == (lo, hi) else -1))
        tot = Q(0)
        for e, sg in signed[:-1]:
            trans[(e, v)] = r()
            tot += sg * trans[(e, v)]
        e, sg = signed[-1]
        # close the cycle up to a random integer
        trans[(e, v)] = sg * (rng.randint(-2, 2) - tot)
    conn = {}
    for e, (lo, hi) in sd.edge_faces.items():
        u, w = e
        conn[(lo, e)] = r()
        conn[(hi, e)] = conn[(lo, e)] + trans[(e, w)] - trans[(e, u)] + rng.randint(*windings)
    return DiscreteBundleConnection(s, conn, trans)


def perturb_bundle(l: DiscreteBundleConnection, rng: random.Random) -> DiscreteBundleConnection:
    """Break integrality at one random place by a non-integer amount."""
    conn, trans = dict(l.conn), dict(l.trans)
    kick = Q(rng.randint(1, 5), rng.choice((2, 3, 7))) + rng.randint(-2, 2)
    if is_integer(kick):
        kick += Q(1, 2)
    if trans and rng.random() < 0.5:
        key = rng.choice(sorted(trans, key=label_key))
        trans[key] = Q(trans[key]) + kick
    else:
        key = rng.choice(sorted(conn, key=label_key))
        conn[key] = Q(conn[key]) + kick
    return DiscreteBundleConnection(l.surface, conn, trans)


# ---------------------------------------------------------------- gerbes and trivializations


def _c_value(c: dict, v, triple: tuple) -> Fraction:
    """c at an ordered triple of faces (alternating extension)."""
    srt = tuple(sorted(triple))
    if len(set(triple)) < 3:
        return Q(0)
    val = Q(c.get((v, srt), 0))
    perm = [srt.index(x) for x in triple]
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return val if inv % 2 == 0 else -val


@dataclass(frozen=True, eq=False)
class GerbeData:
    """B per face, A per edge (pair lo -> hi, canonical direction), c per
    vertex and increasing triple of faces at that vertex (Q/Z)."""

    surface: TriangulatedSurface
    B: tuple
    A: dict
    c: dict

    def defects(self) -> list[str]:
        sd = surface_data(self.surface)
        bad = []
        if len(self.B) != len(self.surface.faces):
            bad.append("one B value per face expected")
        for e in sd.edges:
            if e not in self.A:
                bad.append(f"missing A on edge {e!r}")
        for v, fs in sd.vertex_faces.items():
            for q in combinations(fs, 4):
                d = sum((-1) ** i * _c_value(self.c, v, q[:i] + q[i + 1:]) for i in range(4))
                if not is_integer(d):
                    bad.append(f"cocycle identity fails at vertex {v!r} on faces {q!r}: delta c = {d}")
        for (v, t) in self.c:
            if v not in sd.vertex_faces or not set(t) <= set(sd.vertex_faces[v]) or len(set(t)) != 3:
                bad.append(f"c given on {t!r} at {v!r}, which is not a triple overlap")
        return bad


def trivial_gerbe(w: DiscreteTwoForm) -> GerbeData:
    sd = surface_data(w.surface)
    return GerbeData(w.surface, w.values, {e: Q(0) for e in sd.edges}, {})


@dataclass(frozen=True, eq=False)
class Trivialization:
    """lam[(k, e)] local 1-form per incidence, h[(v, a, b)] for faces a < b
    at v (Q/Z), winding n[e] in Z.  The gerbe is I_omega twisted by (lam, h):
    B = omega + curv(lam), A = lam[hi] - lam[lo] - (h(w) - h(u)) - n,
    c = delta h mod Z."""

    omega: DiscreteTwoForm
    lam: dict
    h: dict
    n: dict

    def hv(self, v, a, b) -> Fraction:
        if a == b:
            return Q(0)
        return Q(self.h.get((v, a, b), 0)) if a < b else -Q(self.h.get((v, b, a), 0))


def twist(g: GerbeData, lam: dict, h: dict, n: dict | None = None) -> GerbeData:
    """g twisted by the local 1-forms lam and transition functions h."""
    sd = surface_data(g.surface)
    n = n or {}
    hv = lambda v, a, b: Trivialization(None, {}, h, {}).hv(v, a, b)
    B = tuple(Q(g.B[k]) + sum(sd.boundary_sign(k, e) * Q(lam.get((k, e), 0)) for e in sd.face_edge_list(k))
              for k in range(len(g.B)))
    A = {}
    for e, (lo, hi) in sd.edge_faces.items():
        u, w = e
        A[e] = (Q(g.A.get(e, 0)) + Q(lam.get((hi, e), 0)) - Q(lam.get((lo, e), 0))
                - (hv(w, lo, hi) - hv(u, lo, hi)) - n.get(e, 0))
    c = dict(g.c)
    for v, fs in sd.vertex_faces.items():
        for t in combinations(fs, 3):
            a, b, d = t
            c[(v, t)] = Q(c.get((v, t), 0)) + hv(v, b, d) - hv(v, a, d) + hv(v, a, b)
    return GerbeData(g.surface, B, A, c)


def trivialization_defects(g: GerbeData, T: Trivialization) -> list[str]:
    again = twist(trivial_gerbe(T.omega), T.lam, T.h, T.n)
    sd = surface_data(g.surface)
    bad = []
    for k in range(len(g.B)):
        if Q(g.B[k]) != again.B[k]:
            bad.append(f"face {k}: B is not omega + curv(lam)")
    for e in sd.edges:
        if Q(g.A[e]) != again.A[e]:
            bad.append(f"edge {e!r}: A does not match")
    for v, fs in sd.vertex_faces.items():
        for t in combinations(fs, 3):
            if not is_integer(Q(g.c.get((v, t), 0)) - again.c.get((v, t), 0)):
                bad.append(f"vertex {v!r}: c differs from delta h on {t!r}")
    return bad


def trivialize(g: GerbeData, order=None) -> Trivialization:
    """A trivialization of g, by elimination in the given face order.

    At each vertex the earliest face in ``order`` is the cone point for
    h (h(cone, f) = 0, h(a, b) = c(cone, a, b)), which solves delta h = c up
    to integers.  On each edge the incidence of the earlier face gets lam = 0
    and the other absorbs A.  The winding slack is 0."""
    bad = g.defects()
    if bad:
        raise ValueError("inconsistent gerbe data: " + bad[0])
    sd = surface_data(g.surface)
    nf = len(g.surface.faces)
    order = list(range(nf)) if order is None else list(order)
    if sorted(order) != list(range(nf)):
        raise ValueError("order must be a permutation of the faces")
    rank = {k: i for i, k in enumerate(order)}
    h = {}
    for v, fs in sd.vertex_faces.items():
        cone = min(fs, key=rank.get)
        for a, b in combinations(fs, 2):
            if cone in (a, b):
                continue
            h[(v, a, b)] = frac1(_c_value(g.c, v, (cone, a, b)))
    T0 = Trivialization(None, {}, h, {})
    lam = {}
    for e, (lo, hi) in sd.edge_faces.items():
        u, w = e
        target = Q(g.A[e]) + T0.hv(w, lo, hi) - T0.hv(u, lo, hi)
        if rank[lo] < rank[hi]:
            lam[(lo, e)], lam[(hi, e)] = Q(0), target
        else:
            lam[(lo, e)], lam[(hi, e)] = -target, Q(0)
    omega = tuple(Q(g.B[k]) - sum(sd.boundary_sign(k, e) * lam[(k, e)] for e in sd.face_edge_list(k))
                  for k in range(nf))
    T = Trivialization(DiscreteTwoForm(g.surface, omega), lam, h, {e: 0 for e in sd.edges})
    bad = trivialization_defects(g, T)
    if bad:
        raise AssertionError("trivialization does not verify: " + bad[0])
    return T


def difference_bundle(T1: Trivialization, T2: Trivialization) -> DiscreteBundleConnection:
    """The bundle L with omega2 = omega1 + curv(L) relating two trivializations."""
    s = T1.omega.surface
    sd = surface_data(s)
    conn = {key: Q(T1.lam.get(key, 0)) - Q(T2.lam.get(key, 0)) for key in sd.incidences()}
    trans = {}
    for e, (lo, hi) in sd.edge_faces.items():
        for v in e:
            trans[(e, v)] = T1.hv(v, lo, hi) - T2.hv(v, lo, hi)
    # windings carry over: n enters A with a minus sign
    for e, (lo, hi) in sd.edge_faces.items():
        conn[(hi, e)] += Q(T2.n.get(e, 0)) - Q(T1.n.get(e, 0))
    return DiscreteBundleConnection(s, conn, trans)


def gerbe_holonomy(g: GerbeData, order=None, eps: dict | None = None) -> Fraction:
    return oriented_holonomy(trivialize(g, order).omega, eps)


def random_gerbe(s: TriangulatedSurface, rng: random.Random, denominators=(1, 2, 3, 4, 6)) -> GerbeData:
    """I_omega twisted by random local 1-forms and transition functions."""
    sd = surface_data(s)
    r = lambda: Q(rng.randint(-12, 12), rng.choice(denominators))
    w = DiscreteTwoForm(s, tuple(r() for _ in s.faces))
    lam = {key: r() for key in sd.incidences()}
    h = {(v, a, b): r() for v, fs in sd.vertex_faces.items() for a, b in combinations(fs, 2)}
    n = {e: rng.randint(-2, 2) for e in sd.edges}
    return twist(trivial_gerbe(w), lam, h, n)


# ---------------------------------------------------------------- orientation double cover


@dataclass(frozen=True, eq=False)
class DoubleCover:
    base: TriangulatedSurface
    total: TriangulatedSurface
    sheet: dict          # (k, s) -> face index in total, s = +1 / -1
    deck_vertex: dict
    deck_face: dict
    projection_vertex: dict
    projection_face: dict

    def adjacent(self, k: int, s: int, k2: int, s2: int) -> bool:
        """Do the sheets (k, s) and (k2, s2) share an edge upstairs?"""
        a = set(self.total.faces[self.sheet[(k, s)]])
        b = set(self.total.faces[self.sheet[(k2, s2)]])
        return len(a & b) == 2

    def boundary_of(self, domain) -> list[tuple]:
        """Edges of the base along which the chosen sheets do not meet."""
        sd = surface_data(self.base)
        return [e for e, (lo, hi) in sd.edge_faces.items() if not self.adjacent(lo, domain[lo], hi, domain[hi])]

    def check(self) -> list[str]:
        bad = []
        rep = self.total.validate()
        if not rep.closed:
            bad.append("total space is not closed")
        inc = self.total.edge_faces()
        for e, fs in inc.items():
            dirs = [edge_direction(self.total.faces[j], canonical_edge(e)) for j in fs]
            if sorted(dirs) != [-1, 1]:
                bad.append(f"total space is not canonically oriented along {canonical(e)!r}")
        for x, y in self.deck_vertex.items():
            if x == y or self.deck_vertex[y] != x:
                bad.append(f"deck is not a free involution at {x!r}")
            if self.projection_vertex[x] != self.projection_vertex[y]:
                bad.append("deck does not commute with the projection")
        if self.total.euler() != 2 * self.base.euler():
            bad.append("Euler characteristic is not doubled")
        return bad


def _star_signs(s: TriangulatedSurface, sd: SurfaceData, v) -> dict:
    """Orientation of each face at v relative to the first one, coherent
    across the edges through v (the star of v is a disk)."""
    cyc = sd.cycles[v]
    sign = {cyc[0][0]: 1}
    for j, (k, e) in enumerate(cyc):
        nxt = cyc[(j + 1) % len(cyc)][0]
        want = -sign[k] * sd.boundary_sign(k, e) * sd.boundary_sign(nxt, e)
        if nxt in sign:
            if sign[nxt] != want:
                raise ValueError(f"star of {v!r} is not a disk")
        else:
            sign[nxt] = want
    return sign


def orientation_double_cover(s: TriangulatedSurface) -> DoubleCover:
    sd = surface_data(s)
    star = {v: _star_signs(s, sd, v) for v in s.vertices}
    faces, sheet, pf = [], {}, {}
    for k, f in enumerate(s.faces):
        for sg in (1, -1):
            lifted = tuple((v, sg * star[v][k]) for v in f)
            if sg == -1:
                lifted = (lifted[0], lifted[2], lifted[1])
            sheet[(k, sg)] = len(faces)
            pf[len(faces)] = k
            faces.append(lifted)
    total = TriangulatedSurface.from_faces(faces, f"orientation cover of {s.name or 'surface'}")
    dv = {x: (x[0], -x[1]) for x in total.vertices}
    dface = {sheet[(k, sg)]: sheet[(k, -sg)] for k in range(len(s.faces)) for sg in (1, -1)}
    D = DoubleCover(s, total, sheet, dv, dface, {x: x[0] for x in total.vertices}, pf)
    bad = D.check()
    if bad:
        raise AssertionError("double cover construction failed: " + bad[0])
    return D


def cover_summary(D: DoubleCover) -> dict:
    rb, rt = D.base.validate(), D.total.validate()
    return {"base_euler": rb.euler, "total_euler": rt.euler, "base_orientable": rb.orientable,
            "total_connected": rt.connected, "total_orientable": rt.orientable,
            "total_faces": len(D.total.faces), "total_vertices": len(D.total.vertices)}


# ---------------------------------------------------------------- orientifold data and unoriented holonomy


@dataclass(frozen=True, eq=False)
class OrientifoldData:
    """omega[(k, s)]: the Jandl 2-form on sheet s of face k, integrated in the
    canonical orientation of the cover; deck-odd forms take equal values on
    both sheets because the deck map reverses orientation.

    f[k] = +1/-1 picks the local orientation (the sheet) of face k;
    sigma[e] in {0, 1} is the orientation transition across e relative to f,
    which the witness f identifies with the double cover; theta[e] in
    (1/2)Z/Z is the sign part of the Jandl gluing along e."""

    cover: DoubleCover
    omega: dict
    f: tuple
    sigma: dict
    theta: dict

    def defects(self) -> list[str]:
        D = self.cover
        sd = surface_data(D.base)
        bad = []
        for k in range(len(D.base.faces)):
            a, b = Q(self.omega[(k, 1)]), Q(self.omega[(k, -1)])
            if a != b:
                bad.append(f"omega is not deck-odd on face {k}: {a} vs {b}")
        for e, (lo, hi) in sd.edge_faces.items():
            want = 0 if D.adjacent(lo, self.f[lo], hi, self.f[hi]) else 1
            if self.sigma.get(e) != want:
                bad.append(f"sigma on {e!r} does not match the orientation cover through f")
        for v, cyc in sd.cycles.items():
            if sum(self.sigma.get(e, 0) for _, e in cyc) % 2:
                bad.append(f"sigma cocycle fails around vertex {v!r}")
        for e in sd.edges:
            if not is_integer(2 * Q(self.theta.get(e, 0))):
                bad.append(f"theta on {e!r} is not in (1/2)Z")
        for k in range(len(D.base.faces)):
            if not is_integer(sum(Q(self.theta.get(e, 0)) for e in sd.face_edge_list(k))):
                bad.append(f"theta is not closed on face {k}")
        return bad

    def with_orientations(self, f) -> "OrientifoldData":
        """Same Jandl data, other local orientations (sigma recomputed)."""
        D = self.cover
        sd = surface_data(D.base)
        sigma = {e: 0 if D.adjacent(lo, f[lo], hi, f[hi]) else 1 for e, (lo, hi) in sd.edge_faces.items()}
        return OrientifoldData(D, self.omega, tuple(f), sigma, self.theta)


def jandl_holonomy(o: OrientifoldData, domain=None, check: bool = True) -> Fraction:
    """Sum of omega over a fundamental domain plus theta along its boundary.

    ``domain`` chooses one sheet per face (default: the local orientations).
    The boundary consists of the base edges where the chosen sheets do not
    meet upstairs."""
    if check:
        bad = o.defects()
        if bad:
            raise ValueError("invalid orientifold data: " + bad[0])
    F = tuple(o.f if domain is None else domain)
    tot = sum(Q(o.omega[(k, F[k])]) for k in range(len(F)))
    tot += sum(Q(o.theta.get(e, 0)) for e in o.cover.boundary_of(F))
    return frac1(tot)


def all_domain_holonomies(o: OrientifoldData) -> set:
    """jandl_holonomy over every fundamental domain, by Gray-code flips."""
    bad = o.defects()
    if bad:
        raise ValueError("invalid orientifold data: " + bad[0])
    D = o.cover
    sd = surface_data(D.base)
    nf = len(D.base.faces)
    F = list(o.f)
    on_bd = {e: not D.adjacent(lo, F[lo], hi, F[hi]) for e, (lo, hi) in sd.edge_faces.items()}
    th = {e: Q(o.theta.get(e, 0)) for e in sd.edges}
    tot = sum(Q(o.omega[(k, F[k])]) for k in range(nf)) + sum(th[e] for e, b in on_bd.items() if b)
    seen = {frac1(tot)}
    for i in range(1, 2 ** nf):
        k = (i & -i).bit_length() - 1
        tot += Q(o.omega[(k, -F[k])]) - Q(o.omega[(k, F[k])])
        F[k] = -F[k]
        for e in sd.face_edge_list(k):
            tot += -th[e] if on_bd[e] else th[e]
            on_bd[e] = not on_bd[e]
        seen.add(frac1(tot))
    return seen


def lift_oriented(w: DiscreteTwoForm, eps: dict | None = None) -> OrientifoldData:
    """Deck-odd lift of an ordinary form on an oriented base, with the
    orientation as the section (sigma trivial, theta zero)."""
    eps = eps if eps is not None else orientation(w.surface)
    D = orientation_double_cover(w.surface)
    omega = {(k, sg): eps[k] * v for k, v in enumerate(w.values) for sg in (1, -1)}
    sd = surface_data(w.surface)
    f = tuple(eps[k] for k in range(len(w.values)))
    o = OrientifoldData(D, omega, f, {e: 0 for e in sd.edges}, {e: Q(0) for e in sd.edges})
    return o.with_orientations(f)


def orientifold_from_twisted(s: TriangulatedSurface, values, theta: dict | None = None,
                             f=None, D: DoubleCover | None = None) -> OrientifoldData:
    """Orientifold data from a twisted 2-form (one value per face, integrated
    in the orientation of sheet f[k]) and a closed half-integral theta."""
    D = D or orientation_double_cover(s)
    sd = surface_data(s)
    f = tuple(f) if f is not None else (1,) * len(s.faces)
    omega = {}
    for k, v in enumerate(values):
        omega[(k, 1)] = omega[(k, -1)] = Q(v)
    theta = theta if theta is not None else {e: Q(0) for e in sd.edges}
    return OrientifoldData(D, omega, f, {}, theta).with_orientations(f)


def random_closed_theta(s: TriangulatedSurface, rng: random.Random) -> dict:
    """A random closed half-integral edge cochain: a random Z/2 coboundary
    plus, when available, a nonzero class from a brute-force search."""
    sd = surface_data(s)
    pick = {v: rng.randint(0, 1) for v in s.vertices}
    theta = {e: Q((pick[e[0]] + pick[e[1]]) % 2, 2) for e in sd.edges}
    cls = z2_cocycle_basis(s)
    for z in cls:
        if rng.random() < 0.5:
            theta = {e: frac1(theta[e] + Q(z[e], 2)) for e in sd.edges}
    return theta


def z2_cocycle_basis(s: TriangulatedSurface) -> list[dict]:
    """Z/2 1-cocycles spanning H^1(s; Z/2) modulo coboundaries (Gaussian
    elimination over F_2)."""
    sd = surface_data(s)
    edges = list(sd.edges)
    idx = {e: i for i, e in enumerate(edges)}
    faces_rows = [sum(1 << idx[e] for e in sd.face_edge_list(k)) for k in range(len(s.faces))]
    # kernel of delta^1 over F_2
    piv: dict[int, int] = {}
    for r in faces_rows:
        while r:
            t = r.bit_length() - 1
            if t in piv:
                r ^= piv[t]
            else:
                piv[t] = r
                break
    # reduce to rref
    for t in sorted(piv):
        for t2 in list(piv):
            if t2 != t and (piv[t2] >> t) & 1:
                piv[t2] ^= piv[t]
    free = [i for i in range(len(edges)) if i not in piv]
    kernel = []
    for fi in free:
        vec = 1 << fi
        for t, r in piv.items():
            if (r >> fi) & 1:
                vec |= 1 << t
        kernel.append(vec)
    # span of coboundaries
    cob = [sum(1 << idx[e] for e in sd.edges if v in e) for v in s.vertices]
    basis: dict[int, int] = {}

    def reduce(x):
        while x:
            t = x.bit_length() - 1
            if t not in basis:
                return x
            x ^= basis[t]
        return 0

    for b in cob:
        r = reduce(b)
        if r:
            basis[r.bit_length() - 1] = r
    out = []
    for z in kernel:
        r = reduce(z)
        if r:
            basis[r.bit_length() - 1] = r
            out.append({e: (z >> idx[e]) & 1 for e in edges})
    return out


# ---------------------------------------------------------------- deck-odd bundles


@dataclass(frozen=True, eq=False)
class DeckOddBundle:
    """A bundle on the double cover with deck* L = L^dual, given on the base:
    conn[(k, e)] is the connection along e in the boundary orientation of
    either sheet of face k (the two agree).  Gluing: conn[(lo, e)] +
    conn[(hi, e)] is an integer."""

    cover: DoubleCover
    conn: dict

    def defects(self) -> list[str]:
        sd = surface_data(self.cover.base)
        bad = []
        for e, (lo, hi) in sd.edge_faces.items():
            if (lo, e) not in self.conn or (hi, e) not in self.conn:
                bad.append(f"missing connection along {e!r}")
                continue
            x = Q(self.conn[(lo, e)]) + Q(self.conn[(hi, e)])
            if not is_integer(x):
                bad.append(f"gluing along {e!r} is off by {x}")
        return bad

    def curvature(self) -> dict:
        sd = surface_data(self.cover.base)
        out = {}
        for k in range(len(self.cover.base.faces)):
            c = sum(Q(self.conn[(k, e)]) for e in sd.face_edge_list(k))
            out[(k, 1)] = out[(k, -1)] = c
        return out


def random_deck_odd_bundle(D: DoubleCover, rng: random.Random, denominators=(1, 2, 3, 4, 6)) -> DeckOddBundle:
    sd = surface_data(D.base)
    conn = {}
    for e, (lo, hi) in sd.edge_faces.items():
        conn[(lo, e)] = Q(rng.randint(-12, 12), rng.choice(denominators))
        conn[(hi, e)] = -conn[(lo, e)] + rng.randint(-2, 2)
    return DeckOddBundle(D, conn)


def shift_orientifold(o: OrientifoldData, l: DeckOddBundle) -> OrientifoldData:
    bad = l.defects()
    if bad:
        raise NotABundle(bad[0])
    curv = l.curvature()
    omega = {key: Q(v) + curv[key] for key, v in o.omega.items()}
    return OrientifoldData(o.cover, omega, o.f, o.sigma, o.theta)


def subdivide_orientifold(o: OrientifoldData, k: int, new_vertex) -> OrientifoldData:
    """1 -> 3 split of face k; omega mass split evenly, theta extended closed."""
    s2 = o.cover.base.subdivide(k, new_vertex)
    D2 = orientation_double_cover(s2)
    # new faces sit at k, k+1, k+2; later faces shift by 2
    old_of = {}
    for j in range(len(s2.faces)):
        old_of[j] = j if j < k else (k if j <= k + 2 else j - 2)
    sd1 = surface_data(o.cover.base)
    sd2 = surface_data(s2)
    # keep the sheet choices: the new faces inherit the orientation of face k
    f2 = tuple(o.f[old_of[j]] for j in range(len(s2.faces)))
    omega = {}
    for j in range(len(s2.faces)):
        v = Q(o.omega[(old_of[j], 1)])
        if k <= j <= k + 2:
            v /= 3
        omega[(j, 1)] = omega[(j, -1)] = v
    theta = {e: Q(o.theta.get(e, 0)) for e in sd2.edges if e in sd1.edge_faces}
    # extend closed: zero on the spoke to a, then forced around the new faces
    a, b, c = o.cover.base.faces[k]
    th = lambda x, y: theta[canonical_edge((x, y))]
    theta[canonical_edge((a, new_vertex))] = Q(0)
    theta[canonical_edge((b, new_vertex))] = frac1(th(a, b))
    theta[canonical_edge((c, new_vertex))] = frac1(th(a, b) + th(b, c))
    return OrientifoldData(D2, omega, f2, {}, theta).with_orientations(f2)


def push_down(o: OrientifoldData) -> DiscreteTwoForm:
    """For an oriented base with trivial sigma: the ordinary form whose lift is o."""
    bad = [e for e, s in o.sigma.items() if s]
    if bad:
        raise ValueError("sigma is not trivial")
    base = o.cover.base
    return DiscreteTwoForm(base, tuple(o.f[k] * Q(o.omega[(k, o.f[k])]) for k in range(len(base.faces))))


# ---------------------------------------------------------------- the canonical bundle of a free Z/2 action


@dataclass
class KanReport:
    free: bool
    matches: bool
    iso: dict
    cocycle_pullback: dict
    cocycle_canonical: dict
    witness: dict
    defects: list

    def as_dict(self) -> dict:
        items = lambda d: [[repr(k), repr(v)] for k, v in sorted(d.items(), key=lambda kv: label_key(kv[0]))]
        return {"free": self.free, "matches": self.matches, "defects": list(self.defects),
                "iso": items(self.iso), "witness": items(self.witness)}


def kan_bundle_check(G, M, act) -> KanReport:
    """Free action of an abelian G on M with quotient N.  The G-bundle M -> N
    pulled back to the action groupoid M//G (g moves the base point only)
    against Kan_G = M x G with the diagonal action.

    The comparison sends (m, p) to (m, x) with m = x.p, so the diagonal
    section m -> (m, m) goes to the unit section.  It is checked to be a
    bijection, equivariant and a map of torsors.  On cocycles: the pullback
    is trivial in the trivialization by orbit representatives, Kan_G has
    cocycle (g, m) -> g, and the position of m relative to its orbit
    representative is the 0-cochain relating the two."""
    from .groupoid import action_groupoid, quotient_functor
    from .site import FiniteSet

    M = M if isinstance(M, FiniteSet) else FiniteSet(M)
    els = G.elements
    if any(G.mul[(a, b)] != G.mul[(b, a)] for a in els for b in els):
        raise ValueError("the canonical bundle check is implemented for abelian groups")
    for g in els:
        for m in M:
            if g != G.identity and act(g, m) == m:
                raise ValueError(f"action is not free: {g!r} fixes {m!r}")
    orbit = quotient_functor(G, M, act).on_objects
    pulled = [(m, p) for m in M for p in M if orbit[p] == orbit[m]]
    defects, iso = [], {}
    for m, p in pulled:
        xs = [x for x in els if act(x, p) == m]
        if len(xs) != 1:
            defects.append(f"fiber over {m!r} is not a G-torsor at {p!r}")
            continue
        iso[(m, p)] = (m, xs[0])
    kan = {(m, x) for m in M for x in els}
    if set(iso.values()) != kan or len(iso) != len(kan):
        defects.append("the comparison map is not a bijection")
    for (m, p), (m2, x) in iso.items():
        for g in els:
            if iso.get((act(g, m), p)) != (act(g, m2), G.mul[(g, x)]):
                defects.append(f"not equivariant at g={g!r}, (m, p)={(m, p)!r}")
            # torsor structure: p.h = h^-1 p on the fiber, right translation on Kan_G
            if iso.get((m, act(G.inv(g), p))) != (m2, G.mul[(x, g)]):
                defects.append(f"not a map of torsors at {(m, p)!r}, h={g!r}")
        if iso[(m, p)] == (m, G.identity) and p != m:
            defects.append(f"the diagonal does not go to the unit section at {m!r}")
    A = action_groupoid(G, M, act)
    reps = {}
    for m in M:
        reps.setdefault(orbit[m], m)
    coord = {m: next(x for x in els if act(x, reps[orbit[m]]) == m) for m in M}
    pull = {f: G.identity for f in A.morphisms}
    can = {f: f[0] for f in A.morphisms}
    for f in A.morphisms:
        g, m = f
        # can = pull + delta(coord), written multiplicatively
        if can[f] != G.mul[(pull[f], G.mul[(coord[act(g, m)], G.inv(coord[m]))])]:
            defects.append(f"cocycles are not related by the orbit coordinate at {f!r}")
    return KanReport(True, not defects, iso, pull, can, coord, defects)
