"""Finite combinatorial site: finite sets, maps, covers, fiber products,
cover nerves and closed triangulated surfaces."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

Label = Hashable

SPLIT = "split"
SURJECTION = "surjection"
COVER_CLASSES = (SPLIT, SURJECTION)


@lru_cache(maxsize=1 << 20)
def label_key(x: Any) -> tuple:
    """Total order on labels (ints, strings, nested tuples)."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(label_key(y) for y in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(label_key(y) for y in x)))
    raise TypeError(f"unsupported label {x!r}")


def canonical(xs: Iterable[Label]) -> tuple:
    return tuple(sorted(xs, key=label_key))


class FiniteSet:
    """Finite set with a canonical (sorted) element order."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[Label] = ()):
        elems = list(elements)
        s = canonical(set(elems))
        if len(s) != len(elems):
            seen, dup = set(), []
            for e in elems:
                if e in seen:
                    dup.append(e)
                seen.add(e)
            raise ValueError(f"duplicate labels: {canonical(set(dup))}")
        self.elements = s
        self._index = {e: i for i, e in enumerate(s)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"FiniteSet({list(self.elements)!r})"

    def index(self, x: Label) -> int:
        return self._index[x]

    @classmethod
    def range(cls, n: int) -> "FiniteSet":
        return cls(range(n))


@dataclass(frozen=True, eq=False)
class SetMap:
    domain: FiniteSet
    codomain: FiniteSet
    assignment: dict

    def __post_init__(self):
        missing = [x for x in self.domain if x not in self.assignment]
        if missing:
            raise ValueError(f"map undefined on {missing[:3]}")
        bad = [x for x in self.domain if self.assignment[x] not in self.codomain]
        if bad:
            raise ValueError(f"image of {bad[:3]} outside codomain")
        if len(self.assignment) != len(self.domain):
            extra = [x for x in self.assignment if x not in self.domain]
            raise ValueError(f"assignment has keys outside domain: {extra[:3]}")

    @classmethod
    def from_function(cls, domain: FiniteSet, codomain: FiniteSet, fn: Callable) -> "SetMap":
        return cls(domain, codomain, {x: fn(x) for x in domain})

    @classmethod
    def identity(cls, s: FiniteSet) -> "SetMap":
        return cls(s, s, {x: x for x in s})

    def __call__(self, x: Label) -> Label:
        return self.assignment[x]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SetMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and all(self.assignment[x] == other.assignment[x] for x in self.domain)
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, tuple(self.assignment[x] for x in self.domain)))

    def then(self, other: "SetMap") -> "SetMap":
        """Diagrammatic composite: first self, then other."""
        if self.codomain != other.domain:
            raise ValueError("maps not composable")
        return SetMap(self.domain, other.codomain, {x: other(self(x)) for x in self.domain})

    def image(self) -> FiniteSet:
        return FiniteSet(set(self.assignment.values()))

    def is_surjective(self) -> bool:
        return len(set(self.assignment.values())) == len(self.codomain)

    def is_injective(self) -> bool:
        return len(set(self.assignment.values())) == len(self.domain)

    def fiber(self, y: Label) -> tuple:
        return tuple(x for x in self.domain if self(x) == y)

    def section(self) -> "SetMap | None":
        """First-match section in canonical order, or None if not surjective."""
        sec = {}
        for x in self.domain:
            sec.setdefault(self(x), x)
        if len(sec) != len(self.codomain):
            return None
        return SetMap(self.codomain, self.domain, sec)


def fiber_product(f: SetMap, g: SetMap) -> tuple[FiniteSet, SetMap, SetMap]:
    """Pullback of the cospan A -f-> C <-g- B as pairs (a, b) with f(a) = g(b)."""
    if f.codomain != g.codomain:
        raise ValueError("incompatible cospan")
    by_image = defaultdict(list)
    for b in g.domain:
        by_image[g(b)].append(b)
    pairs = FiniteSet((a, b) for a in f.domain for b in by_image[f(a)])
    p1 = SetMap(pairs, f.domain, {ab: ab[0] for ab in pairs})
    p2 = SetMap(pairs, g.domain, {ab: ab[1] for ab in pairs})
    return pairs, p1, p2


def product_set(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    return FiniteSet(product(a, b))


def disjoint_union(parts: Sequence[FiniteSet]) -> tuple[FiniteSet, list[SetMap]]:
    total = FiniteSet((i, x) for i, p in enumerate(parts) for x in p)
    incl = [SetMap(p, total, {x: (i, x) for x in p}) for i, p in enumerate(parts)]
    return total, incl


# ---------------------------------------------------------------- covers


@dataclass(frozen=True, eq=False)
class Cover:
    """Surjection pi: Y -> M.  Split covers additionally carry a partition of Y
    into pieces on which pi is injective."""

    total: SetMap
    cover_class: str = SURJECTION
    pieces: tuple = ()

    def __post_init__(self):
        if self.cover_class not in COVER_CLASSES:
            raise ValueError(f"unknown cover class {self.cover_class!r}")
        if not self.total.is_surjective():
            raise ValueError("cover map is not surjective")
        if self.cover_class == SPLIT:
            pieces = self.pieces or default_pieces(self.total)
            object.__setattr__(self, "pieces", tuple(frozenset(p) for p in pieces))
            problem = split_defect(self.total, self.pieces)
            if problem:
                raise ValueError(problem)

    @property
    def Y(self) -> FiniteSet:
        return self.total.domain

    @property
    def M(self) -> FiniteSet:
        return self.total.codomain

    def __call__(self, y: Label) -> Label:
        return self.total(y)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cover)
            and self.total == other.total
            and self.cover_class == other.cover_class
            and set(self.pieces) == set(other.pieces)
        )

    def __hash__(self) -> int:
        return hash((self.total, self.cover_class))

    def __repr__(self) -> str:
        fib = {m: len(self.total.fiber(m)) for m in self.M}
        return f"Cover({self.cover_class}, fibers={fib})"

    @classmethod
    def identity(cls, M: FiniteSet, cover_class: str = SURJECTION) -> "Cover":
        return cls(SetMap.identity(M), cover_class)

    @classmethod
    def from_pairs(cls, pairs: dict, M: Iterable | None = None, cover_class: str = SURJECTION,
                   pieces: Sequence = ()) -> "Cover":
        Y = FiniteSet(pairs)
        Mset = FiniteSet(M if M is not None else set(pairs.values()))
        return cls(SetMap(Y, Mset, dict(pairs)), cover_class, tuple(pieces))

    def section(self) -> SetMap:
        s = self.total.section()
        assert s is not None
        return s

    def with_class(self, cover_class: str) -> "Cover":
        return Cover(self.total, cover_class)


def default_pieces(pi: SetMap) -> list[frozenset]:
    """Piece j collects the j-th element of every fiber."""
    fibers = defaultdict(list)
    for y in pi.domain:
        fibers[pi(y)].append(y)
    depth = max((len(f) for f in fibers.values()), default=0)
    return [frozenset(f[j] for f in fibers.values() if j < len(f)) for j in range(depth)]


def split_defect(pi: SetMap, pieces: Iterable[frozenset]) -> str | None:
    pieces = list(pieces)
    seen = set()
    for p in pieces:
        if seen & p:
            return f"pieces overlap on {canonical(seen & p)}"
        seen |= p
    if seen != set(pi.domain):
        return "pieces do not partition the total set"
    for p in pieces:
        images = [pi(y) for y in p]
        if len(set(images)) != len(images):
            return f"cover map not injective on piece {canonical(p)}"
    return None


def compose_covers(inner: Cover, outer: Cover) -> Cover:
    """Z -> Y -> M composite of covers of the same class."""
    cls = SURJECTION if SURJECTION in (inner.cover_class, outer.cover_class) else SPLIT
    return Cover(inner.total.then(outer.total), cls)


def pullback_cover(c: Cover, f: SetMap) -> tuple[Cover, SetMap]:
    """Pull c back along f: N -> M; returns the cover of N and the map to c.Y."""
    if f.codomain != c.M:
        raise ValueError("incompatible cospan")
    P, p1, p2 = fiber_product(f, c.total)
    pieces = ()
    if c.cover_class == SPLIT:
        pieces = tuple(frozenset(z for z in P if p2(z) in piece) for piece in c.pieces)
        pieces = tuple(p for p in pieces if p)
    return Cover(p1, c.cover_class, pieces), p2


def check_topology_axioms(cover_class: str, covers: Sequence[Cover], maps: Sequence[SetMap]) -> list[str]:
    """Identities, composites and pullbacks stay inside the class."""
    defects = []
    for c in covers:
        try:
            Cover.identity(c.M, cover_class)
        except ValueError as exc:
            defects.append(f"identity on {c.M}: {exc}")
        for d in covers:
            if d.M == c.Y:
                try:
                    compose_covers(d.with_class(cover_class), c.with_class(cover_class))
                except ValueError as exc:
                    defects.append(f"composite: {exc}")
        for f in maps:
            if f.codomain == c.M:
                try:
                    pullback_cover(c.with_class(cover_class), f)
                except ValueError as exc:
                    defects.append(f"pullback: {exc}")
    return defects


# ---------------------------------------------------------------- simplicial sets


@dataclass(frozen=True, eq=False)
class SimplicialSet:
    """Truncated simplicial set.  levels[n] holds n-simplices, faces[n][i] is
    d_i: levels[n] -> levels[n-1] (faces[0] is empty), degeneracies[n][i] is
    s_i: levels[n] -> levels[n+1] when available."""

    levels: tuple
    faces: tuple
    degeneracies: tuple = ()
    name: str = ""

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def face(self, n: int, i: int, x: Label) -> Label:
        return self.faces[n][i](x)

    def vertices(self, n: int, x: Label) -> tuple:
        """Vertex v_j of an n-simplex obtained by deleting every other vertex."""
        out = []
        for j in range(n + 1):
            y = x
            for m in range(n, 0, -1):
                # delete vertex m if m > j else vertex 0 (shifting)
                y = self.faces[m][m](y) if m > j else self.faces[m][0](y)
            out.append(y)
        return tuple(out)

    def first_edge(self, n: int, x: Label) -> Label:
        """Edge (v0, v1) of an n-simplex, n >= 1."""
        y = x
        for m in range(n, 1, -1):
            y = self.faces[m][m](y)
        return y

    def vertex0(self, n: int, x: Label) -> Label:
        y = x
        for m in range(n, 0, -1):
            y = self.faces[m][m](y)
        return y

    def check_identities(self) -> list[str]:
        """d_i d_{j+1} = d_j d_i for i <= j, and the degeneracy identities present."""
        bad = []
        for n in range(2, self.top + 1):
            for j in range(n - 1):
                for i in range(j + 1):
                    for x in self.levels[n]:
                        lhs = self.faces[n - 1][i](self.faces[n][j + 1](x))
                        rhs = self.faces[n - 1][j](self.faces[n][i](x))
                        if lhs != rhs:
                            bad.append(f"d{i}d{j + 1} != d{j}d{i} at level {n} on {x!r}")
                            break
        for n, degs in enumerate(self.degeneracies):
            if n + 1 > self.top:
                break
            for i, s in enumerate(degs):
                for x in self.levels[n]:
                    y = s(x)
                    for k in range(n + 2):
                        face = self.faces[n + 1][k](y)
                        if k in (i, i + 1):
                            if face != x:
                                bad.append(f"d{k}s{i} != id at level {n} on {x!r}")
                        elif k < i:
                            if n == 0 or face != self.degeneracies[n - 1][i - 1](self.faces[n][k](x)):
                                bad.append(f"d{k}s{i} != s{i - 1}d{k} at level {n}")
                        else:
                            if n == 0 or face != self.degeneracies[n - 1][i](self.faces[n][k - 1](x)):
                                bad.append(f"d{k}s{i} != s{i}d{k - 1} at level {n}")
        return bad

    def degenerate(self, n: int) -> set:
        """n-simplices in the image of some degeneracy."""
        if n == 0 or not self.degeneracies or len(self.degeneracies) < n:
            return set()
        return {s(x) for s in self.degeneracies[n - 1] for x in self.levels[n - 1]}

    def components(self) -> list[frozenset]:
        parent = {v: v for v in self.levels[0]}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        if self.top >= 1:
            for e in self.levels[1]:
                a, b = find(self.faces[1][0](e)), find(self.faces[1][1](e))
                if a != b:
                    parent[a] = b
        groups = defaultdict(set)
        for v in self.levels[0]:
            groups[find(v)].add(v)
        return [frozenset(g) for g in sorted(groups.values(), key=lambda g: label_key(min(g, key=label_key)))]


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: SimplicialSet
    target: SimplicialSet
    components: tuple

    def __call__(self, n: int, x: Label) -> Label:
        return self.components[n](x)

    def check(self) -> list[str]:
        bad = []
        top = min(self.source.top, self.target.top)
        for n in range(1, top + 1):
            for i in range(n + 1):
                for x in self.source.levels[n]:
                    if self.components[n - 1](self.source.faces[n][i](x)) != self.target.faces[n][i](self.components[n](x)):
                        bad.append(f"map does not commute with d{i} at level {n}")
                        break
        return bad

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        top = min(len(self.components), len(other.components))
        return SimplicialMap(self.source, other.target,
                             tuple(self.components[n].then(other.components[n]) for n in range(top)))

    def levelwise_surjective(self, upto: int | None = None) -> bool:
        upto = min(len(self.components) - 1, upto if upto is not None else 99)
        return all(self.components[n].is_surjective() for n in range(upto + 1))


def constant_simplicial(M: FiniteSet, top: int = 3) -> SimplicialSet:
    ident = SetMap.identity(M)
    faces = ((),) + tuple(tuple(ident for _ in range(n + 1)) for n in range(1, top + 1))
    degs = tuple(tuple(ident for _ in range(n + 1)) for n in range(top))
    return SimplicialSet(tuple(M for _ in range(top + 1)), faces, degs, name="const")


def _drop(t: tuple, i: int):
    r = t[:i] + t[i + 1:]
    return r[0] if len(r) == 1 else r


def _dup(t: tuple, i: int):
    return t[: i + 1] + t[i:]


def cover_nerve(c: Cover, max_level: int = 4) -> SimplicialSet:
    """Cech nerve: simplicial degree n holds Y^[n+1]; level 1 (degree 0) is Y.
    Degree-0 simplices are the elements of Y themselves, higher ones tuples."""
    if not 1 <= max_level <= 4:
        raise ValueError("max_level must be between 1 and 4")
    fibers = defaultdict(list)
    for y in c.Y:
        fibers[c(y)].append(y)
    levels = [c.Y]
    for n in range(1, max_level):
        levels.append(FiniteSet(t for fib in fibers.values() for t in product(fib, repeat=n + 1)))
    faces = [()]
    for n in range(1, max_level):
        faces.append(tuple(SetMap(levels[n], levels[n - 1], {t: _drop(t, i) for t in levels[n]})
                           for i in range(n + 1)))
    degs = []
    for n in range(max_level - 1):
        if n == 0:
            degs.append((SetMap(levels[0], levels[1], {y: (y, y) for y in levels[0]}),))
            continue
        degs.append(tuple(SetMap(levels[n], levels[n + 1], {t: _dup(t, i) for t in levels[n]})
                          for i in range(n + 1)))
    return SimplicialSet(tuple(levels), tuple(faces), tuple(degs), name="cech")


def nerve_level(c: Cover, n: int) -> FiniteSet:
    """Y^[n] as a set (n >= 1)."""
    return cover_nerve(c, max(n, 1)).levels[n - 1]


def augmentation(c: Cover, max_level: int = 4) -> SimplicialMap:
    """Cech nerve of c -> constant simplicial set on M."""
    N = cover_nerve(c, max_level)
    K = constant_simplicial(c.M, N.top)
    comps = [SetMap(N.levels[0], c.M, {y: c(y) for y in N.levels[0]})]
    for n in range(1, N.top + 1):
        comps.append(SetMap(N.levels[n], c.M, {t: c(t[0]) for t in N.levels[n]}))
    return SimplicialMap(N, K, tuple(comps))


def cover_map_nerve(src: Cover, dst: Cover, s: SetMap, max_level: int = 4) -> SimplicialMap:
    """Nerve map Y'^[n] -> Y^[n] induced by a refinement s: Y' -> Y over M."""
    if src.M != dst.M:
        raise ValueError("base mismatch")
    for z in src.Y:
        if dst(s(z)) != src(z):
            raise ValueError(f"refinement triangle does not commute at {z!r}")
    A, B = cover_nerve(src, max_level), cover_nerve(dst, max_level)
    comps = [s]
    for n in range(1, A.top + 1):
        comps.append(SetMap(A.levels[n], B.levels[n], {t: tuple(s(z) for z in t) for t in A.levels[n]}))
    return SimplicialMap(A, B, tuple(comps))


@dataclass(frozen=True)
class Refinement:
    cover: Cover
    to_left: SetMap
    to_right: SetMap


def canonical_common_refinement(c: Cover, d: Cover) -> Refinement:
    """Z = Y x_M Y' with its projections."""
    if c.M != d.M:
        raise ValueError("base mismatch")
    Z, p1, p2 = fiber_product(c.total, d.total)
    zeta = p1.then(c.total)
    cls = SPLIT if c.cover_class == d.cover_class == SPLIT else SURJECTION
    pieces = ()
    if cls == SPLIT:
        pieces = tuple(frozenset(z for z in Z if z[0] in P and z[1] in Q)
                       for P in c.pieces for Q in d.pieces)
        pieces = tuple(p for p in pieces if p)
    return Refinement(Cover(zeta, cls, pieces), p1, p2)


def enumerate_covers(M: FiniteSet, max_total: int, cover_class: str = SURJECTION) -> list[Cover]:
    """All covers of M with |Y| <= max_total, one per isomorphism class over M.
    Total elements are labelled (m, j)."""
    out = []
    n = len(M)
    if n == 0:
        return [Cover(SetMap(FiniteSet(), M, {}), cover_class)]

    def sizes(k, budget):
        if k == 0:
            yield ()
            return
        for s in range(1, budget - (k - 1) + 1):
            for rest in sizes(k - 1, budget - s):
                yield (s,) + rest

    for sz in sizes(n, max_total):
        pairs = {(m, j): m for m, s in zip(M, sz) for j in range(s)}
        out.append(Cover(SetMap(FiniteSet(pairs), M, pairs), cover_class))
    return out


# ---------------------------------------------------------------- surfaces


@dataclass(frozen=True)
class SurfaceReport:
    closed: bool
    orientable: bool
    euler: int
    connected: bool
    defects: tuple = ()


@dataclass(frozen=True, eq=False)
class TriangulatedSurface:
    """Simplicial surface; faces are vertex triples whose cyclic order is the
    face's reference orientation."""

    vertices: FiniteSet
    faces: tuple
    name: str = ""

    def __post_init__(self):
        for f in self.faces:
            if len(f) != 3 or len(set(f)) != 3:
                raise ValueError(f"face {f!r} is not a triangle")
            for v in f:
                if v not in self.vertices:
                    raise ValueError(f"face {f!r} uses unknown vertex {v!r}")

    @classmethod
    def from_faces(cls, faces: Iterable[Sequence], name: str = "") -> "TriangulatedSurface":
        faces = tuple(tuple(f) for f in faces)
        return cls(FiniteSet({v for f in faces for v in f}), faces, name)

    @property
    def edges(self) -> tuple:
        return canonical({frozenset(e) for f in self.faces for e in face_edges(f)})

    def edge_faces(self) -> dict:
        inc = defaultdict(list)
        for k, f in enumerate(self.faces):
            for e in face_edges(f):
                inc[frozenset(e)].append(k)
        return inc

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def orientation_signs(self) -> dict | None:
        """Signs eps_f making the faces coherently oriented (face 0 of each
        component keeps its order), or None if non-orientable."""
        inc = self.edge_faces()
        sign: dict[int, int] = {}
        for start in range(len(self.faces)):
            if start in sign:
                continue
            sign[start] = 1
            stack = [start]
            while stack:
                k = stack.pop()
                for e in face_edges(self.faces[k]):
                    for j in inc[frozenset(e)]:
                        if j == k:
                            continue
                        # coherent iff the shared edge is traversed oppositely
                        want = -sign[k] * edge_direction(self.faces[k], e) * edge_direction(self.faces[j], e)
                        if j not in sign:
                            sign[j] = want
                            stack.append(j)
                        elif sign[j] != want:
                            return None
        return sign

    def validate(self) -> SurfaceReport:
        defects = []
        inc = self.edge_faces()
        for e, fs in inc.items():
            if len(fs) != 2:
                defects.append(f"edge {canonical(e)} lies in {len(fs)} faces")
        for v in self.vertices:
            link = [tuple(u for u in f if u != v) for f in self.faces if v in f]
            if not link:
                defects.append(f"vertex {v!r} lies in no face")
                continue
            if not _single_cycle(link):
                defects.append(f"link of vertex {v!r} is not a single cycle")
        closed = not defects
        orientable = closed and self.orientation_signs() is not None
        comps = self._face_components()
        return SurfaceReport(closed, orientable, self.euler(), len(comps) == 1, tuple(defects))

    def _face_components(self) -> list[set]:
        inc = self.edge_faces()
        seen, comps = set(), []
        for s in range(len(self.faces)):
            if s in seen:
                continue
            comp, stack = {s}, [s]
            seen.add(s)
            while stack:
                k = stack.pop()
                for e in face_edges(self.faces[k]):
                    for j in inc[frozenset(e)]:
                        if j not in seen:
                            seen.add(j)
                            comp.add(j)
                            stack.append(j)
            comps.append(comp)
        return comps

    def subdivide(self, k: int, new_vertex: Label) -> "TriangulatedSurface":
        """1 -> 3 split of face k at a new interior vertex, orientation kept."""
        if new_vertex in self.vertices:
            raise ValueError("new vertex label already used")
        a, b, c = self.faces[k]
        new = [(a, b, new_vertex), (b, c, new_vertex), (c, a, new_vertex)]
        faces = self.faces[:k] + tuple(new) + self.faces[k + 1:]
        return TriangulatedSurface(FiniteSet(list(self.vertices) + [new_vertex]), faces, self.name)


def face_edges(f: Sequence) -> list[tuple]:
    return [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]


def edge_direction(f: Sequence, e) -> int:
    """+1 if the directed edge e = (u, v) runs along the cyclic order of f."""
    u, v = tuple(e) if not isinstance(e, frozenset) else canonical(e)
    for a, b in face_edges(f):
        if (a, b) == (u, v):
            return 1
        if (a, b) == (v, u):
            return -1
    raise ValueError(f"edge {e!r} not in face {f!r}")


def _single_cycle(link: list[tuple]) -> bool:
    adj = defaultdict(list)
    for a, b in link:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(n) != 2 for n in adj.values()):
        return False
    start = next(iter(adj))
    seen, prev, cur = {start}, None, start
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        if nxt in seen:
            return False
        seen.add(nxt)
        prev, cur = cur, nxt
    return len(seen) == len(adj)


def validate_surface(s: TriangulatedSurface) -> SurfaceReport:
    return s.validate()


# standard triangulations

def tetrahedron() -> TriangulatedSurface:
    return TriangulatedSurface.from_faces([(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)], "tetrahedron")


def rp2() -> TriangulatedSurface:
    """Six-vertex, ten-face real projective plane (hemi-icosahedron)."""
    faces = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
             (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return TriangulatedSurface.from_faces(faces, "rp2")


def grid_surface(rows: int, cols: int, klein: bool = False) -> TriangulatedSurface:
    """Quotient of a rows x cols grid of squares, each cut into two triangles.
    Columns wrap straight; rows wrap straight (torus) or with a flip (Klein)."""
    if rows < 3 or cols < 3:
        raise ValueError("need at least a 3 x 3 grid for a simplicial quotient")

    def v(i, j):
        # vertex at grid point (i, j) after identifications
        flip = False
        if i == rows:
            i = 0
            flip = klein
        j = j % cols
        if flip:
            j = (-j) % cols
        return i * cols + j

    faces = []
    for i in range(rows):
        for j in range(cols):
            a, b, c, d = v(i, j), v(i, j + 1), v(i + 1, j + 1), v(i + 1, j)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return TriangulatedSurface.from_faces(faces, "klein" if klein else "torus")


def torus7() -> TriangulatedSurface:
    """Moebius' seven-vertex torus (14 faces)."""
    faces = []
    for i in range(7):
        faces.append((i, (i + 1) % 7, (i + 3) % 7))
        faces.append((i, (i + 3) % 7, (i + 2) % 7))
    return TriangulatedSurface.from_faces(faces, "torus")
