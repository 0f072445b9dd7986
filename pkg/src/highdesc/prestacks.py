"""Presheaves in bicategories on the finite site.

The shipped descent-capable instances are pointwise powers of a small strict
2-group: a 1-cell group K, a 2-cell group A and a sign action of K on A.
Over a finite set S

* there is one object,
* 1-cells are functions k: S -> K with k (x) k' = k + k',
* 2-cells exist only from a 1-cell to itself and are functions a: S -> A,
  composed vertically by addition and horizontally by
  (k, a) (x) (k', b) = (k + k', a + sign(k) b).

Trivial A-gerbes take K = 0 (bundles over a discrete set are trivial, their
automorphisms are A-valued functions).  A-bundles take K = A and no 2-cells.
Trivial Jandl gerbes take K = Z/2 acting on A by inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Hashable, Iterable, Sequence

import numpy as np

from .site import FiniteSet, SetMap

Label = Hashable


# ---------------------------------------------------------------- groups


@dataclass(frozen=True)
class AbGroup:
    """Z/n (n >= 1) or Q/Z (n = 0), written additively."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("modulus must be >= 0")

    @classmethod
    def cyclic(cls, n: int) -> "AbGroup":
        if n < 1:
            raise ValueError("cyclic group needs n >= 1")
        return cls(n)

    @classmethod
    def rationals_mod_one(cls) -> "AbGroup":
        return cls(0)

    @property
    def finite(self) -> bool:
        return self.n > 0

    @property
    def name(self) -> str:
        return "Q/Z" if self.n == 0 else f"Z/{self.n}"

    def norm(self, x) -> int | Fraction:
        if self.n == 0:
            x = Fraction(x)
            return x - (x.numerator // x.denominator)
        return int(x) % self.n

    def zero(self):
        return Fraction(0) if self.n == 0 else 0

    def add(self, x, y):
        return self.norm(x + y)

    def neg(self, x):
        return self.norm(-x)

    def elements(self) -> tuple:
        if not self.finite:
            raise ValueError("Q/Z is infinite")
        return tuple(range(self.n))

    def order(self) -> int:
        if not self.finite:
            raise ValueError("Q/Z is infinite")
        return self.n

    def check_laws(self, sample: Iterable | None = None) -> list[str]:
        els = list(sample) if sample is not None else list(self.elements())
        bad = []
        z = self.zero()
        for a in els:
            if self.add(a, z) != self.norm(a) or self.add(a, self.neg(a)) != z:
                bad.append(f"unit/inverse law fails at {a!r}")
            for b in els:
                if self.add(a, b) != self.add(b, a):
                    bad.append(f"commutativity fails at {(a, b)!r}")
                for c in els:
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)):
                        bad.append(f"associativity fails at {(a, b, c)!r}")
        return bad


Z2 = AbGroup(2)
TRIVIAL = AbGroup(1)


@dataclass(frozen=True)
class Coefficients:
    """Strict 2-group data (K, A, sign action)."""

    K: AbGroup
    A: AbGroup
    twisted: bool = False

    def __post_init__(self):
        if self.twisted and self.K.n != 2:
            raise ValueError("the sign action needs K = Z/2")

    def sign(self, k) -> int:
        return -1 if (self.twisted and k % 2) else 1

    def act(self, k, a):
        return self.A.norm(self.sign(k) * a)


# ---------------------------------------------------------------- pointwise bicategory


@dataclass(frozen=True)
class Cell2:
    """A 2-cell on the 1-cell ``k`` with values ``a`` (both tuples over S)."""

    k: tuple
    a: tuple


@dataclass(frozen=True, eq=False)
class PointwiseBicategory:
    """X(S) for a strict 2-group X.  Cells are tuples indexed by the canonical
    order of S.  Composition of 1-cells and horizontal composition are
    written right to left: otimes(f, g) is "f after g"."""

    coeff: Coefficients
    S: FiniteSet

    OBJECT = "*"

    def objects(self) -> tuple:
        return (self.OBJECT,)

    def one_cells(self, x=OBJECT, y=OBJECT) -> Iterable[tuple]:
        return product(self.coeff.K.elements(), repeat=len(self.S))

    def two_cells(self, f: tuple, g: tuple) -> Iterable[Cell2]:
        if f != g:
            return iter(())
        return (Cell2(f, a) for a in product(self.coeff.A.elements(), repeat=len(self.S)))

    def count(self) -> tuple[int, int, int]:
        """Objects, 1-cells, 2-cells (all hom sets together)."""
        n = len(self.S)
        return 1, self.coeff.K.order() ** n, self.coeff.K.order() ** n * self.coeff.A.order() ** n

    def src1(self, f):
        return self.OBJECT

    def tgt1(self, f):
        return self.OBJECT

    def src2(self, c: Cell2) -> tuple:
        return c.k

    def tgt2(self, c: Cell2) -> tuple:
        return c.k

    def id1(self, x=OBJECT) -> tuple:
        return tuple(self.coeff.K.zero() for _ in self.S)

    def id2(self, f: tuple) -> Cell2:
        return Cell2(tuple(f), tuple(self.coeff.A.zero() for _ in self.S))

    def otimes(self, f: tuple, g: tuple) -> tuple:
        K = self.coeff.K
        return tuple(K.add(x, y) for x, y in zip(f, g))

    def otimes2(self, c: Cell2, d: Cell2) -> Cell2:
        A = self.coeff.A
        return Cell2(self.otimes(c.k, d.k),
                     tuple(A.add(a, self.coeff.act(k, b)) for k, a, b in zip(c.k, c.a, d.a)))

    def circ(self, c: Cell2, d: Cell2) -> Cell2:
        """c after d (vertical)."""
        if c.k != d.k:
            raise ValueError("2-cells not vertically composable")
        A = self.coeff.A
        return Cell2(c.k, tuple(A.add(a, b) for a, b in zip(c.a, d.a)))

    def inv1(self, f: tuple) -> tuple:
        return tuple(self.coeff.K.neg(x) for x in f)

    def inv2(self, c: Cell2) -> Cell2:
        return Cell2(c.k, tuple(self.coeff.A.neg(a) for a in c.a))

    def is_invertible1(self, f) -> bool:
        return True

    def cells_equal(self, c: Cell2, d: Cell2) -> bool:
        return c == d


@dataclass(frozen=True, eq=False)
class PointwisePullback:
    """f*: X(N) -> X(M) for f: M -> N; strict bifunctor."""

    source: PointwiseBicategory
    target: PointwiseBicategory
    f: SetMap

    def _pull(self, vals: tuple) -> tuple:
        idx = self.source.S.index
        return tuple(vals[idx(self.f(m))] for m in self.target.S)

    def on_obj(self, x):
        return x

    def on_1(self, k: tuple) -> tuple:
        return self._pull(k)

    def on_2(self, c: Cell2) -> Cell2:
        return Cell2(self._pull(c.k), self._pull(c.a))


@dataclass(frozen=True)
class PrestackInstance:
    name: str
    coeff: Coefficients

    def eval(self, S: FiniteSet) -> PointwiseBicategory:
        return PointwiseBicategory(self.coeff, S)

    def pullback(self, f: SetMap) -> PointwisePullback:
        return PointwisePullback(self.eval(f.codomain), self.eval(f.domain), f)

    def product_witness(self, parts: Sequence[FiniteSet]):
        """X(disjoint union) -> product of X(parts): the tuple of restrictions."""
        from .site import disjoint_union

        total, incl = disjoint_union(parts)
        return total, [self.pullback(i) for i in incl]


def grbtriv(A: AbGroup | int) -> PrestackInstance:
    A = A if isinstance(A, AbGroup) else AbGroup(A)
    return PrestackInstance(f"Grbtriv_{A.name}", Coefficients(TRIVIAL, A))


def bun(A: AbGroup | int) -> PrestackInstance:
    A = A if isinstance(A, AbGroup) else AbGroup(A)
    return PrestackInstance(f"Bun_{A.name}", Coefficients(A, TRIVIAL))


def jandl(A: AbGroup | int) -> PrestackInstance:
    A = A if isinstance(A, AbGroup) else AbGroup(A)
    return PrestackInstance(f"JGrbtriv_{A.name}", Coefficients(Z2, A, twisted=True))


INSTANCES = {"grbtriv": grbtriv, "bun": bun, "jandl": jandl}


def instance_by_name(name: str) -> PrestackInstance:
    """'grbtriv:2', 'bun:3', 'jandl:2'."""
    kind, _, n = name.partition(":")
    if kind not in INSTANCES:
        raise ValueError(f"unknown prestack instance {name!r}")
    return INSTANCES[kind](AbGroup(int(n or 2)))


def eval_prestack(p: PrestackInstance, S: FiniteSet) -> PointwiseBicategory:
    return p.eval(S)


def pullback(p: PrestackInstance, f: SetMap) -> PointwisePullback:
    return p.pullback(f)


# ---------------------------------------------------------------- Jandl bundles


@dataclass(frozen=True)
class JandlBundle:
    """A bundle datum p: S -> A and an orientation sigma: S -> {+1, -1}."""

    base: FiniteSet
    group: AbGroup
    p: tuple
    sigma: tuple

    def __post_init__(self):
        if len(self.p) != len(self.base) or len(self.sigma) != len(self.base):
            raise ValueError("values must be indexed by the base set")
        if any(s not in (1, -1) for s in self.sigma):
            raise ValueError("sigma takes values in {+1, -1}")

    @classmethod
    def from_dicts(cls, base: FiniteSet, group: AbGroup, p: dict, sigma: dict) -> "JandlBundle":
        return cls(base, group, tuple(group.norm(p[x]) for x in base), tuple(sigma[x] for x in base))

    def pull(self, f: SetMap) -> "JandlBundle":
        idx = self.base.index
        return JandlBundle(f.domain, self.group, tuple(self.p[idx(f(m))] for m in f.domain),
                           tuple(self.sigma[idx(f(m))] for m in f.domain))

    def morphisms_to(self, other: "JandlBundle") -> bool:
        """Morphisms (P, sigma) -> (Q, mu) exist only when sigma = mu."""
        return self.base == other.base and self.sigma == other.sigma


def jandl_tensor(x: JandlBundle, y: JandlBundle) -> JandlBundle:
    """(P, sigma) (x) (Q, mu) = (P (x) Q^sigma, sigma mu)."""
    if x.base != y.base or x.group != y.group:
        raise ValueError("base mismatch")
    G = x.group
    p = tuple(G.add(a, G.norm(s * b)) for a, s, b in zip(x.p, x.sigma, y.p))
    return JandlBundle(x.base, G, p, tuple(s * t for s, t in zip(x.sigma, y.sigma)))


def orientation_of(x: JandlBundle) -> tuple:
    return x.sigma


def jandl_unit(base: FiniteSet, group: AbGroup) -> JandlBundle:
    return JandlBundle(base, group, tuple(group.zero() for _ in base), tuple(1 for _ in base))


# ---------------------------------------------------------------- 2-vector data


def _square(m) -> np.ndarray:
    M = np.asarray(m, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    return M


def is_permutation_matrix(M: np.ndarray) -> bool:
    return bool(((M == 0) | (M == 1)).all() and (M.sum(axis=0) == 1).all() and (M.sum(axis=1) == 1).all())


def twovect_invertible(m, over: str = "N") -> bool:
    """Invertibility of a square matrix with natural-number entries.

    over='N': a two-sided inverse with entries in N exists (equivalently the
    matrix is a permutation matrix).  over='Z': determinant +1 or -1."""
    M = _square(m)
    if (M < 0).any():
        raise ValueError("entries must be natural numbers")
    if over == "N":
        return is_permutation_matrix(M)
    if over == "Z":
        from sympy import Matrix

        return abs(int(Matrix(M.tolist()).det())) == 1 if M.size else True
    raise ValueError("over must be 'N' or 'Z'")


def brute_force_n_inverse(m, max_entry: int = 2) -> np.ndarray | None:
    """Search all N-matrices with entries <= max_entry for a two-sided inverse."""
    M = _square(m)
    n = M.shape[0]
    I = np.eye(n, dtype=np.int64)
    for vals in product(range(max_entry + 1), repeat=n * n):
        B = np.array(vals, dtype=np.int64).reshape(n, n)
        if (M @ B == I).all() and (B @ M == I).all():
            return B
    return None


@dataclass(frozen=True)
class TwoVectOneCell:
    """Per-point rank matrices V(s) of shape (rank_target(s), rank_source(s))."""

    source: tuple
    target: tuple
    matrices: tuple

    def __post_init__(self):
        for r, c, V in zip(self.target, self.source, self.matrices):
            if np.asarray(V).shape != (r, c):
                raise ValueError("matrix shape does not fit the rank vectors")


def twovect_compose(f: TwoVectOneCell, g: TwoVectOneCell) -> TwoVectOneCell:
    """f after g: dimensions of (W (x) V) are matrix products of ranks."""
    if g.target != f.source:
        raise ValueError("1-cells not composable")
    mats = tuple((np.asarray(F) @ np.asarray(G)).tolist() for F, G in zip(f.matrices, g.matrices))
    return TwoVectOneCell(g.source, f.target, mats)


def twovect_invertible_cell(f: TwoVectOneCell, over: str = "N") -> bool:
    return all(len(V) == len(V[0]) if len(V) else True for V in f.matrices) and all(
        twovect_invertible(V, over) if np.asarray(V).size else True for V in f.matrices)


def twovect_pullback(f_map: SetMap, cell: TwoVectOneCell) -> TwoVectOneCell:
    idx = f_map.codomain.index
    pick = lambda xs: tuple(xs[idx(f_map(m))] for m in f_map.domain)
    return TwoVectOneCell(pick(cell.source), pick(cell.target), pick(cell.matrices))
