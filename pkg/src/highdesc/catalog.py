"""Small named weak equivalences and groupoids used by the scripts and tests."""

from __future__ import annotations

from .groupoid import (GroupoidFunctor, action_groupoid, connected_groupoid, cyclic_group, delooping,
                       disjoint_union_groupoid, functor_to_point, pair_groupoid, point_into, product_groupoid,
                       quotient_functor, trivial_groupoid)
from .plus import covering_groupoid
from .site import Cover, FiniteSet


def _swap_pairs(g, m):
    # Z/2 acting freely on {0,1,2,3} by 0<->1, 2<->3
    return m ^ g


def weak_equivalences() -> list[tuple[str, GroupoidFunctor]]:
    Z2, Z3 = cyclic_group(2), cyclic_group(3)
    B2, B3 = delooping(Z2), delooping(Z3)
    out = []
    out.append(("PiY over B(Z/2)", covering_groupoid(B2, Cover.from_pairs({"a": "*", "b": "*"}))[1]))
    out.append(("PiY over two points", covering_groupoid(trivial_groupoid([0, 1]),
                                                         Cover.from_pairs({"a": 0, "b": 0, "c": 1}))[1]))
    out.append(("pair(2) -> point", functor_to_point(pair_groupoid(2))))
    out.append(("point -> pair(2)", point_into(pair_groupoid(2), 0)))
    out.append(("free Z/2 quotient, 2 points", quotient_functor(Z2, FiniteSet([0, 1]), lambda g, m: (m + g) % 2)))
    out.append(("free Z/2 quotient, 4 points", quotient_functor(Z2, FiniteSet(range(4)), _swap_pairs)))
    out.append(("identity of B(Z/2)", GroupoidFunctor.identity(B2)))
    out.append(("identity of B(Z/3)", GroupoidFunctor.identity(B3)))
    C = connected_groupoid(2, Z2)
    out.append(("pair(2) x B(Z/2) -> B(Z/2)",
                GroupoidFunctor(C, B2, {x: "*" for x in C.objects}, {f: f[1] for f in C.morphisms})))
    out.append(("B(Z/2) -> pair(2) x B(Z/2)",
                GroupoidFunctor(B2, C, {"*": 0}, {g: (0, g, 0) for g in B2.morphisms})))
    P = product_groupoid(B2, pair_groupoid(2))
    out.append(("B(Z/2) x pair(2) -> B(Z/2), projection",
                GroupoidFunctor(P, B2, {o: o[0] for o in P.objects}, {f: f[0] for f in P.morphisms})))
    U = disjoint_union_groupoid([pair_groupoid(2), B2])
    V = disjoint_union_groupoid([trivial_groupoid(["*"]), B2])
    out.append(("pair(2) + B(Z/2) -> point + B(Z/2)",
                GroupoidFunctor(U, V, {o: (0, "*") if o[0] == 0 else o for o in U.objects},
                                {f: (0, "*") if f[0] == 0 else f for f in U.morphisms})))
    return out


def not_weak_equivalences() -> list[tuple[str, GroupoidFunctor]]:
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    B2, B4 = delooping(Z2), delooping(Z4)
    return [
        ("B(Z/2) -> point", functor_to_point(B2)),
        ("B(Z/4) -> B(Z/2)", GroupoidFunctor(B4, B2, {"*": "*"}, {g: g % 2 for g in Z4.elements})),
        ("point -> B(Z/2)", point_into(B2, "*")),
        ("two points -> point", functor_to_point(trivial_groupoid([0, 1]))),
        ("Z/2 acting trivially -> quotient",
         quotient_functor(Z2, FiniteSet([0]), lambda g, m: m)),
    ]


def free_action_groupoid(n_pairs: int = 1):
    Z2 = cyclic_group(2)
    return action_groupoid(Z2, FiniteSet(range(2 * n_pairs)), {(g, m): m ^ g for g in Z2.elements
                                                                for m in range(2 * n_pairs)})
