"""A short tour: Morita equivalence, descent counts, plus construction, holonomy."""

from fractions import Fraction

from highdesc.equivalence import factorize, morita_equivalent
from highdesc.equivariant import eval_on_groupoid
from highdesc.groupoid import cyclic_group, delooping, functor_to_point, pair_groupoid, trivial_groupoid
from highdesc.holonomy import lift_oriented, jandl_holonomy, oriented_holonomy, random_form
from highdesc.plus import plus_on_groupoid
from highdesc.prestacks import instance_by_name


def main():
    import random

    P2, pt = pair_groupoid(2), trivial_groupoid(["*"])
    B2 = delooping(cyclic_group(2))
    print("pair(2) ~ point:", morita_equivalent(P2, pt).equivalent)
    print("B(Z/2) ~ point:", morita_equivalent(B2, pt).equivalent)

    fac = factorize(functor_to_point(P2))
    print("pair(2) -> point factors through a groupoid with", len(fac.G.target.objects), "objects")

    for name in ("bun:2", "grbtriv:2", "grbtriv:3"):
        x = instance_by_name(name)
        G = delooping(cyclic_group(int(name.split(":")[1])))
        print(f"{name} on B(Z/{name[-1]}):", eval_on_groupoid(x, G).pi0_count(), "iso classes,",
              len(plus_on_groupoid(x, G).iso_classes()), "after plus")

    from highdesc.site import tetrahedron
    w = random_form(tetrahedron(), random.Random(1))
    h = oriented_holonomy(w)
    print("oriented holonomy on the tetrahedron:", h, "| via orientifold:", jandl_holonomy(lift_oriented(w)))
    assert isinstance(h, Fraction)


if __name__ == "__main__":
    main()
