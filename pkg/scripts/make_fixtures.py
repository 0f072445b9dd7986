"""Regenerate the JSON fixtures in data/."""

from fractions import Fraction
from pathlib import Path

from highdesc import formats as fmt
from highdesc.descent import descent_bicategory, random_object, seeded_rng
from highdesc.groupoid import (action_groupoid, cyclic_group, delooping, functor_to_point, pair_groupoid,
                               point_into, quotient_functor, trivial_groupoid, GroupoidFunctor)
from highdesc.holonomy import lift_oriented, orientifold_from_twisted, z2_cocycle_basis, DiscreteTwoForm
from highdesc.prestacks import instance_by_name
from highdesc.site import Cover, FiniteSet, grid_surface, rp2, tetrahedron, torus7

OUT = Path(__file__).resolve().parent.parent / "data"


def write(name, obj):
    (OUT / name).write_text(fmt.dumps(obj))


def main():
    OUT.mkdir(exist_ok=True)
    Z2 = cyclic_group(2)
    flip = {(g, m): (m + g) % 2 for g in Z2.elements for m in (0, 1)}

    write("groupoid_b2.json", fmt.dump_groupoid(delooping(Z2)))
    write("groupoid_b3.json", fmt.dump_groupoid(delooping(cyclic_group(3))))
    write("groupoid_pair2.json", fmt.dump_groupoid(pair_groupoid(2)))
    write("groupoid_point.json", fmt.dump_groupoid(trivial_groupoid(["*"])))
    write("groupoid_free_z2.json", fmt.dump_groupoid(action_groupoid(Z2, FiniteSet([0, 1]), flip)))

    bad = fmt.dump_groupoid(delooping(Z2))
    bad["objects"].append(bad["objects"][0])
    write("bad_duplicate_label.json", bad)
    bad = fmt.dump_groupoid(delooping(Z2))
    bad["inverse"] = [[0, 0], [1, 0]]
    write("bad_groupoid_axioms.json", bad)
    (OUT / "bad_empty.json").write_text("")

    write("functor_pair2_to_point.json", fmt.dump_functor(functor_to_point(pair_groupoid(2))))
    write("functor_b2_to_point.json", fmt.dump_functor(functor_to_point(delooping(Z2))))
    write("functor_point_into_pair2.json", fmt.dump_functor(point_into(pair_groupoid(2), 0)))
    write("functor_free_quotient.json",
          fmt.dump_functor(quotient_functor(Z2, FiniteSet([0, 1]), lambda g, m: flip[(g, m)])))
    Z4 = cyclic_group(4)
    BZ4, BZ2 = delooping(Z4), delooping(Z2)
    write("functor_z4_to_z2.json", fmt.dump_functor(GroupoidFunctor(
        BZ4, BZ2, {"*": "*"}, {g: g % 2 for g in Z4.elements})))

    write("set_two_points.json", ["a", "b"])
    write("set_point.json", ["*"])
    c = Cover.from_pairs({"a": 0, "b": 0})
    write("cover_two_to_point.json", fmt.dump_cover(c))
    write("cover_split_three_to_two.json",
          fmt.dump_cover(Cover.from_pairs({"a": 0, "b": 0, "c": 1}, cover_class="split",
                                          pieces=[{"a", "c"}, {"b"}])))

    D = descent_bicategory(instance_by_name("grbtriv:2"), c)
    X = random_object(D, seeded_rng(3))
    write("descent_object_valid.json", fmt.dump_descent_object("grbtriv:2", c, X))
    broken = fmt.dump_descent_object("grbtriv:2", c, X)
    broken["mu"][0] ^= 1
    write("descent_object_invalid.json", broken)

    tet = tetrahedron()
    write("surface_tetrahedron.json", fmt.dump_surface(tet))
    write("surface_rp2.json", fmt.dump_surface(rp2()))
    write("surface_torus7.json", fmt.dump_surface(torus7()))
    write("surface_klein.json", fmt.dump_surface(grid_surface(3, 3, klein=True)))
    write("form_eighth.json", {"kind": "form", "values": ["1/8"] * 4})

    write("orientifold_tetrahedron.json",
          fmt.dump_orientifold(lift_oriented(DiscreteTwoForm(tet, (Fraction(1, 8),) * 4))))
    s = rp2()
    z = z2_cocycle_basis(s)[0]
    theta = {e: Fraction(v, 2) for e, v in z.items()}
    write("orientifold_rp2_half.json", fmt.dump_orientifold(orientifold_from_twisted(s, [0] * len(s.faces), theta)))


if __name__ == "__main__":
    main()
