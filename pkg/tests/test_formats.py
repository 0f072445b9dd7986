import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import covers, small_groupoids

from highdesc import formats
from highdesc.formats import DuplicateLabel, SchemaError
from highdesc.groupoid import functor_to_point
from highdesc.site import rp2, tetrahedron, torus7

DATA = Path(__file__).resolve().parents[1] / "data"


def through_text(obj):
    return json.loads(formats.dumps(obj))


@given(small_groupoids())
def test_groupoid_round_trip(G):
    H = formats.parse_groupoid(through_text(formats.dump_groupoid(G)), check=True)
    assert H.objects == G.objects and H.morphisms == G.morphisms
    assert H.compose == G.compose and H.inverse == G.inverse


@given(small_groupoids())
def test_functor_round_trip(G):
    F = functor_to_point(G)
    F2 = formats.parse_functor(through_text(formats.dump_functor(F)))
    assert F2.on_objects == F.on_objects and F2.on_morphisms == F.on_morphisms


@given(covers(max_base=3, max_total=5))
def test_cover_round_trip(c):
    c2 = formats.parse_cover(through_text(formats.dump_cover(c)))
    assert c2.total.assignment == c.total.assignment and c2.cover_class == c.cover_class
    assert set(c2.pieces) == set(c.pieces)


@pytest.mark.parametrize("make", [tetrahedron, rp2, torus7])
def test_surface_round_trip(make):
    s = make()
    s2 = formats.parse_surface(through_text(formats.dump_surface(s)))
    assert set(map(frozenset, s2.faces)) == set(map(frozenset, s.faces))


def test_dumps_is_canonical():
    assert formats.dumps({"b": 1, "a": [2]}) == formats.dumps({"a": [2], "b": 1})
    assert formats.dumps({"x": __import__("fractions").Fraction(1, 8)}) == '{\n  "x": "1/8"\n}\n'


@pytest.mark.parametrize("path", sorted(p.name for p in DATA.glob("*.json") if not p.name.startswith("bad_")))
def test_every_fixture_parses(path):
    kind, obj = formats.parse_any(formats.load(DATA / path))
    assert kind and obj is not None


def test_duplicate_object_label():
    with pytest.raises(DuplicateLabel) as e:
        formats.parse_set(["a", "b", "a"])
    assert e.value.location == "$[2]"


def test_duplicate_key():
    with pytest.raises(SchemaError, match="duplicate key"):
        formats.loads('{"a": 1, "a": 2}')


def test_empty_and_malformed():
    with pytest.raises(SchemaError, match="empty file"):
        formats.loads("  \n")
    with pytest.raises(SchemaError) as e:
        formats.loads('{"a":\n ]', "f.json")
    assert e.value.location == "f.json:2:2"


@pytest.mark.parametrize("bad, where", [
    ({"domain": ["a"], "codomain": ["x"], "pairs": [["a", "y"]]}, "$.pairs"),
    ({"domain": ["a", "b"], "codomain": ["x"], "pairs": [["a", "x"]]}, "$.pairs"),
    ({"domain": ["a"], "codomain": ["x"], "pairs": [["a", "x"], ["a", "x"]]}, "$.pairs[1]"),
])
def test_bad_maps_are_located(bad, where):
    with pytest.raises(SchemaError) as e:
        formats.parse_map(bad)
    assert e.value.location == where


def test_non_surjective_cover_rejected():
    with pytest.raises(SchemaError, match="not surjective"):
        formats.parse_cover({"domain": ["a"], "codomain": ["x", "y"], "pairs": [["a", "x"]],
                             "cover_class": "surjection"})


@given(st.one_of(st.booleans(), st.floats(allow_nan=False), st.none()))
def test_bad_labels(x):
    with pytest.raises(SchemaError):
        formats.parse_set([x])


def test_rationals():
    assert formats.rational("3/8", "$") == __import__("fractions").Fraction(3, 8)
    assert formats.rational(-2, "$") == -2
    for bad in ("x", "1/0", 0.5, True):
        with pytest.raises(SchemaError):
            formats.rational(bad, "$")
