"""JSON data files: parsing with located errors, and canonical writers.

Labels in files are strings, integers, or arrays (read as tuples).  Rational
values are strings such as "1/8" or plain integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .groupoid import FiniteGroupoid, GroupoidFunctor, NatIso, check_axioms
from .site import COVER_CLASSES, Cover, FiniteSet, SetMap, TriangulatedSurface, canonical, label_key


class SchemaError(ValueError):
    """Structural problem in a data file; ``location`` is a JSON path."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


class DuplicateLabel(SchemaError):
    def __init__(self, label, location: str):
        super().__init__(f"duplicate label {label!r}", location)
        self.label = label


# ---------------------------------------------------------------- raw JSON


def _no_dup_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise SchemaError(f"duplicate key {k!r}")
        out[k] = v
    return out


def loads(text: str, source: str = "<input>"):
    if not text.strip():
        raise SchemaError("empty file", source)
    try:
        return json.loads(text, object_pairs_hook=_no_dup_keys)
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed JSON: {e.msg}", f"{source}:{e.lineno}:{e.colno}") from None


def load(path) -> object:
    p = Path(path)
    if not p.is_file():
        raise SchemaError("no such file", str(path))
    return loads(p.read_text(), str(path))


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_json(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_json(x):
    if isinstance(x, dict):
        return {str(k) if isinstance(k, str) else json.dumps(to_json(k)): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [to_json(v) for v in canonical(x)]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


# ---------------------------------------------------------------- helpers


def _need(d, key, loc, kind=None):
    if not isinstance(d, dict):
        raise SchemaError("expected an object", loc)
    if key not in d:
        raise SchemaError(f"missing field {key!r}", loc)
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        want = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(f"field {key!r} should be {want}", f"{loc}.{key}")
    return v


def label(x, loc):
    if isinstance(x, bool) or not isinstance(x, (str, int, list)):
        raise SchemaError("a label is a string, integer or array", loc)
    if isinstance(x, list):
        return tuple(label(y, f"{loc}[{i}]") for i, y in enumerate(x))
    return x


def label_out(x):
    if isinstance(x, (tuple, frozenset)):
        return [label_out(y) for y in (canonical(x) if isinstance(x, frozenset) else x)]
    return x


def labels(xs, loc) -> list:
    if not isinstance(xs, list):
        raise SchemaError("expected an array of labels", loc)
    out, seen = [], set()
    for i, x in enumerate(xs):
        lab = label(x, f"{loc}[{i}]")
        if lab in seen:
            raise DuplicateLabel(lab, f"{loc}[{i}]")
        seen.add(lab)
        out.append(lab)
    return out


def rational(x, loc) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError("expected a rational", loc)
    try:
        if isinstance(x, (int, str)):
            return Fraction(x)
    except (ValueError, ZeroDivisionError):
        pass
    raise SchemaError("expected a rational such as \"1/8\" or an integer", loc)


def _pairs(xs, loc, width=2) -> list:
    if not isinstance(xs, list):
        raise SchemaError("expected an array", loc)
    for i, p in enumerate(xs):
        if not isinstance(p, list) or len(p) != width:
            raise SchemaError(f"expected an array of length {width}", f"{loc}[{i}]")
    return xs


def _table(xs, loc, domain, width=2) -> dict:
    out = {}
    for i, row in enumerate(_pairs(xs, loc, width)):
        key = tuple(label(v, f"{loc}[{i}][{j}]") for j, v in enumerate(row[:-1]))
        key = key[0] if width == 2 else key
        if key in out:
            raise DuplicateLabel(key, f"{loc}[{i}]")
        if domain is not None and (key if width == 2 else key[0]) not in domain:
            raise SchemaError(f"unknown label {key!r}", f"{loc}[{i}]")
        out[key] = label(row[-1], f"{loc}[{i}][{width - 1}]")
    return out


# ---------------------------------------------------------------- sets, maps, covers


def parse_set(d, loc="$") -> FiniteSet:
    if isinstance(d, dict):
        d = _need(d, "elements", loc)
        loc += ".elements"
    return FiniteSet(labels(d, loc))


def parse_map(d, loc="$") -> SetMap:
    dom = parse_set(_need(d, "domain", loc), f"{loc}.domain")
    cod = parse_set(_need(d, "codomain", loc), f"{loc}.codomain")
    assign = _table(_need(d, "pairs", loc), f"{loc}.pairs", dom)
    for k, (x, y) in enumerate(assign.items()):
        if y not in cod:
            raise SchemaError(f"image {y!r} of {x!r} is not in the codomain", f"{loc}.pairs")
    missing = [x for x in dom if x not in assign]
    if missing:
        raise SchemaError(f"map undefined on {missing[0]!r}", f"{loc}.pairs")
    return SetMap(dom, cod, assign)


def parse_cover(d, loc="$") -> Cover:
    m = parse_map(d, loc)
    cls = d.get("cover_class", "surjection")
    if cls not in COVER_CLASSES:
        raise SchemaError(f"cover_class must be one of {list(COVER_CLASSES)}", f"{loc}.cover_class")
    pieces = []
    for i, p in enumerate(d.get("pieces", [])):
        pieces.append(frozenset(labels(p, f"{loc}.pieces[{i}]")))
    if not m.is_surjective():
        raise SchemaError("cover map is not surjective", f"{loc}.pairs")
    try:
        return Cover(m, cls, tuple(pieces))
    except ValueError as e:
        raise SchemaError(str(e), f"{loc}.pieces") from None


def dump_set(s: FiniteSet) -> list:
    return [label_out(x) for x in s]


def dump_map(f: SetMap) -> dict:
    return {"domain": dump_set(f.domain), "codomain": dump_set(f.codomain),
            "pairs": [[label_out(x), label_out(f(x))] for x in f.domain]}


def dump_cover(c: Cover) -> dict:
    d = dump_map(c.total)
    d["kind"] = "cover"
    d["cover_class"] = c.cover_class
    if c.pieces:
        d["pieces"] = sorted(([label_out(y) for y in canonical(p)] for p in c.pieces), key=json.dumps)
    return d


# ---------------------------------------------------------------- groupoids and functors


def parse_groupoid(d, loc="$", check: bool = False) -> FiniteGroupoid:
    objs = FiniteSet(labels(_need(d, "objects", loc), f"{loc}.objects"))
    mors_raw = _need(d, "morphisms", loc, list)
    mors, src, tgt = [], {}, {}
    seen = set()
    for i, row in enumerate(mors_raw):
        here = f"{loc}.morphisms[{i}]"
        if isinstance(row, dict):
            f = label(_need(row, "label", here), f"{here}.label")
            s, t = (label(_need(row, k, here), f"{here}.{k}") for k in ("source", "target"))
        elif isinstance(row, list) and len(row) == 3:
            f, s, t = (label(v, f"{here}[{j}]") for j, v in enumerate(row))
        else:
            raise SchemaError("a morphism is [label, source, target]", here)
        if f in seen:
            raise DuplicateLabel(f, here)
        for v in (s, t):
            if v not in objs:
                raise SchemaError(f"unknown object {v!r}", here)
        seen.add(f)
        mors.append(f)
        src[f], tgt[f] = s, t
    A = FiniteSet(mors)
    comp = _table(_need(d, "compose", loc), f"{loc}.compose", None, width=3)
    for (f, g), h in comp.items():
        for v in (f, g, h):
            if v not in A:
                raise SchemaError(f"unknown morphism {v!r} in composition", f"{loc}.compose")
    ident = _table(_need(d, "identity", loc), f"{loc}.identity", objs)
    inv = _table(_need(d, "inverse", loc), f"{loc}.inverse", A)
    g = FiniteGroupoid(objs, A, src, tgt, ident, inv, comp, d.get("name", ""))
    if check:
        rep = check_axioms(g)
        if not rep.valid:
            raise SchemaError(rep.defects[0], loc)
    return g


def dump_groupoid(g: FiniteGroupoid) -> dict:
    A = list(g.morphisms)
    return {
        "kind": "groupoid",
        "name": g.name,
        "objects": dump_set(g.objects),
        "morphisms": [[label_out(f), label_out(g.source[f]), label_out(g.target[f])] for f in A],
        "compose": [[label_out(f), label_out(h), label_out(g.compose[(f, h)])]
                    for f, h in sorted(g.compose, key=lambda p: (label_key(p[0]), label_key(p[1])))],
        "identity": [[label_out(x), label_out(g.identity[x])] for x in g.objects],
        "inverse": [[label_out(f), label_out(g.inverse[f])] for f in A],
    }


def parse_functor(d, loc="$") -> GroupoidFunctor:
    G = parse_groupoid(_need(d, "source", loc), f"{loc}.source")
    H = parse_groupoid(_need(d, "target", loc), f"{loc}.target")
    F0 = _table(_need(d, "on_objects", loc), f"{loc}.on_objects", G.objects)
    F1 = _table(_need(d, "on_morphisms", loc), f"{loc}.on_morphisms", G.morphisms)
    return GroupoidFunctor(G, H, F0, F1)


def dump_functor(F: GroupoidFunctor) -> dict:
    return {
        "kind": "functor",
        "source": dump_groupoid(F.source),
        "target": dump_groupoid(F.target),
        "on_objects": [[label_out(x), label_out(F.F0(x))] for x in F.source.objects],
        "on_morphisms": [[label_out(f), label_out(F.F1(f))] for f in F.source.morphisms],
    }


def dump_natiso(eta: NatIso) -> dict:
    return {"kind": "natiso", "source": dump_functor(eta.source_functor), "target": dump_functor(eta.target_functor),
            "component": [[label_out(x), label_out(eta.component[x])] for x in eta.source_functor.source.objects]}


# ---------------------------------------------------------------- surfaces and surface data


def parse_surface(d, loc="$") -> TriangulatedSurface:
    verts = FiniteSet(labels(_need(d, "vertices", loc), f"{loc}.vertices"))
    faces = []
    seen = set()
    for i, f in enumerate(_pairs(_need(d, "faces", loc), f"{loc}.faces", 3)):
        tri = tuple(label(v, f"{loc}.faces[{i}][{j}]") for j, v in enumerate(f))
        if frozenset(tri) in seen:
            raise DuplicateLabel(list(tri), f"{loc}.faces[{i}]")
        seen.add(frozenset(tri))
        for v in tri:
            if v not in verts:
                raise SchemaError(f"unknown vertex {v!r}", f"{loc}.faces[{i}]")
        if len(set(tri)) != 3:
            raise SchemaError("face repeats a vertex", f"{loc}.faces[{i}]")
        faces.append(tri)
    s = TriangulatedSurface(verts, tuple(faces), d.get("name", ""))
    if "edges" in d:
        given = set()
        for i, e in enumerate(_pairs(d["edges"], f"{loc}.edges")):
            key = frozenset(label(v, f"{loc}.edges[{i}][{j}]") for j, v in enumerate(e))
            if key in given:
                raise DuplicateLabel(list(e), f"{loc}.edges[{i}]")
            given.add(key)
        if given != set(s.edges):
            extra = canonical(given - set(s.edges)) or canonical(set(s.edges) - given)
            raise SchemaError(f"edge list does not match the faces (first mismatch {label_out(extra[0])!r})",
                              f"{loc}.edges")
    return s


def dump_surface(s: TriangulatedSurface) -> dict:
    return {"kind": "surface", "name": s.name, "vertices": dump_set(s.vertices),
            "edges": [label_out(tuple(canonical(e))) for e in s.edges],
            "faces": [[label_out(v) for v in f] for f in s.faces]}


def _face_values(d, s: TriangulatedSurface, loc) -> list:
    vals = _need(d, "values", loc, list)
    if len(vals) != len(s.faces):
        raise SchemaError(f"expected {len(s.faces)} face values, got {len(vals)}", f"{loc}.values")
    if vals and isinstance(vals[0], list):
        # [[a, b, c], value] rows keyed by face
        by_face = {}
        for i, row in enumerate(_pairs(vals, f"{loc}.values")):
            tri = tuple(label(v, f"{loc}.values[{i}][0]") for v in row[0])
            by_face[frozenset(tri)] = (tri, rational(row[1], f"{loc}.values[{i}][1]"))
        out = []
        for k, f in enumerate(s.faces):
            if frozenset(f) not in by_face:
                raise SchemaError(f"no value for face {list(f)!r}", f"{loc}.values")
            tri, v = by_face[frozenset(f)]
            out.append(v if _same_cyclic(tri, f) else -v)
        return out
    return [rational(v, f"{loc}.values[{i}]") for i, v in enumerate(vals)]


def _same_cyclic(a, b) -> bool:
    i = a.index(b[0])
    return a[(i + 1) % 3] == b[1]


def parse_form(d, loc="$", surface: TriangulatedSurface | None = None):
    from .holonomy import DiscreteTwoForm
    if surface is None and isinstance(d, dict) and "surface" not in d:
        # standalone form file: values only, matched to a surface later
        return tuple(rational(v, f"{loc}.values[{i}]") for i, v in enumerate(_need(d, "values", loc, list)))
    if surface is None:
        surface = parse_surface(_need(d, "surface", loc), f"{loc}.surface")
    return DiscreteTwoForm(surface, tuple(_face_values(d, surface, loc)))


def dump_form(w) -> dict:
    return {"kind": "form", "values": [to_json(v) for v in w.values]}


def parse_orientifold(d, loc="$"):
    from .holonomy import canonical_edge, orientifold_from_twisted
    s = parse_surface(_need(d, "surface", loc), f"{loc}.surface")
    vals = _face_values(d, s, loc)
    theta = None
    if "theta" in d:
        theta = {}
        for i, row in enumerate(_pairs(d["theta"], f"{loc}.theta", 3)):
            e = canonical_edge((label(row[0], f"{loc}.theta[{i}][0]"), label(row[1], f"{loc}.theta[{i}][1]")))
            if e in theta:
                raise DuplicateLabel(list(e), f"{loc}.theta[{i}]")
            theta[e] = rational(row[2], f"{loc}.theta[{i}][2]") % 1
        edges = {canonical_edge(tuple(e)) for e in s.edges}
        for e in edges - set(theta):
            theta[e] = Fraction(0)
        unknown = set(theta) - edges
        if unknown:
            raise SchemaError(f"theta on a non-edge {label_out(sorted(unknown, key=label_key)[0])!r}", f"{loc}.theta")
    f = d.get("f")
    if f is not None:
        if not isinstance(f, list) or len(f) != len(s.faces) or any(v not in (1, -1) for v in f):
            raise SchemaError("f is one sign (1 or -1) per face", f"{loc}.f")
    try:
        return orientifold_from_twisted(s, vals, theta, f)
    except ValueError as e:
        raise SchemaError(str(e), loc) from None


def dump_orientifold(o) -> dict:
    s = o.cover.base
    return {"kind": "orientifold", "surface": dump_surface(s),
            "values": [to_json(o.omega[(k, 1)]) for k in range(len(s.faces))],
            "theta": [[label_out(e[0]), label_out(e[1]), to_json(o.theta[e])] for e in sorted(o.theta, key=label_key)],
            "f": list(o.f)}


# ---------------------------------------------------------------- descent objects


def parse_descent_object(d, loc="$"):
    """{"instance", "cover", "normalized", "k", "mu"}: cochains listed in the
    canonical order of the nerve levels (nondegenerate simplices only when
    normalized)."""
    from .descent import DescentObject, descent_bicategory
    from .prestacks import instance_by_name
    name = _need(d, "instance", loc, str)
    try:
        x = instance_by_name(name)
    except ValueError as e:
        raise SchemaError(str(e), f"{loc}.instance") from None
    c = parse_cover(_need(d, "cover", loc), f"{loc}.cover")
    D = descent_bicategory(x, c, bool(d.get("normalized", False)))
    k = _need(d, "k", loc, list)
    mu = _need(d, "mu", loc, list)
    for key, vec, n in (("k", k, 1), ("mu", mu, 2)):
        if len(vec) != D.C.dim(n):
            raise SchemaError(f"expected {D.C.dim(n)} entries, got {len(vec)}", f"{loc}.{key}")
        for i, v in enumerate(vec):
            if isinstance(v, bool) or not isinstance(v, int):
                raise SchemaError("entries are integers", f"{loc}.{key}[{i}]")
    return D, DescentObject(tuple(v % D.pK for v in k), tuple(v % D.pA for v in mu))


def dump_descent_object(instance: str, c: Cover, X, normalized: bool = False) -> dict:
    return {"kind": "descent-object", "instance": instance, "cover": dump_cover(c),
            "normalized": normalized, "k": list(X.k), "mu": list(X.mu)}


# ---------------------------------------------------------------- dispatch by kind

PARSERS = {
    "set": parse_set,
    "map": parse_map,
    "cover": parse_cover,
    "groupoid": parse_groupoid,
    "functor": parse_functor,
    "surface": parse_surface,
    "form": parse_form,
    "orientifold": parse_orientifold,
    "descent-object": parse_descent_object,
}


def guess_kind(d) -> str:
    if isinstance(d, list):
        return "set"
    if not isinstance(d, dict):
        raise SchemaError("expected an object or an array")
    if "kind" in d:
        if d["kind"] not in PARSERS and d["kind"] != "report":
            raise SchemaError(f"unknown kind {d['kind']!r}", "$.kind")
        return d["kind"]
    for kind, keys in (("functor", ("on_objects",)), ("groupoid", ("morphisms",)),
                       ("orientifold", ("surface", "theta")), ("form", ("surface", "values")),
                       ("surface", ("faces",)), ("descent-object", ("instance", "k")),
                       ("cover", ("cover_class",)), ("map", ("pairs",)), ("set", ("elements",))):
        if all(k in d for k in keys):
            return kind
    raise SchemaError("cannot tell what kind of file this is (add a \"kind\" field)")


def parse_any(d, kind: str | None = None):
    kind = kind or guess_kind(d)
    return kind, PARSERS[kind](d)
