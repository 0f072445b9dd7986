"""Command-line entry point: ``highdesc <verb> <subverb> [files] [flags]``.

Every command emits a report with a status (pass, fail or error), a list of
named findings with witnesses, and the elapsed time.  Exit code 0 means pass,
1 a failed check, 2 a parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import formats as fmt
from .formats import SchemaError

PASS, FAIL, ERROR = "pass", "fail", "error"
EXIT = {PASS: 0, FAIL: 1, ERROR: 2}


@dataclass
class Finding:
    name: str
    ok: bool
    detail: object = None

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": fmt.to_json(self.detail)}


@dataclass
class Report:
    command: str
    status: str = PASS
    findings: list = field(default_factory=list)
    timing: float = 0.0
    error: str = ""

    def add(self, name: str, ok: bool, detail=None) -> bool:
        self.findings.append(Finding(name, bool(ok), detail))
        if not ok and self.status == PASS:
            self.status = FAIL
        return bool(ok)

    def note(self, name: str, detail) -> None:
        self.findings.append(Finding(name, True, detail))

    def as_dict(self, timing: bool = True) -> dict:
        d = {"command": self.command, "status": self.status,
             "findings": [f.as_dict() for f in self.findings]}
        if self.error:
            d["error"] = self.error
        if timing:
            d["timing"] = round(self.timing, 4)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status.upper()}"]
        if self.error:
            lines.append(f"  error: {self.error}")
        for f in self.findings:
            mark = "ok " if f.ok else "FAIL"
            det = f.detail
            if isinstance(det, (dict, list)):
                det = json.dumps(fmt.to_json(det), sort_keys=True)
                if len(det) > 200:
                    det = det[:197] + "..."
            lines.append(f"  [{mark}] {f.name}" + ("" if det is None else f": {det}"))
        lines.append(f"  ({self.timing:.3f}s)")
        return "\n".join(lines) + "\n"


def _load(path, kind):
    data = fmt.load(path)
    if kind == "set":
        return fmt.parse_set(data)
    return fmt.PARSERS[kind](data)


def _instance(name):
    from .prestacks import instance_by_name
    try:
        return instance_by_name(name)
    except ValueError as e:
        raise SchemaError(str(e), "instance") from None


def _require_groupoid(rep: Report, G, what: str) -> bool:
    from .groupoid import check_axioms
    r = check_axioms(G)
    return rep.add(f"{what} satisfies the groupoid axioms", r.valid, None if r.valid else list(r.defects[:5]))


def _require_functor(rep: Report, F) -> bool:
    ok = _require_groupoid(rep, F.source, "source") & _require_groupoid(rep, F.target, "target")
    if not ok:
        return False
    bad = F.check()
    return rep.add("functor laws", not bad, bad[:5] or None)


# ---------------------------------------------------------------- groupoid


def cmd_groupoid_check(a, rep):
    G = _load(a.file, "groupoid")
    if _require_groupoid(rep, G, "groupoid"):
        rep.note("summary", {"objects": len(G.objects), "morphisms": len(G.morphisms),
                             "components": len(G.orbits())})


# ---------------------------------------------------------------- equiv


def cmd_equiv_check(a, rep):
    from .equivalence import is_essentially_surjective, is_fully_faithful
    F = _load(a.file, "functor")
    if not _require_functor(rep, F):
        return
    ff = is_fully_faithful(F)
    rep.add("fully faithful", ff.holds, None if ff.holds else {
        "objects": ff.counterexample[0], "morphism": ff.counterexample[1], "preimages": ff.counterexample[2]})
    es = is_essentially_surjective(F, a.cover_class)
    rep.add(f"essentially surjective ({a.cover_class})", es.holds,
            {"section": [[l, list(es.section(l))] for l in es.section.domain]} if es.holds
            else {"missed": list(es.missed)})


def cmd_equiv_factorize(a, rep):
    from .equivalence import factorize, is_surjective_equivalence
    F = _load(a.file, "functor")
    if not _require_functor(rep, F):
        return
    try:
        fac = factorize(F)
    except ValueError as e:
        rep.add("weak equivalence", False, str(e))
        return
    bad = fac.strong.check()
    rep.add("G is a strong equivalence", not bad, bad[:3] or {"middle_objects": len(fac.middle.objects)})
    rep.add("H is a surjective equivalence", is_surjective_equivalence(fac.H))
    comp = fac.G.then(fac.H)
    same = comp.on_objects == F.on_objects and comp.on_morphisms == F.on_morphisms
    rep.add("G then H equals F", same)
    if a.emit:
        rep.note("factors", {"G": fmt.dump_functor(fac.G), "H": fmt.dump_functor(fac.H)})


def cmd_equiv_morita(a, rep):
    from .equivalence import morita_equivalent
    G = _load(a.file, "groupoid")
    L = _load(a.other, "groupoid")
    if not (_require_groupoid(rep, G, "first") and _require_groupoid(rep, L, "second")):
        return
    r = morita_equivalent(G, L)
    if r.equivalent:
        _, leg_g, leg_l = r.zigzag
        rep.add("Morita equivalent", True, {"zigzag_apex_objects": len(leg_g.source.objects),
                                            "leg_to_second": fmt.dump_functor(leg_l) if a.emit else None})
    else:
        rep.add("Morita equivalent", False, {"orbit_group_orders": [list(r.invariant[0]), list(r.invariant[1])]})


# ---------------------------------------------------------------- prestack


def cmd_prestack_eval(a, rep):
    x = _instance(a.instance)
    S = _load(a.file, "set")
    B = x.eval(S)
    o, one, two = B.count()
    rep.note("counts", {"instance": x.name, "objects": o, "one_cells": one, "two_cells": two})
    pt = x.eval(type(S)(["*"])).count()
    rep.add("counts multiply over points", (one, two) == (pt[1] ** len(S), pt[2] ** len(S)))


# ---------------------------------------------------------------- descent


def cmd_descent_objects(a, rep):
    from .descent import descent_bicategory
    x = _instance(a.instance)
    c = _load(a.file, "cover")
    D = descent_bicategory(x, c, a.normalized)
    n = D.count_objects()
    info = {"instance": x.name, "objects": n, "iso_classes": D.pi0_count(),
            "dims": [D.C.dim(k) for k in range(4)]}
    if a.list and n <= 64:
        info["list"] = [{"k": list(X.k), "mu": list(X.mu)} for X in D.objects()]
    rep.note("descent objects", info)


def cmd_descent_check(a, rep):
    D, X = _load(a.file, "descent-object")
    bad = D.object_defects(X)
    rep.add("descent object conditions", not bad, bad[:5] or None)


def cmd_descent_equivalent(a, rep):
    from .descent import is_equivalence, tau_functor
    from .equivariant import pullback_equivariant
    x = _instance(a.instance)
    data = fmt.load(a.file)
    kind = fmt.guess_kind(data)
    if kind == "cover":
        c = fmt.parse_cover(data)
        r = is_equivalence(tau_functor(x, c), witnesses=a.witnesses)
        what = "descent along the cover"
    elif kind == "functor":
        F = fmt.parse_functor(data)
        if not _require_functor(rep, F):
            return
        r = is_equivalence(pullback_equivariant(x, F), witnesses=a.witnesses)
        what = "pullback along the functor"
    else:
        raise SchemaError(f"expected a cover or functor file, got {kind}")
    d = r.as_dict()
    ff_fail = [f for f in d["failures"] if f.startswith("not fully")]
    es_fail = [f for f in d["failures"] if not f.startswith("not fully")]
    rep.add(f"{what} is fully faithful", r.fully_faithful, ff_fail or None)
    rep.add(f"{what} is essentially surjective", r.essentially_surjective,
            {"failures": es_fail, **d["witness"]} if es_fail else d["witness"] or None)


# ---------------------------------------------------------------- plus


def cmd_plus_objects(a, rep):
    from .plus import plus_eval
    x = _instance(a.instance)
    M = _load(a.file, "set")
    extra = None if a.bound is None else a.bound - len(M)
    if extra is not None and extra < 0:
        raise SchemaError("--bound must be at least the size of the base", "--bound")
    P = plus_eval(x, M, a.cover_class, extra)
    classes = P.iso_classes()
    rep.note("plus objects", {"instance": x.name, "bound": P.bound, "covers": len(P.covers()),
                              "representatives": sum(len(c) for c in classes), "iso_classes": len(classes)})


def cmd_plus_verify_stack(a, rep):
    from .plus import verify_stack
    x = _instance(a.instance)
    c = _load(a.file, "cover")
    extra = None if a.bound is None else a.bound - len(c.M)
    r = verify_stack(x, c, plus=not a.pre, extra=extra)
    d = r.as_dict()
    label = "plus construction" if not a.pre else "prestack"
    rep.add(f"descent for the {label}: fully faithful", r.fully_faithful, d["steps"]["tau"]["failures"] or None)
    rep.add(f"descent for the {label}: essentially surjective", r.essentially_surjective, d["witness"] or None)


def cmd_plus_groupoid(a, rep):
    from .plus import plus_on_groupoid
    x = _instance(a.instance)
    G = _load(a.file, "groupoid")
    if not _require_groupoid(rep, G, "groupoid"):
        return
    extra = None if a.bound is None else a.bound - len(G.objects)
    P = plus_on_groupoid(x, G, a.cover_class, extra)
    emb = P.embedding_report()
    rep.note("plus over groupoid", {"instance": x.name, "bound": P.bound, "iso_classes": len(P.iso_classes())})
    rep.add("canonical embedding is an equivalence", emb.equivalence, emb.as_dict()["failures"] or None)


# ---------------------------------------------------------------- equivariant


def cmd_equivariant_eval(a, rep):
    from .descent import h1_representatives
    from .equivariant import eval_on_groupoid
    x = _instance(a.instance)
    G = _load(a.file, "groupoid")
    if not _require_groupoid(rep, G, "groupoid"):
        return
    D = eval_on_groupoid(x, G)
    rep.note("equivariant objects", {"instance": x.name, "iso_classes": D.pi0_count(),
                                     "k_classes": len(h1_representatives(D))})


def _lift_samples(x, F, n, seed):
    from .descent import lift_object, random_object, seeded_rng
    from .equivariant import pullback_equivariant
    P = pullback_equivariant(x, F)
    rng = seeded_rng(seed)
    out = []
    for _ in range(n):
        y = random_object(P.target, rng)
        got = lift_object(P, y)
        if got is None:
            out.append({"y": {"k": list(y.k), "mu": list(y.mu)}, "lift": None})
            continue
        X, m = got
        out.append({"y": {"k": list(y.k), "mu": list(y.mu)}, "x": {"k": list(X.k), "mu": list(X.mu)},
                    "a": list(m.a), "alpha": list(m.alpha)})
    return out


def cmd_equivariant_pullback(a, rep):
    from .equivariant import theorem_harness
    from .equivalence import factorize
    if a.verify_witness:
        return verify_harness_witness(a.verify_witness, rep)
    x = _instance(a.instance)
    F = _load(a.file, "functor")
    if not _require_functor(rep, F):
        return
    h = theorem_harness(x, F, a.mode, seed=a.seed)
    d = h.as_dict()
    if not h.weak_equivalence:
        rep.add("precondition: weak equivalence", False, h.failure)
        return
    key = "equivalence" if a.mode == "stack" else "fully_faithful"
    rep.add("direct engine", d["direct"][key], d["direct"]["failures"] or None)
    rep.add("strong part by transport", d["strong_part"].get("equivalence", False),
            d["strong_part"].get("transport_defects") or None)
    sp = d["surjective_part"]
    rep.add("surjective part by equivariant descent", sp.get(key, False),
            {"levels_surjective": sp.get("levels_surjective"), "constant_columns": sp.get("constant_columns"),
             "levelwise_tau": sp.get("levelwise_tau")})
    rep.add("routes agree", h.agree, h.failure or None)
    fac = factorize(F)
    witness = {"instance": a.instance, "mode": a.mode, "functor": fmt.dump_functor(F),
               "G": fmt.dump_functor(fac.G), "H": fmt.dump_functor(fac.H),
               "retract": fmt.dump_functor(fac.retract),
               "lifts": _lift_samples(x, F, a.samples, a.seed) if a.mode == "stack" else []}
    rep.note("witness", witness)


def verify_harness_witness(path, rep):
    """Re-check a stored harness witness: the factorization tables and the
    object lifts, without rerunning any decision procedure."""
    from .descent import DescentMorphism, DescentObject
    from .equivalence import is_surjective_equivalence, strong_from_retract
    from .equivariant import pullback_equivariant
    data = fmt.load(path)
    wit = None
    for f in data.get("findings", []) if isinstance(data, dict) else []:
        if f.get("name") == "witness":
            wit = f["detail"]
    if wit is None:
        raise SchemaError("no witness finding in report", path)
    F = fmt.parse_functor(wit["functor"], "$.witness.functor")
    G = fmt.parse_functor(wit["G"], "$.witness.G")
    H = fmt.parse_functor(wit["H"], "$.witness.H")
    P = fmt.parse_functor(wit["retract"], "$.witness.retract")
    if not _require_functor(rep, F):
        return
    comp = G.then(H)
    rep.add("G then H equals F", comp.on_objects == F.on_objects and comp.on_morphisms == F.on_morphisms)
    bad = strong_from_retract(G, P).check() if not G.check() and not P.check() else ["factor tables invalid"]
    rep.add("G is strong with the stored retract", not bad, bad[:3] or None)
    rep.add("H is a surjective equivalence", not H.check() and is_surjective_equivalence(H))
    x = _instance(wit["instance"])
    Pb = pullback_equivariant(x, F)
    bad = []
    for i, s in enumerate(wit["lifts"]):
        y = DescentObject(tuple(s["y"]["k"]), tuple(s["y"]["mu"]))
        if s.get("lift") is None and "x" not in s:
            bad.append(f"sample {i} has no lift")
            continue
        X = DescentObject(tuple(s["x"]["k"]), tuple(s["x"]["mu"]))
        m = DescentMorphism(Pb.on_obj(X), y, tuple(s["a"]), tuple(s["alpha"]))
        bad += [f"sample {i}: {e}" for e in Pb.source.object_defects(X) + Pb.target.morphism_defects(m)]
    rep.add("stored lifts satisfy the descent conditions", not bad, bad[:3] or {"samples": len(wit["lifts"])})


def cmd_equivariant_descent(a, rep):
    from .equivariant import column_constancy, equivariant_descent, levelwise_tau
    from .groupoid import nerve_of_functor
    from .equivariant import groupoid_nerve
    from .equivalence import nerve_levels_surjective
    x = _instance(a.instance)
    F = _load(a.file, "functor")
    if not _require_functor(rep, F):
        return
    levels = nerve_levels_surjective(F, 3)
    if not rep.add("levelwise surjective (cover of simplicial sets)", all(levels), {"levels": levels}):
        return
    try:
        r = equivariant_descent(x, F, prestack=a.mode == "prestack")
    except ValueError as e:
        rep.add("equivariant descent", False, str(e))
        return
    key = "equivalence" if a.mode == "stack" else "fully_faithful"
    rep.add("descent comparison", getattr(r, key), r.as_dict()["failures"] or None)
    Hn = nerve_of_functor(F, source_nerve=groupoid_nerve(F.source), target_nerve=groupoid_nerve(F.target))
    taus = levelwise_tau(x, Hn)
    rep.add("levelwise descent", all(t is None or getattr(t, key) for t in taus),
            [None if t is None else getattr(t, key) for t in taus])
    cols = column_constancy(F)
    rep.note("constant columns", cols)


# ---------------------------------------------------------------- holonomy


def cmd_holonomy_oriented(a, rep):
    from .holonomy import oriented_holonomy
    s = _load(a.file, "surface")
    w = fmt.parse_form(fmt.load(a.other), surface=s)
    rv = s.validate()
    if not rep.add("closed orientable surface", rv.closed and rv.orientable, list(rv.defects[:3]) or None):
        return
    h = oriented_holonomy(w, reverse=a.reverse)
    rep.note("holonomy", {"exponent": h, "total": sum(w.values, start=type(h)(0))})


def cmd_holonomy_jandl(a, rep):
    from .holonomy import all_domain_holonomies, jandl_holonomy
    o = _load(a.file, "orientifold")
    bad = o.defects()
    if not rep.add("orientifold data", not bad, bad[:3] or None):
        return
    h = jandl_holonomy(o)
    rep.note("holonomy", {"exponent": h})
    if a.exhaustive:
        vals = all_domain_holonomies(o)
        rep.add("independent of the fundamental domain", len(vals) == 1, sorted(vals))


def cmd_holonomy_doublecover(a, rep):
    from .holonomy import cover_summary, orientation_double_cover
    s = _load(a.file, "surface")
    rv = s.validate()
    if not rep.add("closed surface", rv.closed, list(rv.defects[:3]) or None):
        return
    D = orientation_double_cover(s)
    bad = D.check()
    rep.add("double cover structure", not bad, bad[:3] or None)
    summ = cover_summary(D)
    rep.note("summary", summ)
    rep.add("connected iff the base is non-orientable", summ["total_connected"] != rv.orientable)


# ---------------------------------------------------------------- schema validation


def schema_validate(path) -> Report:
    """Structural validation only."""
    rep = Report(f"validate {path}")
    t0 = time.perf_counter()
    try:
        data = fmt.load(path)
        kind, _ = fmt.parse_any(data)
        rep.note("schema", {"kind": kind})
    except fmt.DuplicateLabel as e:
        rep.add("unique labels", False, {"duplicate": fmt.label_out(e.label), "location": e.location})
    except SchemaError as e:
        rep.status, rep.error = ERROR, str(e)
    rep.timing = time.perf_counter() - t0
    return rep


def cmd_validate(a, rep):
    r = schema_validate(a.file)
    rep.findings, rep.status, rep.error = r.findings, r.status, r.error


# ---------------------------------------------------------------- parser


COMMANDS = {
    ("groupoid", "check"): cmd_groupoid_check,
    ("equiv", "check"): cmd_equiv_check,
    ("equiv", "factorize"): cmd_equiv_factorize,
    ("equiv", "morita"): cmd_equiv_morita,
    ("prestack", "eval"): cmd_prestack_eval,
    ("descent", "objects"): cmd_descent_objects,
    ("descent", "check"): cmd_descent_check,
    ("descent", "equivalent"): cmd_descent_equivalent,
    ("plus", "objects"): cmd_plus_objects,
    ("plus", "verify-stack"): cmd_plus_verify_stack,
    ("plus", "groupoid"): cmd_plus_groupoid,
    ("equivariant", "eval"): cmd_equivariant_eval,
    ("equivariant", "pullback"): cmd_equivariant_pullback,
    ("equivariant", "descent"): cmd_equivariant_descent,
    ("holonomy", "oriented"): cmd_holonomy_oriented,
    ("holonomy", "jandl"): cmd_holonomy_jandl,
    ("holonomy", "doublecover"): cmd_holonomy_doublecover,
    ("validate", None): cmd_validate,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message, "argv")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")

    p = _Parser(prog="highdesc", description="Finite models of higher descent.", parents=[common])
    verbs = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def sub(verb_parser, name, *positionals, help=None):
        q = verb_parser.add_parser(name, parents=[common], help=help)
        for pos in positionals:
            q.add_argument(pos)
        return q

    g = verbs.add_parser("groupoid", help="finite groupoids").add_subparsers(dest="sub", required=True,
                                                                             parser_class=_Parser)
    sub(g, "check", "file", help="check the groupoid axioms")

    e = verbs.add_parser("equiv", help="weak equivalences").add_subparsers(dest="sub", required=True,
                                                                           parser_class=_Parser)
    q = sub(e, "check", "file", help="fully faithful and essentially surjective")
    q.add_argument("--class", dest="cover_class", choices=("split", "surjection"), default="surjection")
    q = sub(e, "factorize", "file", help="strong part then surjective equivalence")
    q.add_argument("--emit", action="store_true", help="include the factor functors")
    q = sub(e, "morita", "file", "other", help="decide Morita equivalence")
    q.add_argument("--emit", action="store_true")

    ps = verbs.add_parser("prestack", help="pointwise prestacks").add_subparsers(dest="sub", required=True,
                                                                                parser_class=_Parser)
    sub(ps, "eval", "instance", "file", help="evaluate an instance on a set")

    d = verbs.add_parser("descent", help="descent bicategories").add_subparsers(dest="sub", required=True,
                                                                                parser_class=_Parser)
    q = sub(d, "objects", "instance", "file", help="descent objects along a cover")
    q.add_argument("--normalized", action="store_true")
    q.add_argument("--list", action="store_true", help="list objects when there are at most 64")
    sub(d, "check", "file", help="check a descent object file")
    q = sub(d, "equivalent", "file", help="decide tau for a cover, or pullback along a functor")
    q.add_argument("--instance", default="grbtriv:2")
    q.add_argument("--witnesses", type=int, default=4)

    pl = verbs.add_parser("plus", help="the plus construction").add_subparsers(dest="sub", required=True,
                                                                              parser_class=_Parser)
    for name, pos in (("objects", "file"), ("verify-stack", "file"), ("groupoid", "file")):
        q = sub(pl, name, "instance", pos)
        q.add_argument("--bound", type=int, default=None, help="bound on the total size of covers")
        q.add_argument("--class", dest="cover_class", choices=("split", "surjection"), default="surjection")
        if name == "verify-stack":
            q.add_argument("--pre", action="store_true", help="check the prestack itself, not its plus")

    eq = verbs.add_parser("equivariant", help="equivariant descent").add_subparsers(dest="sub", required=True,
                                                                                   parser_class=_Parser)
    sub(eq, "eval", "instance", "file", help="evaluate an instance on a groupoid")
    q = eq.add_parser("pullback", parents=[common], help="pullback along a weak equivalence")
    q.add_argument("file", nargs="?")
    q.add_argument("--instance", default="grbtriv:2")
    q.add_argument("--mode", choices=("stack", "prestack"), default="stack")
    q.add_argument("--samples", type=int, default=4)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--verify-witness", metavar="REPORT", default=None)
    q = sub(eq, "descent", "file", help="descent along a levelwise surjective functor")
    q.add_argument("--instance", default="grbtriv:2")
    q.add_argument("--mode", choices=("stack", "prestack"), default="stack")

    h = verbs.add_parser("holonomy", help="surface holonomy").add_subparsers(dest="sub", required=True,
                                                                             parser_class=_Parser)
    q = sub(h, "oriented", "file", "other")
    q.add_argument("--reverse", action="store_true")
    q = sub(h, "jandl", "file")
    q.add_argument("--exhaustive", action="store_true", help="check every fundamental domain")
    sub(h, "doublecover", "file")

    v = verbs.add_parser("validate", parents=[common], help="structural validation of any data file")
    v.add_argument("file")
    return p


# older spelling of "equivariant pullback", still accepted
_VERB_ALIASES = {("equivariant", "thm216"): "pullback"}


def run(argv=None) -> tuple[Report, int]:
    argv = list(sys.argv[1:] if argv is None else argv)
    for i in range(len(argv) - 1):
        argv[i + 1] = _VERB_ALIASES.get((argv[i], argv[i + 1]), argv[i + 1])
    t0 = time.perf_counter()
    try:
        a = build_parser().parse_args(argv)
    except SchemaError as e:
        rep = Report(" ".join(argv[:2]) or "highdesc", ERROR, error=str(e))
        rep.timing = time.perf_counter() - t0
        return rep, 2
    key = (a.verb, getattr(a, "sub", None))
    rep = Report(" ".join(k for k in key if k))
    try:
        COMMANDS[key](a, rep)
    except SchemaError as e:
        rep.status, rep.error = ERROR, str(e)
    except (KeyError, TypeError) as e:
        rep.status, rep.error = ERROR, f"malformed input: {e!r}"
    rep.timing = time.perf_counter() - t0
    return rep, EXIT[rep.status]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    rep, code = run(argv)
    as_json = "--format" in argv and argv[argv.index("--format") + 1:argv.index("--format") + 2] == ["json"]
    as_json = as_json or "--format=json" in argv
    timing = "--no-timing" not in argv
    sys.stdout.write(rep.to_json(timing) if as_json else rep.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
