import json
from fractions import Fraction
import subprocess
import sys
from pathlib import Path

import pytest

from highdesc.cli import main, run

DATA = Path(__file__).resolve().parents[1] / "data"


def d(name):
    return str(DATA / name)


def status(*argv):
    rep, code = run(list(argv))
    return rep.status, code


PASSING = [
    ("groupoid", "check", d("groupoid_b2.json")),
    ("equiv", "check", d("functor_pair2_to_point.json")),
    ("equiv", "factorize", d("functor_free_quotient.json"), "--emit"),
    ("equiv", "morita", d("groupoid_pair2.json"), d("groupoid_point.json")),
    ("prestack", "eval", "jandl:3", d("set_two_points.json")),
    ("descent", "objects", "grbtriv:2", d("cover_two_to_point.json")),
    ("descent", "check", d("descent_object_valid.json")),
    ("descent", "equivalent", d("cover_split_three_to_two.json"), "--instance", "bun:2"),
    ("plus", "objects", "grbtriv:2", d("set_point.json"), "--bound", "3"),
    ("plus", "verify-stack", "grbtriv:2", d("cover_two_to_point.json")),
    ("plus", "groupoid", "bun:2", d("groupoid_b2.json"), "--bound", "3"),
    ("equivariant", "eval", "bun:2", d("groupoid_b2.json")),
    ("equivariant", "pullback", d("functor_free_quotient.json"), "--mode", "prestack"),
    ("equivariant", "descent", d("functor_pair2_to_point.json")),
    ("holonomy", "oriented", d("surface_tetrahedron.json"), d("form_eighth.json")),
    ("holonomy", "jandl", d("orientifold_rp2_half.json"), "--exhaustive"),
    ("holonomy", "doublecover", d("surface_rp2.json")),
    ("validate", d("groupoid_b3.json")),
]

FAILING = [
    ("groupoid", "check", d("bad_groupoid_axioms.json")),
    ("equiv", "check", d("functor_z4_to_z2.json")),
    ("equiv", "morita", d("groupoid_b2.json"), d("groupoid_b3.json")),
    ("descent", "check", d("descent_object_invalid.json")),
    ("descent", "equivalent", d("functor_b2_to_point.json"), "--instance", "bun:2"),
    ("equivariant", "pullback", d("functor_b2_to_point.json")),
    ("validate", d("bad_duplicate_label.json")),
]

ERRORS = [
    ("validate", d("bad_empty.json")),
    ("groupoid", "check", d("no_such_file.json")),
    ("groupoid", "check", d("surface_rp2.json")),
    ("groupoid", "frobnicate", d("groupoid_b2.json")),
    ("groupoid", "check", d("groupoid_b2.json"), "--bogus"),
    ("prestack", "eval", "sheaf:2", d("set_point.json")),
    ("holonomy", "oriented", d("surface_rp2.json"), d("form_eighth.json")),
]


@pytest.mark.parametrize("argv", PASSING, ids=lambda a: " ".join(a[:2]))
def test_passing_commands(argv):
    rep, code = run(list(argv))
    assert (rep.status, code) == ("pass", 0), rep.to_text()


@pytest.mark.parametrize("argv", FAILING, ids=lambda a: " ".join(a[:2]))
def test_failing_commands(argv):
    rep, code = run(list(argv))
    assert (rep.status, code) == ("fail", 1), rep.to_text()
    assert any(not f.ok for f in rep.findings)


@pytest.mark.parametrize("argv", ERRORS, ids=lambda a: " ".join(a[:2]))
def test_error_commands(argv):
    rep, code = run(list(argv))
    assert (rep.status, code) == ("error", 2), rep.to_text()
    assert rep.error


def test_duplicate_label_is_named():
    rep, _ = run(["validate", d("bad_duplicate_label.json")])
    bad = [f for f in rep.findings if not f.ok][0]
    assert bad.detail["duplicate"] == "*" and bad.detail["location"] == "$.objects[1]"


def test_malformed_json_reports_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"objects": [1, 2,,]}')
    rep, code = run(["validate", str(p)])
    assert code == 2 and "broken.json:1:19" in rep.error


def test_json_output_is_deterministic(capsys):
    argv = ["equiv", "factorize", d("functor_free_quotient.json"), "--emit", "--format", "json", "--no-timing"]
    outs = []
    for _ in range(2):
        main(argv)
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    parsed = json.loads(outs[0])
    assert "timing" not in parsed and parsed["status"] == "pass"
    assert outs[0] == json.dumps(parsed, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def test_timing_is_reported(capsys):
    main(["groupoid", "check", d("groupoid_b2.json"), "--format", "json"])
    assert "timing" in json.loads(capsys.readouterr().out)


def test_text_output(capsys):
    code = main(["groupoid", "check", d("groupoid_b2.json")])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("groupoid check: PASS")


def test_witness_round_trip(tmp_path, capsys):
    argv = ["equivariant", "pullback", d("functor_free_quotient.json"), "--instance", "bun:2",
            "--format", "json", "--no-timing"]
    assert main(argv) == 0
    report = tmp_path / "report.json"
    report.write_text(capsys.readouterr().out)
    rep, code = run(["equivariant", "pullback", "--verify-witness", str(report)])
    assert code == 0, rep.to_text()
    # a tampered witness is caught
    data = json.loads(report.read_text())
    w = next(f for f in data["findings"] if f["name"] == "witness")["detail"]
    w["G"]["on_objects"] = [[k, "nowhere"] for k, _ in w["G"]["on_objects"]]
    report.write_text(json.dumps(data))
    rep, code = run(["equivariant", "pullback", "--verify-witness", str(report)])
    assert code != 0


def test_old_verb_spelling_still_works():
    assert status("equivariant", "thm216", d("functor_pair2_to_point.json"), "--mode", "prestack") == ("pass", 0)


def test_seed_from_environment_is_reproducible(tmp_path):
    argv = [sys.executable, "-m", "highdesc", "descent", "equivalent", d("cover_two_to_point.json"),
            "--instance", "grbtriv:3", "--format", "json", "--no-timing"]
    env = {"HD_SEED": "7", "PATH": "/usr/bin:/bin"}
    a = subprocess.run(argv, capture_output=True, text=True, env=env)
    b = subprocess.run(argv, capture_output=True, text=True, env=env)
    assert a.returncode == 0 and a.stdout == b.stdout


def test_jandl_half_on_rp2():
    rep, _ = run(["holonomy", "jandl", d("orientifold_rp2_half.json")])
    hol = next(f for f in rep.findings if f.name == "holonomy")
    assert hol.detail["exponent"] == Fraction(1, 2)


def test_oriented_holonomy_value():
    rep, _ = run(["holonomy", "oriented", d("surface_tetrahedron.json"), d("form_eighth.json")])
    assert next(f for f in rep.findings if f.name == "holonomy").detail["exponent"] == Fraction(1, 2)
