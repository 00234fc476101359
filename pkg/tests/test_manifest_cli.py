import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

import helpers
from bihom import cli
from bihom import manifest as mf
from bihom.errors import (
    InvariantViolation,
    ManifestError,
    ParseError,
    UnresolvedReference,
)
from bihom.operators import OOperator, search_o_operators
from bihom.representation import Representation, adjoint_rep, parity_reverse_rep, rep_to_bimodule
from helpers import FIXTURES

FIXTURE_FILES = sorted(p.name for p in FIXTURES.glob("*.json"))


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(*argv):
    return cli.main([str(a) for a in argv])


# ---------------------------------------------------------------- loading

def test_zero_manifest_loads():
    (name, J), = mf.load_manifests([FIXTURES / "zero.json"]).items()
    assert name == "Z12" and len(J.product) == 0


def test_k3_manifest_matches_builder():
    J = mf.load_manifests([FIXTURES / "k3.json"])["K3"]
    assert J == helpers.k3()


def test_non_lowest_terms_rejected(tmp_path):
    doc = {"kind": "algebra", "name": "q", "space": {"even_dim": 1, "odd_dim": 0}, "constants": [[0, 0, 0, "2/4"]]}
    with pytest.raises(InvariantViolation):
        mf.load_manifests([write(tmp_path, "q.json", doc)])


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "abc", "1/-2"])
def test_bad_scalars(tmp_path, bad):
    doc = {"kind": "algebra", "name": "q", "space": {"even_dim": 1, "odd_dim": 0}, "constants": [[0, 0, 0, bad]]}
    with pytest.raises((ParseError, InvariantViolation)):
        mf.load_manifests([write(tmp_path, "q.json", doc)])


def test_unresolved_reference(tmp_path):
    doc = {"kind": "representation", "name": "r", "algebra": "missing",
           "space": {"even_dim": 1, "odd_dim": 0}, "rho": [[["0"]]]}
    with pytest.raises(UnresolvedReference):
        mf.load_manifests([write(tmp_path, "r.json", doc)])


def test_duplicate_names(tmp_path):
    a = {"kind": "algebra", "name": "q", "space": {"even_dim": 1, "odd_dim": 0}, "constants": []}
    b = dict(a, constants=[[0, 0, 0, 1]])
    with pytest.raises(ManifestError):
        mf.load_manifests([write(tmp_path, "a.json", a), write(tmp_path, "b.json", b)])
    # the very same document twice is accepted
    assert len(mf.load_manifests([write(tmp_path, "c.json", a), write(tmp_path, "d.json", a)])) == 1


def test_parse_error_has_location(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"kind": "algebra",\n  oops}')
    with pytest.raises(ParseError, match=r"broken.json:2:"):
        mf.load_manifests([p])


def test_invalid_structure_reported(tmp_path):
    doc = {"kind": "algebra", "name": "q", "space": {"even_dim": 1, "odd_dim": 1}, "constants": [[0, 1, 0, 1]]}
    with pytest.raises(InvariantViolation):
        mf.load_manifests([write(tmp_path, "q.json", doc)])


@pytest.mark.parametrize("fname", FIXTURE_FILES)
def test_fixture_round_trip_bytes(fname, tmp_path):
    src = FIXTURES / fname
    objs = mf.load_manifests([src])
    out = tmp_path / fname
    mf.save(out, list(objs.items()))
    assert out.read_bytes() == src.read_bytes()


def test_all_kinds_round_trip(tmp_path):
    J = helpers.k3lm(2, 3)
    R = adjoint_rep(J)
    op = search_o_operators(R, 1)[0]
    B = rep_to_bimodule(R)
    from bihom.operators import induce_pre_jordan
    Pj = induce_pre_jordan(OOperator(adjoint_rep(helpers.n2()), search_o_operators(adjoint_rep(helpers.n2()), 0)[0].T))
    for obj, name in ((op, "op"), (B, "bim"), (Pj, "pj"), (parity_reverse_rep(R), "rs")):
        objs = mf.with_dependencies(obj, name)
        text = mf.save(tmp_path / "x.json", objs)
        back = mf.load_manifests([tmp_path / "x.json"])
        assert back[name] == obj
        assert mf.save(None, list(back.items())) == text


# ---------------------------------------------------------------- audit documents

def test_audit_document_caps_violations():
    from bihom.gradecore import Audit, Report
    r = Report("big", tuple(((i,), (1,)) for i in range(150)))
    doc = mf.audit_document([Audit("s", (r,))])
    check = doc["checks"][0]
    assert check["violation_count"] == 150 and check["truncated"] and len(check["violations"]) == 100
    assert doc["passed"] is False


# ---------------------------------------------------------------- CLI

def test_check_algebra_twisted(capsys):
    assert run("check-algebra", "--input", FIXTURES / "k3_2_3.json", "--report", "machine") == 0
    doc = json.loads(capsys.readouterr().out)
    assert [c["passed"] for c in doc["checks"]] == [True, True]


def test_check_algebra_mutated(tmp_path, capsys):
    doc = json.loads((FIXTURES / "k3.json").read_text())
    doc["constants"] = [c for c in doc["constants"] if c[:3] != [2, 1, 0]] + [[2, 1, 0, "1"]]
    assert run("check-algebra", "--input", write(tmp_path, "m.json", doc)) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "at (1, 2)" in out


def test_untwist_writes_k3_bytes(tmp_path):
    out = tmp_path / "k3.json"
    assert run("untwist", "--input", FIXTURES / "k3_2_3.json", "--s", 0, "--t", 0, "--name", "K3", "--output", out) == 0
    assert out.read_bytes() == (FIXTURES / "k3.json").read_bytes()


def test_untwist_failing_audit_exit_code(tmp_path):
    assert run("untwist", "--input", FIXTURES / "k3_2_3.json", "--s", 1, "--t", 1, "--output", tmp_path / "u.json") == 1


def test_twist_cli_matches_fixture(tmp_path):
    out = tmp_path / "t.json"
    assert run("twist", "--input", FIXTURES / "k3.json", "--a", "1,2,1/2", "--b", "1,3,1/3",
               "--name", "K3-2-3", "--output", out) == 0
    assert out.read_bytes() == (FIXTURES / "k3_2_3.json").read_bytes()


def test_error_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "b.json", {"kind": "algebra", "name": "q", "space": {"even_dim": 1, "odd_dim": 0},
                                     "constants": [[0, 0, 0, "2/4"]]})
    assert run("check-algebra", "--input", bad) == InvariantViolation.exit_code
    assert run("check-algebra", "--input", tmp_path / "nope.json") == ParseError.exit_code
    from bihom.errors import BudgetExceeded
    assert run("search-oop", "--input", FIXTURES / "k3_adjoint.json", "--coeffs=-2,-1,0,1,2", "--budget", 10) \
        == BudgetExceeded.exit_code
    assert "BudgetExceeded" in capsys.readouterr().err


def test_representation_pipeline(tmp_path, capsys):
    ad = FIXTURES / "k3_adjoint.json"
    assert run("check-rep", "--input", ad) == 0
    assert run("dual-rep", "--input", ad, "--output", tmp_path / "d.json") == 0
    assert run("check-rep", "--input", tmp_path / "d.json") == 0
    assert run("reverse-rep", "--input", ad, "--output", tmp_path / "r.json") == 0
    assert run("direct-sum", "--input", ad, "--input", tmp_path / "r.json", "--output", tmp_path / "s.json") == 0
    assert run("check-isom", "--input", tmp_path / "s.json", "--self-reversing") == 0
    assert run("check-isom", "--input", tmp_path / "s.json", "--self-reversing", "--phi", "suspension-swap") == 0
    assert run("semidirect", "--input", ad, "--output", tmp_path / "sd.json") == 0
    assert run("check-algebra", "--input", tmp_path / "sd.json") == 0
    assert run("coadjoint", "--input", FIXTURES / "k3.json", "--output", tmp_path / "c.json") == 0
    assert run("coadjoint-semidirect", "--input", FIXTURES / "k3.json", "--output", tmp_path / "cs.json") == 0
    assert run("check-algebra", "--input", tmp_path / "cs.json") == 0
    capsys.readouterr()


def test_bimodule_cli(tmp_path):
    R = mf.load_manifests([FIXTURES / "k3_2_3_adjoint.json"])["K3-2-3-ad"]
    mf.save(tmp_path / "b.json", mf.with_dependencies(rep_to_bimodule(R), "bim"))
    assert run("check-bimodule", "--input", tmp_path / "b.json") == 0
    assert run("semidirect", "--input", tmp_path / "b.json", "--output", tmp_path / "s.json") == 0


def test_operator_pipeline(tmp_path, capsys):
    ops = tmp_path / "ops.json"
    assert run("search-oop", "--input", FIXTURES / "n2_adjoint.json", "--parity", 0, "--output", ops) == 0
    names = [d["name"] for d in json.loads(ops.read_text())["manifests"] if d["kind"] == "o_operator"]
    assert len(names) == 9
    pick = names[1]
    assert run("check-oop", "--input", ops, "--subject", pick) == 0
    assert run("check-rb", "--input", ops, "--subject", pick) == 0
    assert run("induce", "--input", ops, "--subject", pick, "--output", tmp_path / "pj.json") == 0
    assert run("check-pre-jordan", "--input", tmp_path / "pj.json") == 0
    assert run("pre-to-jordan", "--input", tmp_path / "pj.json", "--output", tmp_path / "j.json") == 0
    assert run("check-algebra", "--input", tmp_path / "j.json") == 0
    assert run("oop-suspend", "--input", ops, "--subject", pick, "--output", tmp_path / "s.json") == 0
    assert run("check-oop", "--input", tmp_path / "s.json") == 0
    assert run("oop-extend", "--input", ops, "--subject", pick, "--output", tmp_path / "e.json") == 0
    assert run("oop-via-isom", "--input", tmp_path / "e.json", "--output", tmp_path / "v.json") == 0
    capsys.readouterr()
    assert run("check-oop", "--input", tmp_path / "v.json", "--report", "machine") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] and doc["extra"]["sign_crosscheck"]["agree"]


def test_machine_report_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        run("check-rep", "--input", FIXTURES / "k3_adjoint.json", "--report", "machine")
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["tool_version"] and len(doc["inputs"]) == 2 and len(doc["inputs"][0]["sha256"]) == 64


@pytest.mark.skipif(shutil.which("bihom") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["bihom", "check-algebra", "--input", str(FIXTURES / "n2.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "overall: PASS" in proc.stdout


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bihom.cli", "check-algebra", "--input", str(FIXTURES / "zero.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
