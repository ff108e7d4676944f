from __future__ import annotations

import json
import subprocess
import sys

import pytest

from bicomplexes.cli import main
from bicomplexes.fixtures import fixture_data
from bicomplexes.io import save_path

from test_dsl import SMALL


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_ddbar_exit_codes(capsys):
    # [PAPER] ddbar holds only in case (3); the construction-2 invariants fail it
    assert run(capsys, "-f", "nakamura_invariant", "-P", "case=3", "check", "ddbar")[0] == 0
    code, out, _ = run(capsys, "-f", "construction2_sigma", "check", "ddbar")
    assert code == 1 and "witness: b_2^" in out and "|p+q-k| = 1" in out


def test_pages_br2(capsys):
    code, out, _ = run(capsys, "-f", "br", "-P", "n=2", "pages")
    assert code == 0
    assert "degenerates at E_3" in out
    assert "k=1 (p,q)=(0,1) dim=5 rank d_2=1" in out


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "validate")[0] == 2  # no input
    assert run(capsys, "-f", "nope", "validate")[0] == 2
    assert run(capsys, "-f", "point", "frobnicate")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{oops", encoding="utf-8")
    assert run(capsys, "-i", str(bad), "validate")[0] == 2
    dsl = tmp_path / "bad.dba"
    dsl.write_text("field 4\ngen a (1,0\n", encoding="utf-8")
    code, _, err = run(capsys, "-i", str(dsl), "validate")
    assert code == 2 and "line 2" in err
    assert run(capsys, "-f", "br", "-P", "n=2", "-P", "window=2", "check", "ddbar")[0] == 2
    assert run(capsys, "-f", "point", "invariants", "--action", "sigma")[0] == 2


def test_validate_and_real_structure(capsys, tmp_path):
    code, out, _ = run(capsys, "-f", "construction2_sigma", "validate")
    assert code == 0 and "real structure: ok" in out
    path = tmp_path / "small.dba"
    path.write_text(SMALL, encoding="utf-8")
    assert run(capsys, "-i", str(path), "validate")[0] == 0


def test_manifold_like(capsys):
    assert run(capsys, "-f", "k3_model", "manifold-like", "--dim", "2")[0] == 0
    code, out, _ = run(capsys, "-f", "nakamura_invariant", "manifold-like", "--dim", "3")
    assert code in (0, 1) and out.startswith("manifold-like:")


def test_invariants_shift_tensor_blowup(capsys, tmp_path):
    code, out, _ = run(capsys, "-f", "construction2", "invariants", "--action", "sigma")
    assert code == 0 and "(2,2)     12" in out
    e = tmp_path / "e.json"
    save_path(e, fixture_data("elliptic_curve").complex)
    code, out, _ = run(capsys, "-f", "point", "tensor", str(e))
    assert code == 0 and json.loads(out)["support"][0]["dim"] == 1
    code, out, _ = run(capsys, "-f", "point", "shift", "2", "1")
    assert json.loads(out)["support"] == [{"dim": 1, "p": 2, "q": 1}]
    code, out, _ = run(capsys, "-f", "projective_space", "-P", "n=2", "blowup", "--center", str(e), "--codim", "2")
    assert code == 0 and len(json.loads(out)["support"]) == 5
    assert run(capsys, "-f", "point", "blowup", "--center", str(e), "--codim", "1")[0] == 2


def test_fixture_verbs(capsys):
    code, out, _ = run(capsys, "fixture", "list")
    assert code == 0 and "nakamura_invariant  (case=1|2|3)" in out
    code, out, _ = run(capsys, "fixture", "dump", "k3_model")
    assert json.loads(out)["support"][2]["dim"] == 20
    code, out, _ = run(capsys, "fixture", "construction2", "--spec")
    assert json.loads(out)["kind"] == "dba"
    assert run(capsys, "fixture", "point", "--spec")[0] == 2


def test_zigzags_render_report(capsys):
    code, out, _ = run(capsys, "-f", "construction2_sigma", "zigzags")
    code2, out2, _ = run(capsys, "-f", "construction2_sigma", "zigzags", "--oracle")
    assert code == code2 == 0 and out == out2
    code, out, _ = run(capsys, "-f", "nakamura_invariant", "render", "--format", "svg")
    assert code == 0 and out.startswith("<svg")
    code, out, _ = run(capsys, "-f", "nakamura_invariant", "report")
    assert code == 0 and "confirmed by the oracle" in out and "page1: true" in out
    code, out, _ = run(capsys, "-f", "nakamura_invariant", "report", "--oracle-limit", "3")
    assert "oracle skipped" in out


def test_selftest(capsys):
    code, out, _ = run(capsys, "--seed", "7", "selftest", "--count", "10", "--order", "4")
    assert code == 0 and "10/10" in out


@pytest.mark.parametrize("argv", [
    ["-f", "construction2_sigma", "report"],
    ["-f", "br", "-P", "n=2", "pages", "--row"],
])
def test_byte_identical_across_processes(argv):
    cmd = [sys.executable, "-m", "bicomplexes", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
