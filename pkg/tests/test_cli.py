import io
import json
import subprocess
import sys

import pytest

from gentle_ext import cli
from gentle_ext.ext import CrossCheckError

KRON = "vertex 1\nvertex 2\narrow a 1 2 s\narrow b 1 2 t\nbeta 1=1 2=1\nrank a=1 b=1\nlambda 0=2\nmu 0=2\n"
A3REL = "vertex 1\nvertex 2\nvertex 3\narrow a 1 2 s\narrow b 2 3 s\nbeta 1=2 2=2 3=2\n"
CYCLE = "vertex 1\nvertex 2\narrow a 1 2 s\narrow b 2 1 t\nbeta 1=1 2=1\n"


@pytest.fixture
def job(tmp_path):
    def make(text, name="job.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    return code, (json.loads(out) if out else None), err


def test_components_lists_three_rank_maps(job):
    code, rep, _ = run_json("components", job(A3REL))
    assert code == 0 and rep["count"] == 3
    assert sorted(tuple(r["rank"].values()) for r in rep["rank_maps"]) == [(0, 2), (1, 1), (2, 0)]


def test_ext_kronecker_equal_parameters(job):
    code, rep, _ = run_json("ext", job(KRON))
    assert code == 0
    (r,) = rep["reports"]
    assert r["ext"]["0"] == 1 and r["ext"]["1"] == 1
    assert r["ext1_cocycle"] == 1


def test_ext_mu_override_and_dot(job, tmp_path):
    dot = tmp_path / "ext.dot"
    code, rep, _ = run_json("ext", job(KRON), "--mu", "0=3", "--dot", str(dot))
    assert code == 0 and rep["reports"][0]["ext"]["1"] == 0
    assert dot.read_text().startswith("graph ext0")


def test_graph_dot(job, tmp_path):
    dot = tmp_path / "g.dot"
    code, rep, _ = run_json("graph", job(KRON), "--dot", str(dot))
    assert code == 0 and rep["graphs"][0]["components"][0]["kind"] == "band"
    assert " -- " in dot.read_text()


def test_module_exact_entries(job):
    code, rep, _ = run_json("module", job(KRON), "--lambda", "0=3/7")
    assert code == 0
    mats = rep["modules"][0]["matrices"]
    assert sorted([mats["a"][0][0], mats["b"][0][0]]) == ["1", "3/7"]


def test_resolve_and_canon(job):
    code, rep, _ = run_json("resolve", job(A3REL), "--rank", "a=1 b=1")
    assert code == 0 and rep["resolutions"][0]["certificate"]["composition_zero"]
    code, rep, _ = run_json("canon", job(A3REL))
    assert code == 0 and len(rep["entries"]) == 3


def test_check_and_selftest(job):
    code, rep, _ = run_json("check", job(A3REL))
    assert code == 0 and rep["relations"] == ["ba"]
    code, rep, _ = run_json("selftest")
    assert code == 0 and rep["ok"]


def test_exit_codes(job, monkeypatch):
    assert run("ext", job("vertex 1\nlambda 0=0\n"))[0] == 2
    assert run("check", job(CYCLE))[0] == 1
    assert run("ext", job(CYCLE))[0] == 1
    assert run("module", job(A3REL), "--rank", "a=3")[0] == 1
    assert run("module", job("vertex 1\n"))[0] == 1
    assert run("ext", job(KRON), "--theta", "0=1:1")[0] == 1
    assert run("ext", str(job(KRON)) + ".missing")[0] == 1

    def broken(*a, **k):
        raise CrossCheckError("injected")

    monkeypatch.setattr(cli, "ext_between", broken)
    code, _, err = run("ext", job(KRON))
    assert code == 3 and "injected" in err


def test_depth_and_field_flags(job):
    code, rep, _ = run_json("ext", job(KRON), "--depth", "3", "--field", "fp:101")
    assert code == 0 and len(rep["reports"][0]["ext"]) == 3 and rep["field"] == "fp:101"
    assert run("ext", job(KRON), "--depth", "1")[0] == 2


def test_text_output(job):
    code, out, _ = run("ext", job(KRON))
    assert code == 0 and "ext1_cocycle: 1" in out


def test_deterministic_output(job):
    path = job(A3REL)
    assert run("graph", path, "--format", "json") == run("graph", path, "--format", "json")


def test_module_entry_point_with_stdin():
    out = subprocess.run([sys.executable, "-m", "gentle_ext", "ext", "-", "--format", "json"],
                         input=KRON, capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["reports"][0]["ext"]["1"] == 1
