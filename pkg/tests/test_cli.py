import json
import subprocess
import sys
from fractions import Fraction

import pytest

from higher_prequantum.cli.main import main
from higher_prequantum.cli.report import SCHEMA_VERSION, Report, emit_report
from higher_prequantum.cli.scenarios import list_scenarios, run_scenario
from higher_prequantum.errors import InvalidOverride, UnknownScenario
from higher_prequantum.exterior import TAU, Scalar


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parsed(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# -- report emission ------------------------------------------------------------

def test_scalar_rendering_in_reports():
    rep = Report("command", "demo")
    rep.add("value", Scalar(Fraction(1, 2)) * TAU)
    data = json.loads(emit_report(rep))
    assert data["results"]["value"] == "1/2*tau^1"
    assert data["schema_version"] == SCHEMA_VERSION


def test_empty_results_give_skeleton():
    data = json.loads(emit_report({}))
    assert set(data) >= {"schema_version", "results", "assertions", "all_pass"}
    assert data["results"] == {} and data["all_pass"]


def test_emit_report_is_canonical():
    rep = Report("command", "demo")
    rep.add("b", 1)
    rep.add("a", [Fraction(3, 4)])
    raw = emit_report(rep)
    assert raw.endswith(b"\n")
    assert raw.index(b'"a"') < raw.index(b'"b"')
    assert emit_report(rep) == raw


def test_exit_code_tracks_assertions():
    rep = Report("command", "demo")
    rep.check("fine", True)
    assert rep.exit_code == 0
    rep.check("broken", False)
    assert rep.exit_code == 1


# -- scenarios ------------------------------------------------------------------

def test_list_scenarios():
    names = [s["name"] for s in list_scenarios()]
    assert names == sorted(names)
    for required in ("classical-poisson-r2", "string-su2", "torus-prequantization",
                     "r3-volume-jacobi", "heisenberg-r2", "flat-moduli-s1", "flat-moduli-t2",
                     "dglie-compare-r3", "kernel-betti-t2", "kernel-betti-t3", "dw-check-r3"):
        assert required in names


def test_run_classical_scenario():
    rep = run_scenario("classical-poisson-r2", seed=3)
    assert rep.passed
    assert rep.header["seed"] == 3


def test_prequantization_half_fails():
    rep = run_scenario("torus-prequantization", {"k": "1/2"})
    assert not rep.passed and rep.exit_code == 1


def test_flat_moduli_scenario_has_table():
    data = json.loads(emit_report(run_scenario("flat-moduli-s1")))
    assert data["all_pass"]
    assert len(data["results"]["moduli"]["classes"]) == 6


def test_scenario_errors():
    with pytest.raises(UnknownScenario):
        run_scenario("no-such-thing")
    with pytest.raises(InvalidOverride):
        run_scenario("string-su2", {"bogus": "1"})
    with pytest.raises(InvalidOverride):
        run_scenario("torus-prequantization", {"k": "abc"})


def test_scenario_determinism():
    first = emit_report(run_scenario("r3-volume-jacobi", seed=5))
    assert emit_report(run_scenario("r3-volume-jacobi", seed=5)) == first


# -- command line ------------------------------------------------------------------

def test_cli_scenario_list(capsys):
    code, data = parsed(capsys, "scenario", "list")
    assert code == 0
    assert any(s["name"] == "string-su2" for s in data["scenarios"])


def test_cli_scenario_run_and_exit_codes(capsys, tmp_path):
    assert run(capsys, "scenario", "run", "heisenberg-r2")[0] == 0
    assert run(capsys, "scenario", "run", "torus-prequantization", "--set", "k=1/2")[0] == 1
    assert run(capsys, "scenario", "run", "nope")[0] == 2
    assert run(capsys, "scenario", "run", "string-su2", "--set", "bogus=1")[0] == 2
    out = tmp_path / "r.json"
    assert run(capsys, "scenario", "run", "string-su2", "--json", str(out))[0] == 0
    assert json.loads(out.read_text())["name"] == "string-su2"


def test_cli_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HPQ_SEED", "11")
    _, data = parsed(capsys, "scenario", "run", "heisenberg-r2")
    assert data["header"]["seed"] == 11
    monkeypatch.setenv("HPQ_SEED", "x")
    assert run(capsys, "scenario", "run", "heisenberg-r2")[0] == 2


def test_cli_timing_is_opt_in(capsys):
    _, data = parsed(capsys, "scenario", "run", "heisenberg-r2")
    assert "timing" not in data
    _, data = parsed(capsys, "scenario", "run", "heisenberg-r2", "--timing")
    assert "seconds" in data["timing"]


def test_cli_bracket(capsys):
    code, data = parsed(capsys, "bracket", "--chart", "R2", "--omega", "dx0^dx1",
                        "--obs", "h=x0", "--obs", "h=x1")
    assert code == 0
    assert "1" in json.dumps(data["results"])


def test_cli_jacobi_and_ks(capsys):
    code, data = parsed(capsys, "jacobi", "--obs", "h=-x1*dx2", "--obs", "h=-x2*dx0",
                        "--max-arity", "3")
    assert code == 0 and data["header"]["conventions"]["jacobi"] == "shuffle"
    code, _ = parsed(capsys, "ks", "--field", "Dx0", "--field", "Dx1")
    assert code == 0


def test_cli_kernel_and_dw(capsys):
    code, data = parsed(capsys, "kernel", "--chart", "T3", "--n", "2", "--band", "1")
    assert code == 0 and data["results"]["complex"]["betti"] == [1, 3]
    assert run(capsys, "dw", "-H", "x2", "--field", "Dx0", "--field", "Dx1")[0] == 0
    assert run(capsys, "dw", "-H", "0", "--field", "Dx0", "--field", "Dx1")[0] == 1


def test_cli_linfinity_commands(capsys):
    assert run(capsys, "lverify", "--algebra", "string-su2")[0] == 0
    code, data = parsed(capsys, "cocycle", "--algebra", "su2", "--degree", "1", "--value", "e1=1")
    assert code == 0 and data["results"]["is_cocycle"] is False
    assert data["results"]["residual"] == {"e2,e3": "-1"}
    assert run(capsys, "extend", "--algebra", "abelian-r2", "--degree", "2",
               "--value", "e1,e2=1")[0] == 0


def test_cli_morphism_file(capsys, tmp_path):
    spec = {"source": "su2", "target": "su2",
            "components": [{"inputs": [g], "output": [{"generator": g, "c": 1}]}
                            for g in ("e1", "e2", "e3")]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(spec))
    assert run(capsys, "morphism", str(path))[0] == 0
    spec["components"][0]["output"][0]["c"] = 2
    path.write_text(json.dumps(spec))
    assert run(capsys, "morphism", str(path))[0] == 1


def test_cli_deligne_actions(capsys):
    assert run(capsys, "deligne", "check", "--cochain", "prequant:2")[0] == 0
    code, data = parsed(capsys, "deligne", "holonomy", "--cochain", "flat-s1:1/3,0")
    assert code == 0 and "1/3" in json.dumps(data["results"])
    code, data = parsed(capsys, "deligne", "gauge", "--cochain", "flat-s1:1/3,0",
                        "--other", "flat-s1:1/4,0")
    assert "obstructed" in json.dumps(data["results"])
    assert run(capsys, "deligne", "check", "--cochain", "prequant:1/2")[0] == 2
    assert run(capsys, "deligne", "compare")[0] == 0


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert run(capsys, "bracket", "--obs", "h=((")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "higher_prequantum.cli", "scenario", "list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "torus-prequantization" in proc.stdout
