import json
import subprocess
import sys

import pytest

from uqpoly.cli import main
from uqpoly.newton import parse_diagram


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_realize(capsys):
    code, out, _ = run(capsys, "realize", "--r", "1,1", "--gen", "E32")
    assert code == 0 and out.strip() == "1 * q^{(1/4)(Nx)} * Dy"


def test_realize_classical(capsys):
    code, out, _ = run(capsys, "realize", "--r", "1,1", "--gen", "E21", "--limit-q1")
    assert code == 0 and "dx" in out and "dz" in out


def test_act(capsys):
    code, out, _ = run(capsys, "act", "--r", "1,1", "--gen", "E13", "--poly", "1")
    assert code == 0 and out.strip() == "(-1*t^3) * x y + (1*t^1 + 1*t^-3) * z"
    code, out, _ = run(capsys, "act", "--r", "1,1", "--gen", "E21", "--poly", "1")
    assert out.strip() == "0"


def test_act_evaluated(capsys):
    code, out, _ = run(capsys, "act", "--r", "2,1", "--gen", "E12", "--poly", "1", "--t0", "1/2")
    # [2] at q = t^4, t = 1/2
    assert code == 0 and out.strip() == "(17/4) * x"
    code, out, _ = run(capsys, "act", "--r", "2,1", "--gen", "E12", "--poly", "1", "--limit-q1")
    assert out.strip() == "(2) * x"


@pytest.mark.parametrize(
    "args",
    [
        ["realize", "--r", "1,1", "--gen", "E99"],
        ["act", "--r", "1,1", "--gen", "E12", "--poly", "x^-1"],
        ["realize", "--r", "1,1,1", "--n", "3", "--gen", "E12"],
        ["kernel", "--r", "1/2,1/3"],
        ["verify", "--r", "a,b"],
        ["act", "--r", "1,1", "--gen", "E12", "--poly", "1", "--t0", "0"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, args):
    code, _, _ = run(capsys, *args)
    assert code == 2


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--r", "1,1", "--window", "3", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["suite"] == "verify"
    assert rep["params"] == {"n": 3, "r": ["1", "1"], "window": 3}
    assert rep["checks"] and all(c["status"] == "pass" for c in rep["checks"])
    assert all({"name", "paper_ref", "status"} <= set(c) for c in rep["checks"])


def test_verify_n2_text(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--r", "3", "--window", "5")
    assert code == 0 and out.strip().endswith("checks passed")


def test_verify_large_rank_warns(capsys):
    code, out, err = run(capsys, "verify", "--n", "5", "--window", "4")
    assert code == 0 and "warning" in err


def test_kernel_and_basis(capsys, tmp_path):
    code, out, _ = run(capsys, "kernel", "--r", "1,1")
    assert code == 0 and "dimension 8" in out
    code, out, _ = run(capsys, "kernel", "--r", "1,1", "--format", "json")
    assert json.loads(out)["dimension"] == 8
    code, out, _ = run(capsys, "basis", "--r", "1,1")
    assert out.startswith("8 states")
    f = tmp_path / "basis"
    code, _, _ = run(capsys, "basis", "--r", "1,1", "--out", str(f))
    assert len(json.loads((tmp_path / "basis.json").read_text())) == 8


def test_diagram_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "diagram", "--r", "0,2", "--format", "json")
    d = parse_diagram(out)
    assert code == 0 and len(d.points) == 6
    code, out, _ = run(capsys, "diagram", "--r", "1/2,1/2", "--window", "3", "--format", "svg")
    assert out.startswith("<svg") and "stroke-dasharray" in out
    f = tmp_path / "d.json"
    run(capsys, "diagram", "--r", "1,1", "--format", "json", "--out", str(f))
    assert f.exists() and (tmp_path / "d.svg").exists()


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "uqpoly", "realize", "--n", "2", "--r", "2", "--gen", "E21"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and "Dx" in out.stdout
