import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from imcf_solitons.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_list(capsys):
    code, out, _ = call(capsys, "catalog", "list")
    assert code == 0
    assert [e["name"] for e in json.loads(out)][0] == "round_sphere"
    assert out == call(capsys, "catalog", "list")[1]


def test_verify_pass(capsys):
    code, out, _ = call(capsys, "verify", "clifford", "--n1", "1", "--n2", "1", "--a", "0.5", "--grid", "12")
    assert code == 0
    report = json.loads(out)
    assert report["max_residual"] < 1e-8 and report["samples_total"] == 144


def test_verify_wrong_velocity_fails(capsys):
    code, _, err = call(capsys, "verify", "circles_product", "--n", "3", "--a", "0.5", "--grid", "6")
    assert code == 2 and "check failed" in err


def test_verify_csv_is_deterministic(capsys, tmp_path):
    argv = ["verify", "round_sphere", "--n", "2", "--a", "0.5", "--grid", "6,4", "--format", "csv"]
    code, first, _ = call(capsys, *argv)
    assert code == 0
    assert first.splitlines()[0] == "u0,u1,residual,estimated_a,ratio"
    assert len(first.splitlines()) == 25
    out = tmp_path / "r.csv"
    assert run(argv + ["--out", str(out)]) == 0
    assert out.read_text() == first


def test_verify_curve_cylinder(capsys):
    code, _, _ = call(capsys, "verify", "curve_cylinder", "--n", "2", "--a", "2", "--c1", "1", "--c2", "1", "--grid", "8")
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nonsense", "--a", "1"],
        ["verify", "round_sphere", "--n", "0", "--a", "1"],
        ["verify", "round_sphere", "--a", "1", "--grid", "x"],
        ["verify", "round_sphere"],
        ["curve", "gen", "--a", "1", "--c1", "0", "--c2", "0", "--theta-min", "0", "--theta-max", "1"],
        ["curve", "gen", "--a", "1", "--c1", "1", "--c2", "0", "--theta-min", "1", "--theta-max", "0"],
        ["pseudo", "build", "--a", "0.5", "--n", "1", "--c1", "1", "--c2", "0"],
        ["flow", "run", "--shape", "circle", "--dt", "0.1", "--T", "1"],
        ["flow", "run", "--shape", "square", "--dt", "1e-4", "--T", "1"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 1 and err


def test_curve_gen_csv_and_svg(capsys, tmp_path):
    argv = ["curve", "gen", "--a", "0.75", "--c1", "1", "--c2", "0", "--theta-min", "0", "--theta-max", "25.2", "--samples", "301"]
    code, out, _ = call(capsys, *argv)
    assert code == 0 and out.startswith("theta,x,y,kappa\n")
    svg = tmp_path / "epi.svg"
    assert run(argv + ["--out", str(svg)]) == 0
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg") and len(root.findall("{http://www.w3.org/2000/svg}circle")) == 4


def test_lagrangian_check(capsys):
    code, out, _ = call(capsys, "lagrangian", "check", "hopf_sphere", "--n", "3", "--grid", "5")
    result = json.loads(out)
    assert code == 0 and result["lagrangian_residual"] < 1e-12 and result["angle_fd_gap"] < 1e-5
    code, out, _ = call(capsys, "lagrangian", "check", "legendrian_torus", "--n", "3")
    assert code == 0 and json.loads(out)["legendrian_residual"] < 1e-12
    assert call(capsys, "lagrangian", "check", "veronese")[0] == 2
    assert call(capsys, "lagrangian", "check", "round_sphere", "--n", "2")[0] == 2


def test_pseudo_build(capsys):
    code, out, _ = call(capsys, "pseudo", "build", "--a", "1", "--n", "2", "--c1", "1", "--c2", "1", "--grid", "8")
    result = json.loads(out)
    assert code == 0
    assert result["pseudoumbilical_residual"] < 1e-9 and result["max_residual"] < 1e-8


def test_flow_run(capsys, tmp_path):
    code, out, _ = call(capsys, "flow", "run", "--shape", "circle", "--dt", "1e-3", "--T", "0.2", "--vertices", "64", "--radius", "10")
    assert code == 0 and json.loads(out)["homothety_deviation"] < 1e-3
    code, out, _ = call(
        capsys, "flow", "run", "--shape", "ellipse", "--dt", "1e-4", "--T", "0.05", "--vertices", "64", "--radius", "2", "--format", "csv", "--snapshots", "2"
    )
    assert code == 0 and out.startswith("t,vertex,x,y\n")
    assert len(out.splitlines()) == 1 + 3 * 64
    frames = tmp_path / "frames"
    assert run(["flow", "run", "--shape", "circle", "--dt", "1e-3", "--T", "0.1", "--vertices", "32", "--radius", "10", "--format", "svg", "--out", str(frames), "--snapshots", "2"]) == 0
    assert len(list(frames.glob("*.svg"))) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "imcf_solitons", "catalog", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)
