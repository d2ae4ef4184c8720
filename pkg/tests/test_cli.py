import json
import subprocess
import sys

import pytest

from lrspline.cli import main, parse_split, run_command
from lrspline.io import serialize_mesh_spec
from lrspline.mesh import HORIZONTAL, SplitSpec
from lrspline.scenarios import scenario


def test_depend_ms_finds_six_circuit():
    code, rep = run_command(["depend", "--scenario", "fig7a", "--kind", "ms"])
    assert code == 3
    assert rep["circuit_size"] == 6 and len(rep["circuit"]) == 6
    assert rep["command"] == ["depend", "--scenario", "fig7a", "--kind", "ms"]
    assert isinstance(rep["elapsed_ms"], int)


def test_depend_lr_independent():
    code, rep = run_command(["depend", "--scenario", "fig7a", "--kind", "lr"])
    assert code == 0 and rep["independent"] and "circuit" not in rep


def test_peel_improved():
    code, rep = run_command(["peel", "--scenario", "figpe", "--improved"])
    assert code == 0 and rep["verdict"] == "Independent" and rep["start"] == "candidates"
    _, classic = run_command(["peel", "--scenario", "figpe"])
    assert classic["verdict"] == "Inconclusive"


def test_peel_auto_start():
    code, rep = run_command(["peel", "--scenario", "fig8lr", "--start", "auto"])
    assert code == 0 and rep["verdict"] == "Inconclusive"


def test_peel_candidates_without_any():
    code, rep = run_command(["peel", "--scenario", "fig7a", "--start", "candidates"])
    assert code == 1 and "candidate" in rep["error"]


def test_dim_and_basis():
    assert run_command(["dim", "--scenario", "fig8lr"])[1]["dim"] == 11
    code, rep = run_command(["basis", "--scenario", "fig7a", "--kind", "ms"])
    assert code == 0 and rep["cardinality"] == 10 and len(rep["bsplines"]) == 10
    assert all(len(b["x"]) == 4 for b in rep["bsplines"])


def test_handinhand_default_and_explicit():
    _, rep = run_command(["handinhand", "--scenario", "hh5"])
    assert (rep["r"], rep["restricted_count"], rep["restricted_rank"], rep["goes_hand_in_hand"]) == (4, 5, 3, False)
    _, rep = run_command(["handinhand", "--scenario", "hh1a", "--split", "v:5/8:1/3:1"])
    assert rep["goes_hand_in_hand"] is True


def test_handinhand_needs_split():
    assert run_command(["handinhand", "--scenario", "fig7a"])[0] == 1


def test_parse_split():
    assert parse_split("h:1/2:0:3:2") == SplitSpec(HORIZONTAL, "1/2", 0, 3, 2)


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["dim"],
    ["dim", "--scenario", "nope"],
    ["dim", "--scenario", "fig7a", "--mesh", "x"],
    ["basis", "--scenario", "fig7a", "--kind", "xx"],
    ["handinhand", "--scenario", "hh5", "--split", "d:1:2"],
    ["render", "--scenario", "fig7a"],
])
def test_usage_errors(argv):
    assert run_command(argv)[0] == 1


def test_parse_and_semantic_errors(tmp_path):
    bad = tmp_path / "bad.lrspec"
    bad.write_text("degree: [2, 2\n")
    assert run_command(["dim", "--mesh", str(bad)])[0] == 2
    bad.write_text("degree: [2, 2]\nx_knots: [{pos: 0.5}]\ny_knots: [{pos: 0}]\n")
    assert run_command(["dim", "--mesh", str(bad)])[0] == 2
    assert run_command(["dim", "--mesh", str(tmp_path / "missing.lrspec")])[0] == 2


def test_strict_violation(tmp_path):
    text = ("degree: [2, 2]\nx_knots: [{pos: 0}, {pos: 1}, {pos: 2}, {pos: 3}, {pos: 4}]\n"
            "y_knots: [{pos: 0}, {pos: 1}, {pos: 2}]\n"
            'insertions: [{axis: h, at: "1/2", from: 1, to: 3}]\n')
    path = tmp_path / "short.lrspec"
    path.write_text(text)
    assert run_command(["validate", "--mesh", str(path), "--strict"])[0] == 2
    code, rep = run_command(["dim", "--mesh", str(path)])
    assert code == 0 and rep["lr_rules_hold"] is False


def test_validate_box_scenario():
    code, rep = run_command(["validate", "--scenario", "fig15a"])
    assert code == 0 and rep["lr_mesh"] is False and rep["violations"][0]["rule"] == 0
    code, rep = run_command(["validate", "--scenario", "fig8lr"])
    assert rep["violations"] == []


def test_mesh_file_input(tmp_path):
    path = tmp_path / "fig8lr.lrspec"
    path.write_text(serialize_mesh_spec(scenario("fig8lr").mesh))
    code, rep = run_command(["depend", "--mesh", str(path)])
    assert code == 3 and rep["circuit_size"] == 8


def test_main_writes_json_and_tsv(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["dim", "--scenario", "fig7a", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["dim"] == 9
    assert main(["dim", "--scenario", "fig7a", "--format", "tsv"]) == 0
    assert "dim\t9" in capsys.readouterr().out.splitlines()


def test_main_reports_errors(capsys):
    assert main(["dim", "--scenario", "nope"]) == 1
    assert "error:" in capsys.readouterr().err


def test_figure_and_render(tmp_path):
    fig = tmp_path / "c.png"
    code, _ = run_command(["depend", "--scenario", "fig7a", "--kind", "ms", "--figure", str(fig)])
    assert code == 3 and fig.read_bytes()[:4] == b"\x89PNG"
    svg, png = tmp_path / "m.svg", tmp_path / "m.png"
    code, rep = run_command(["render", "--scenario", "fig8lr", "--svg", str(svg), "--png", str(png),
                             "--overlay", "circuit-lr", "--t-vertices"])
    assert code == 0 and rep is None
    assert svg.read_text().count('class="support"') == 8
    assert png.exists()


def test_fuzz_seed_from_environment(monkeypatch):
    monkeypatch.setenv("LRSPLINE_SEED", "7")
    code, rep = run_command(["fuzz", "--degree", "1,1", "--count", "2", "--steps", "2"])
    assert code == 0 and rep["seed"] == 7
    assert rep["results"][0]["meshes"] == 2
    _, again = run_command(["fuzz", "--degree", "1,1", "--count", "2", "--steps", "2", "--seed", "7"])
    assert again["results"] == rep["results"]


def test_scenarios_listing():
    code, rep = run_command(["scenarios"])
    assert code == 0 and len(rep["scenarios"]) == 20


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lrspline.cli", "depend", "--scenario", "fig7a",
                           "--kind", "ms"], capture_output=True, text=True, check=False)
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["circuit_size"] == 6
