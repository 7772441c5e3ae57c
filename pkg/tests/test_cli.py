import json
import subprocess
import sys

import pytest

from effalg.cli import main, render

P_BUMP = "t^3*(y1^2 + y2^2) - t*y1^2 + y1^3"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mult_on_z2z3(capsys, maps_dir):
    code, out, _ = run(capsys, "mult", "--map", str(maps_dir / "z2z3.json"))
    doc = json.loads(out)
    assert code == 0
    assert doc["output"]["value"] == 6
    assert doc["inputs"]["L_system"]["nodes"] == ["1", "2"]


def test_mult_on_axes_is_not_finite(capsys, maps_dir):
    code, out, _ = run(capsys, "mult", "--map", str(maps_dir / "axes.json"))
    doc = json.loads(out)
    assert code == 2
    assert doc["output"]["status"] == "NOT_FINITE"
    assert doc["output"]["value"] == "INFINITE"


def test_mult_with_explicit_nodes(capsys, maps_dir):
    code, out, _ = run(capsys, "mult", "--map", str(maps_dir / "cusp.json"), "--nodes", "1/2,-1,3,7")
    doc = json.loads(out)
    assert code == 0 and doc["output"]["value"] == 2
    assert doc["inputs"]["L_system"]["nodes"] == ["1/2", "-1", "3", "7"]


def test_output_is_deterministic(capsys, maps_dir):
    first = run(capsys, "mult", "--map", str(maps_dir / "z2z3.json"))[1]
    second = run(capsys, "mult", "--map", str(maps_dir / "z2z3.json"))[1]
    assert first == second


def test_loj_identity_writes_rational_strings(capsys, maps_dir, tmp_path):
    out_file = tmp_path / "loj.json"
    code, out, _ = run(capsys, "loj", "--map", str(maps_dir / "identity.json"), "--out", str(out_file))
    assert code == 0 and out == ""
    doc = json.loads(out_file.read_text())
    assert doc["output"]["value"] == "1"
    assert doc["output"]["bound"] == 1
    assert len(doc["inputs"]["N_system"]["nodes"]) == 8


def test_loj_proper(capsys, maps_dir):
    code, out, _ = run(capsys, "loj", "--proper", "--map", str(maps_dir / "z2z3.json"))
    doc = json.loads(out)
    assert code == 0 and doc["output"]["value"] == "3"
    witness = doc["output"]["per_s"][0]
    assert witness["P"] and witness["delta"] == "1/3"


def test_loj_on_a_non_finite_map(capsys, maps_dir):
    code, out, _ = run(capsys, "loj", "--map", str(maps_dir / "axes.json"))
    assert code == 2 and json.loads(out)["output"]["status"] == "NOT_FINITE"


def test_dim0_and_finite(capsys, maps_dir):
    code, out, _ = run(capsys, "dim0", "--map", str(maps_dir / "axes.json"))
    doc = json.loads(out)
    assert code == 0 and doc["output"] == {"dim0": 1, "finite": False}
    assert set(doc["inputs"]["systems_by_q"]) == {"0", "1"}
    code, out, _ = run(capsys, "finite", "--map", str(maps_dir / "axes.json"))
    assert code == 2
    code, out, _ = run(capsys, "finite", "--map", str(maps_dir / "identity.json"), "--method", "threshold")
    assert code == 0 and json.loads(out)["output"]["finite"] is True


def test_bertini_quadric(capsys, maps_dir):
    code, out, _ = run(capsys, "bertini", "--cone", str(maps_dir / "quadric.json"))
    doc = json.loads(out)
    assert code == 0
    assert doc["output"]["witness"]["tuple"] == [1, 2]
    assert doc["output"]["family_size"] == 45
    assert len(doc["inputs"]["system"]["nodes"]) == 10


def test_bertini_on_a_plane_takes_the_first_section(capsys, tmp_path):
    cone = tmp_path / "plane.json"
    cone.write_text(json.dumps({"vars": ["x", "y", "z"], "components": ["x"], "homogeneous": True,
                                "claimed_dim": 2, "claimed_rank": 1}))
    code, out, _ = run(capsys, "bertini", "--cone", str(cone))
    assert code == 0 and json.loads(out)["output"]["witness"]["tuple"] == [1, 2]


def test_bertini_rejects_a_singular_cone(capsys, maps_dir):
    code, out, _ = run(capsys, "bertini", "--cone", str(maps_dir / "crossing_planes.json"))
    assert code == 3
    assert json.loads(out)["output"]["status"] == "HYPOTHESIS_FAILED"


def test_delta(capsys):
    code, out, _ = run(capsys, "delta", "t^2 - y1")
    doc = json.loads(out)
    assert code == 0 and doc["output"]["delta"] == "1/2" and doc["output"]["exponent"] == "2"


def test_delta_not_regular(capsys):
    code, out, err = run(capsys, "delta", P_BUMP)
    assert code == 4
    assert "not regular in t" in err and "P(0, t) = 0" in err
    assert json.loads(out)["output"]["status"] == "NOT_REGULAR"


def test_indep(capsys, maps_dir, tmp_path):
    code, out, _ = run(capsys, "indep", "--forms", str(maps_dir / "forms.json"))
    assert code == 0 and json.loads(out)["output"]["independent"] is True
    rows = tmp_path / "rows.json"
    rows.write_text(json.dumps({"rows": [["1", "0"], ["2", "0"], ["0", "1"]]}))
    code, out, _ = run(capsys, "indep", "--forms", str(rows))
    assert code == 0 and json.loads(out)["output"]["independent"] is False


def test_elim(capsys, maps_dir):
    code, out, _ = run(capsys, "elim", "--map", str(maps_dir / "bump.json"), "z1")
    doc = json.loads(out)
    assert code == 0
    assert doc["output"]["P"] == "y1^2*t^3 + y2^2*t^3 + y1^3 - y1^2*t"
    assert doc["output"]["regular_order"] is None


@pytest.mark.parametrize(
    "argv",
    [
        ["mult", "--map", "missing.json"],
        ["mult"],
        ["elim", "--map", "MAPS/bump.json", "z1 +"],
        ["elim", "--map", "MAPS/bump.json", "z1^2"],
        ["mult", "--map", "MAPS/z2z3.json", "--degree-bound", "2"],
        ["mult", "--map", "MAPS/z2z3.json", "--nodes", "1,1"],
        ["dim0", "--map", "MAPS/axes.json", "--method", "guess"],
        ["bertini", "--cone", "MAPS/quadric.json", "--mode", "multi"],
    ],
)
def test_input_errors_exit_1(capsys, maps_dir, argv):
    argv = [a.replace("MAPS", str(maps_dir)) for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_parse_errors_report_the_column(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["z1"], "components": ["z1^"]}))
    code, _, err = run(capsys, "mult", "--map", str(bad))
    assert code == 1 and "column 4" in err


def test_render_rejects_floats():
    with pytest.raises(TypeError):
        render({"x": 0.5})


def test_console_entry_point(maps_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "effalg.cli", "mult", "--map", str(maps_dir / "identity.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["output"]["value"] == 1


def test_output_does_not_depend_on_jobs(capsys, maps_dir):
    argv = ["loj", "--proper", "--map", str(maps_dir / "z2z3.json")]
    serial = run(capsys, *argv)[1]
    parallel = run(capsys, *argv, "--jobs", "2")[1]
    assert serial == parallel
