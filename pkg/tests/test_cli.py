import json
import shutil
import subprocess
import sys

import pytest

from mvbetti.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines() if not line.startswith(" "))


def test_octahedron_hand_covers_verify(capsys):
    code, out, _ = run(capsys, "octahedron-with-paper-covers", "--pipeline", "recursive", "--ell", "2",
                       "--cover", "explicit", "--verify")
    rec = record(out)
    assert code == 0
    assert rec["betti"] == "[1, 0, 1]"
    assert rec["verify"] == "agree"
    assert rec["dag_levels"] == "[1, 3, 5]"
    assert rec["violations"] == "0"


def test_oracle_on_torus(capsys):
    code, out, _ = run(capsys, "torus", "--pipeline", "oracle")
    assert code == 0
    assert record(out)["betti"] == "[1, 2, 1]"
    assert "dag_levels" not in record(out)


def test_betti01_on_circle(capsys):
    code, out, _ = run(capsys, "circle", "--pipeline", "betti01", "--cover", "star")
    assert code == 0
    rec = record(out)
    assert rec["betti"] == "[1, 1]"
    assert rec["ell"] == "1"


@pytest.mark.parametrize("pipeline", ["oracle", "betti01", "mv", "recursive"])
def test_every_pipeline_agrees_on_circle(capsys, pipeline):
    code, out, _ = run(capsys, "circle", "--pipeline", pipeline, "--ell", "1", "--verify")
    assert code == 0
    assert record(out)["verify"] == "agree"


def test_nerve_refuses_disconnected_intersections(capsys):
    # the two greedy stars of the 4-cycle meet in two points
    code, _, err = run(capsys, "circle", "--pipeline", "nerve", "--ell", "1")
    assert code == 1
    assert "2 components" in err


def test_verification_mismatch_exit_code(capsys):
    # two closed hemispheres are not a Leray cover: the nerve misses H^2
    code, out, _ = run(capsys, "octahedron", "--pipeline", "nerve", "--ell", "2", "--cover", "explicit", "--verify")
    rec = record(out)
    assert code == 2
    assert rec["betti"] == "[1, 0, 0]"
    assert rec["oracle"] == "[1, 0, 1]"
    assert rec["verify"] == "mismatch"


def test_verify_does_not_change_numbers(capsys):
    plain = record(run(capsys, "torus", "--ell", "2")[1])
    checked = record(run(capsys, "torus", "--ell", "2", "--verify")[1])
    for k, v in plain.items():
        assert checked[k] == v


@pytest.mark.parametrize("argv,fragment", [
    (["no-such-file.sc"], "no-such-file.sc"),
    (["circle", "--pipeline", "betti01", "--ell", "2"], "ell <= 1"),
    (["circle", "--ell", "-1"], "nonnegative"),
    (["torus", "--cover", "explicit"], "cover"),
])
def test_errors_exit_one(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert err.startswith("mvbetti: error:")
    assert fragment in err


def test_parse_error_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.sc"
    p.write_text("vertex a\nsimplex a b\n")
    code, _, err = run(capsys, str(p))
    assert code == 1
    assert "line 2" in err


def test_closure_warning_is_printed(capsys, tmp_path):
    p = tmp_path / "tri.sc"
    p.write_text("vertex a\nvertex b\nvertex c\nsimplex a b c\n")
    code, out, err = run(capsys, str(p), "--pipeline", "oracle")
    assert code == 0
    assert "mvbetti: warning:" in err
    assert record(out)["betti"] == "[1, 0, 0]"


def test_single_vertex_file(capsys, tmp_path):
    p = tmp_path / "pt.sc"
    p.write_text("vertex a\n")
    code, out, _ = run(capsys, str(p), "--ell", "1", "--verify")
    assert code == 0
    assert record(out)["betti"] == "[1, 0]"


def test_machine_output(capsys):
    code, out, _ = run(capsys, "two-points", "--ell", "0", "--machine", "--verify")
    assert code == 0
    assert out.count("\n") == 1
    obj = json.loads(out)
    assert obj["betti"] == [2]
    assert obj["verify"] == "agree"
    assert obj["pipeline"] == "recursive"


def test_output_is_deterministic(capsys):
    argv = ["projective-plane", "--ell", "2", "--verify", "--show-complex"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert first.encode() == second.encode()


def test_timing_is_opt_in(capsys):
    assert "wall_time_s" not in run(capsys, "circle")[1]
    assert "wall_time_s" in record(run(capsys, "circle", "--timing")[1])


def test_out_file(capsys, tmp_path):
    target = tmp_path / "res.txt"
    code, out, _ = run(capsys, "circle", "--ell", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert record(target.read_text())["betti"] == "[1, 1]"


def test_show_complex_dump(capsys):
    code, out, _ = run(capsys, "octahedron", "--cover", "explicit", "--show-complex")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "complex 0"
    assert sum(1 for x in lines if x.startswith("complex ")) == 9
    i = lines.index("  delta (0,0) horizontal:")
    rows = [lines[i + 1].strip(), lines[i + 2].strip()]
    assert sorted(r.replace("-", "") for r in rows) == ["[1, 1]", "[1, 1]"]


def test_show_complex_machine(capsys):
    obj = json.loads(run(capsys, "octahedron", "--cover", "explicit", "--show-complex", "--machine")[1])
    root = obj["complexes"][0]
    assert root["level"] == 0
    assert root["dims"] == {"0,0": 2, "1,0": 2, "1,1": 2}
    assert {len(c["factors"]) for c in obj["complexes"][1:]} <= {1, 2}


def test_module_entry_point(tmp_path):
    exe = shutil.which("mvbetti")
    cmd = [exe] if exe else [sys.executable, "-m", "mvbetti.cli"]
    done = subprocess.run(cmd + ["circle", "--ell", "1", "--machine"], capture_output=True, text=True)
    assert done.returncode == 0
    assert json.loads(done.stdout)["betti"] == [1, 1]
