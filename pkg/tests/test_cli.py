import csv
import json
import subprocess
import sys

import numpy as np

from pathinv import make_polar_kernels, make_se_kernel, quarter_turn_group
from pathinv.cli import bench_main, check_invariance_main, main, sample_main


def write_specs(tmp_path):
    k1, _ = make_polar_kernels()
    (tmp_path / "k1.json").write_text(json.dumps(k1.to_dict()))
    (tmp_path / "se.json").write_text(json.dumps(make_se_kernel(1.0, [0.5, 0.5]).to_dict()))
    (tmp_path / "T.json").write_text(json.dumps(quarter_turn_group().average().to_dict()))


def test_check_invariance_exit_codes(tmp_path, capsys):
    write_specs(tmp_path)
    assert check_invariance_main(["--kernel", str(tmp_path / "k1.json"), "--operator", str(tmp_path / "T.json")]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True
    assert check_invariance_main(["--kernel", str(tmp_path / "se.json"), "--operator", str(tmp_path / "T.json")]) == 1
    (tmp_path / "bad.json").write_text(json.dumps({"type": "mystery"}))
    assert check_invariance_main(["--kernel", str(tmp_path / "bad.json"), "--operator", str(tmp_path / "T.json")]) == 2


def test_sample_writes_paths(tmp_path):
    write_specs(tmp_path)
    grid = tmp_path / "grid.csv"
    grid.write_text("x1,x2\n0.1,0.2\n-0.4,0.3\n0.5,-0.5\n")
    out = tmp_path / "paths.csv"
    args = ["--kernel", str(tmp_path / "k1.json"), "--grid", str(grid), "--n", "3", "--out", str(out)]
    assert sample_main(args + ["--seed", "7"]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["x1", "x2", "path0", "path1", "path2"]
    assert len(rows) == 4
    first = out.read_bytes()
    assert sample_main(args + ["--seed", "7"]) == 0
    assert out.read_bytes() == first


def test_sample_headerless_grid_to_stdout(tmp_path, capsys):
    write_specs(tmp_path)
    grid = tmp_path / "grid.csv"
    grid.write_text("0.1,0.2\n0.3,0.4\n")
    assert sample_main(["--kernel", str(tmp_path / "se.json"), "--grid", str(grid), "--n", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x1,x2,path0,path1"
    assert np.array(lines[1].split(","), dtype=float).shape == (4,)


def test_bench_passing_and_failing(tmp_path, capsys):
    assert bench_main(["ode", "--out", str(tmp_path / "ode")]) == 0
    assert "PASS  ode:two_obs_collapse" in capsys.readouterr().out
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"designs": [[], [1.0]]}))
    assert bench_main(["ode", "--config", str(cfg), "--out", str(tmp_path / "ode2"), "--seed", "2"]) == 1
    manifest = json.loads((tmp_path / "ode2" / "ode_manifest.json").read_text())
    assert manifest["seed"] == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "pathinv", "bench", "harmonic", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert main([]) == 2
