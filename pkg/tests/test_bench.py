import json
import math

import numpy as np
import pytest

from pathinv.bench import (
    EXPERIMENTS, ExperimentConfig, q2_score, rise, run, run_gfunction, run_harmonic, run_invariance_gallery,
    run_ode, run_zero_mean, zero_mean_target,
)

SMALL_GFUNCTION = {"n_seeds": 1, "n_train": 30, "n_test": 200, "restarts": 1, "polish": 0, "maxfev": 200}


def test_q2_and_rise():
    y = np.array([1.0, 2.0, 3.0])
    assert q2_score(y, y) == 1.0
    assert q2_score(np.full(3, 2.0), y) == 0.0
    t = np.linspace(0, 1, 101)
    assert rise(np.ones_like(t), np.zeros_like(t), t) == pytest.approx(1.0)


def test_zero_mean_target_integrates_to_zero():
    from numpy.polynomial.legendre import leggauss

    x, w = leggauss(200)
    assert abs(math.pi * w @ zero_mean_target(math.pi * x)) <= 1e-12


def test_zero_mean_experiment(tmp_path):
    r = run_zero_mean(ExperimentConfig("zero-mean", 0, str(tmp_path)))
    assert r.checks["integral_f_zero"]
    assert r.checks["integral_m_inv_zero"]
    assert r.rows[1]["rise"] < r.rows[0]["rise"]
    header = (tmp_path / "zero_mean_grid.csv").read_text().splitlines()[0]
    assert header == "t,f,mean_k,sd_k,mean_k_inv,sd_k_inv"
    manifest = json.loads((tmp_path / "zero_mean_manifest.json").read_text())
    assert manifest["seed"] == 0 and "runtime_seconds" in manifest


def test_ode_experiment():
    r = run_ode(ExperimentConfig("ode"))
    assert r.passed
    sd = {row["n_obs"]: row["max_sd"] for row in r.rows}
    assert sd[0] == pytest.approx(1.0)
    assert sd[1] > 1e-3
    assert sd[2] <= 1e-5


def test_harmonic_experiment():
    r = run_harmonic(ExperimentConfig("harmonic"))
    assert r.passed, r.checks
    row = r.rows[0]
    assert row["interior_max_error"] <= row["boundary_max_error"] + 1e-8


def test_gallery_matrix():
    r = run_invariance_gallery(ExperimentConfig("invariance-gallery", 0))
    assert r.passed, r.checks
    for row in r.rows:
        assert row["kernel_pass"] == row["expected"], row
        assert row["path_pass"] == row["expected"], row
    assert sum(not row["expected"] for row in r.rows) == len(r.rows) // 2


def test_small_gfunction_run(tmp_path):
    r = run_gfunction(ExperimentConfig("gfunction", 0, str(tmp_path), dict(SMALL_GFUNCTION)))
    assert r.checks["parameter_counts"]
    assert r.checks["main_effects_except_last"]
    assert len(r.extra["subsets"]) == 22
    assert {row["kernel"] for row in r.rows} == {"k_add", "k_spa", "k_anova", "k_gauss"}
    for row in r.rows:
        assert row["status"] == "ok"
        assert row["q2"] <= 1.0 and row["rmse"] >= 0
    for name in ("gfunction_metrics.csv", "gfunction_summary.csv", "gfunction_sobol.csv", "gfunction_subsets.csv",
                 "gfunction_kernels.json", "gfunction_manifest.json"):
        assert (tmp_path / name).exists()


def test_config_from_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"experiment": "ode", "seed": 4, "params": {"n_grid": 50}}))
    c = ExperimentConfig.from_json(p)
    assert (c.experiment, c.seed, c.params) == ("ode", 4, {"n_grid": 50})
    flat = tmp_path / "flat.json"
    flat.write_text(json.dumps({"experiment": "ode", "n_grid": 50}))
    assert ExperimentConfig.from_json(flat).params == {"n_grid": 50}
    assert c.digest() == ExperimentConfig("ode", 4, None, {"n_grid": 50}).digest()


def test_unknown_experiment():
    with pytest.raises(ValueError, match="unknown experiment"):
        run(ExperimentConfig("nope"))
    assert set(EXPERIMENTS) == {"zero-mean", "ode", "harmonic", "gfunction", "invariance-gallery"}


def test_gallery_grids_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_invariance_gallery(ExperimentConfig("invariance-gallery", 3, str(a), {"n_plot": 11}))
    run_invariance_gallery(ExperimentConfig("invariance-gallery", 3, str(b), {"n_plot": 11}))
    files = sorted(p.name for p in a.glob("*.csv"))
    assert files
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()
