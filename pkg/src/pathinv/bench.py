"""Experiment runners for the regression studies and the invariance gallery.

Each ``run_*`` function takes an :class:`ExperimentConfig`, returns an
:class:`ExperimentResult` and, when ``config.out`` is set, writes CSV tables,
CSV grids and a ``manifest.json`` into that directory.  CSV numbers are
written with ``repr`` so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import scipy

from . import __version__
from .anova import (
    ExperimentKernelParams, GFunction, build_experiment_kernels, expected_parameter_counts, g_sobol_closed_form,
    significant_subsets,
)
from .gp import (
    Dataset, GPPrior, MLConfig, fit_ml, log_marginal_likelihood, path_invariance_test, posterior,
    sample_paths,
)
from .invariance import (
    Box, LinearDifferentialCheck, additivity_operator, centering_operator, check_argumentwise_invariance,
    fd_operator_residual, gauss_legendre, make_additive_kernel, make_centered_kernel, make_harmonic_kernel,
    make_ode_span_kernel, mean_value_operator, negation_group, ode_shift_operator, quarter_turn_group, rotation,
    symmetrize_kernel,
)
from .invariance import CompositionCombination
from .kernels import SquaredExponential, make_polar_kernels

# ---------------------------------------------------------------------------
# configuration and reporting
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    out: str | None = None
    params: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, path, **overrides) -> "ExperimentConfig":
        with open(path) as fh:
            spec = json.load(fh)
        spec.update({k: v for k, v in overrides.items() if v is not None})
        return cls(spec.pop("experiment"), spec.pop("seed", 0), spec.pop("out", None), spec.pop("params", spec))

    def get(self, key, default):
        return self.params.get(key, default)

    def digest(self) -> str:
        payload = json.dumps({"experiment": self.experiment, "seed": self.seed, "params": self.params},
                             sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class ExperimentResult:
    name: str
    rows: list
    checks: dict
    grids: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _finish(config: ExperimentConfig, result: ExperimentResult, t0: float) -> ExperimentResult:
    result.runtime = time.perf_counter() - t0
    if config.out is None:
        return result
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    if result.rows:
        header = list(result.rows[0])
        write_csv(out / f"{result.name}_metrics.csv", header, [[r[h] for h in header] for r in result.rows])
    for gname, (header, arr) in result.grids.items():
        write_csv(out / f"{result.name}_{gname}.csv", header, np.asarray(arr).tolist())
    manifest = {
        "experiment": config.experiment,
        "seed": config.seed,
        "params": config.params,
        "config_sha256": config.digest(),
        "checks": {k: bool(v) for k, v in result.checks.items()},
        "passed": result.passed,
        "runtime_seconds": result.runtime,
        "versions": {"pathinv": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
    }
    with open(out / f"{result.name}_manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
    return result


def rise(m: np.ndarray, f: np.ndarray, t: np.ndarray) -> float:
    """Root integrated squared error by the trapezoidal rule."""
    return float(math.sqrt(np.trapezoid((m - f) ** 2, t)))


def q2_score(pred, y) -> float:
    y = np.asarray(y)
    return float(1.0 - np.sum((pred - y) ** 2) / np.sum((y - y.mean()) ** 2))


# ---------------------------------------------------------------------------
# zero-mean functions
# ---------------------------------------------------------------------------


def zero_mean_target(t):
    t = np.asarray(t, dtype=float).ravel()
    return np.cos(t) + np.cos(2 * t) + np.cos(3 * t) + np.sin(t / 2)


def run_zero_mean(config: ExperimentConfig) -> ExperimentResult:
    t0 = time.perf_counter()
    n_obs = config.get("n_obs", 12)
    n_nodes = config.get("n_nodes", 401)
    n_grid = config.get("n_grid", 1001)
    lengthscale = config.get("lengthscale", 0.5)
    box = Box((-math.pi,), (math.pi,))
    X = np.asarray(config.get("design", np.linspace(-math.pi, math.pi, n_obs + 2)[1:-1]), dtype=float)
    data = Dataset(X[:, None], zero_mean_target(X))

    k = SquaredExponential(1.0, lengthscale, domain=box)
    nu = gauss_legendre(box, n_nodes, probability=False)
    k_inv = make_centered_kernel(k, nu, allow_unnormalized=True)

    t = np.linspace(-math.pi, math.pi, n_grid)
    f = zero_mean_target(t)
    check_rule = gauss_legendre(box, 1000, probability=False)
    int_f = check_rule.integrate(zero_mean_target(check_rule.nodes))

    rows, cols = [], [t, f]
    integrals = {}
    for label, kern in (("k", k), ("k_inv", k_inv)):
        post = posterior(GPPrior(kern), data)
        m = post.mean(t)
        sd = np.sqrt(np.clip(post.var(t), 0.0, None))
        integrals[label] = check_rule.integrate(post.mean(check_rule.nodes))
        rows.append({"kernel": label, "rise": rise(m, f, t), "integral_mean": integrals[label]})
        cols += [m, sd]
    ratio = rows[0]["rise"] / rows[1]["rise"]
    checks = {
        "integral_f_zero": abs(int_f) <= 1e-10,
        "rise_ratio_ge_5": ratio >= 5.0,
        "integral_m_inv_zero": abs(integrals["k_inv"]) <= 1e-8,
    }
    grids = {"grid": (["t", "f", "mean_k", "sd_k", "mean_k_inv", "sd_k_inv"], np.column_stack(cols))}
    res = ExperimentResult("zero_mean", rows, checks, grids, {"rise_ratio": ratio, "integral_f": int_f})
    return _finish(config, res, t0)


# ---------------------------------------------------------------------------
# ODE y'' + y = 2t
# ---------------------------------------------------------------------------


def run_ode(config: ExperimentConfig) -> ExperimentResult:
    t0 = time.perf_counter()
    lo, hi = config.get("interval", [0.0, 2 * math.pi])
    n_grid = config.get("n_grid", 200)
    designs = config.get("designs", [[], [1.0], [1.0, 4.0]])
    truth = lambda t: 2 * np.asarray(t, dtype=float).ravel() + np.cos(np.asarray(t, dtype=float).ravel())  # noqa: E731
    mean = lambda X: 2.0 * X[:, 0]  # noqa: E731
    prior = GPPrior(make_ode_span_kernel(np.eye(2), Box((lo,), (hi,))), mean)
    t = np.linspace(lo, hi, n_grid)

    rows, cols = [], [t, truth(t)]
    for design in designs:
        if design:
            post = posterior(prior, Dataset(np.array(design)[:, None], truth(design)))
            m, v = post.mean(t), post.var(t)
        else:
            m, v = prior.mean_values(t), prior.kernel.diag(t)
        sd = np.sqrt(np.clip(v, 0.0, None))
        rows.append({"n_obs": len(design), "max_sd": float(sd.max()),
                     "max_abs_error": float(np.max(np.abs(m - truth(t))))})
        cols += [m, sd]
    one = [r["max_sd"] for r in rows if r["n_obs"] == 1]
    many = [r["max_sd"] for r in rows if r["n_obs"] >= 2]
    checks = {
        "prior_mean_is_2t": np.array_equal(prior.mean_values(t), 2 * t),
        "one_obs_uncertain": bool(one) and min(one) > 1e-3,
        "two_obs_collapse": bool(many) and max(many) <= 1e-5,
    }
    header = ["t", "truth"] + [f"{s}_{len(d)}obs" for d in designs for s in ("mean", "sd")]
    res = ExperimentResult("ode", rows, checks, {"grid": (header, np.column_stack(cols))})
    return _finish(config, res, t0)


# ---------------------------------------------------------------------------
# harmonic function
# ---------------------------------------------------------------------------


def harmonic_target(X):
    X = np.atleast_2d(X)
    return np.cos(1 - X[:, 0]) * np.exp(X[:, 1])


def run_harmonic(config: ExperimentConfig) -> ExperimentResult:
    t0 = time.perf_counter()
    theta = config.get("theta", 1.0)
    n_grid = config.get("n_grid", 101)
    design = np.asarray(config.get("design", [[-0.5, -0.5], [-0.5, 0.5], [0.5, -0.5], [0.5, 0.5]]), dtype=float)
    lo, hi = config.get("square", [-1.0, 1.0])
    prior = GPPrior(make_harmonic_kernel(theta))
    post = posterior(prior, Dataset(design, harmonic_target(design)))

    s = np.linspace(lo, hi, n_grid)
    G1, G2 = np.meshgrid(s, s, indexing="ij")
    P = np.column_stack([G1.ravel(), G2.ravel()])
    m = post.mean(P)
    f = harmonic_target(P)
    err = np.abs(m - f)
    on_boundary = np.isclose(P, lo).any(axis=1) | np.isclose(P, hi).any(axis=1)
    interior_max, boundary_max = float(err[~on_boundary].max()), float(err[on_boundary].max())

    check = LinearDifferentialCheck("laplacian", h=config.get("fd_step", 1e-3))
    inner = P[np.all(np.abs(P) <= hi - 2 * check.h, axis=1) & ~on_boundary]
    inner = inner[:: max(1, inner.shape[0] // config.get("n_fd_points", 400))]
    box = Box.cube(lo, hi, 2)
    res_f = np.abs(fd_operator_residual(check, harmonic_target, inner, box))
    res_m = np.abs(fd_operator_residual(check, post.mean, inner, box))
    rows = [{"interior_max_error": interior_max, "boundary_max_error": boundary_max,
             "max_laplacian_f": float(res_f.max()), "max_laplacian_m": float(res_m.max())}]
    checks = {
        "max_error_on_boundary": interior_max <= boundary_max + 1e-8,
        "f_harmonic": bool(res_f.max() <= 1e-5),
        "m_harmonic": bool(res_m.max() <= 1e-4),
    }
    sd = np.sqrt(np.clip(post.var(P), 0.0, None))
    grids = {"grid": (["x1", "x2", "truth", "mean", "sd", "abs_error"], np.column_stack([P, f, m, sd, err]))}
    return _finish(config, ExperimentResult("harmonic", rows, checks, grids), t0)


# ---------------------------------------------------------------------------
# sparse ANOVA kernels on the g-function
# ---------------------------------------------------------------------------

G_FUNCTION_A = (0, 0, 0, 2, 2, 2, 4, 4, 4, 8)
REFERENCE_Q2 = {"k_add": 0.49, "k_spa": 0.71, "k_anova": 0.62, "k_gauss": 0.28}
DEFAULT_THRESHOLD = 5e-3


def gfunction_design(n: int, d: int, rng: np.random.Generator, kind: str = "uniform") -> np.ndarray:
    if kind == "uniform":
        return rng.random((n, d))
    if kind == "lhs":
        from scipy.stats import qmc

        return qmc.LatinHypercube(d=d, seed=rng).random(n)
    raise ValueError(f"unknown design {kind!r}")


def fit_gfunction_replicate(kernels: dict, g: GFunction, seed: int, cfg: dict) -> list[dict]:
    """One replication: draw train/test sets, fit every kernel, score on the test set."""
    rng = np.random.default_rng([seed, 2024])
    Xtr = gfunction_design(cfg["n_train"], g.d, rng, cfg["design"])
    Xte = rng.random((cfg["n_test"], g.d))
    train = Dataset(Xtr, g(Xtr))
    yte = g(Xte)
    rows = []
    for i, (name, k) in enumerate(kernels.items()):
        ml = MLConfig(restarts=cfg["restarts"], seed=seed * 100 + i, bounds=tuple(cfg["bounds"]),
                      param_bounds=cfg["param_bounds"], maxfev=cfg["maxfev"], fit_noise=True,
                      polish=cfg["polish"])
        t0 = time.perf_counter()
        try:
            fit = fit_ml(GPPrior(k, None, cfg["noise_init"]), train, ml)
            pred = posterior(fit.prior, train).mean(Xte)
            row = {"seed": seed, "kernel": name, "log_likelihood": fit.log_likelihood,
                   "rmse": float(np.sqrt(np.mean((pred - yte) ** 2))), "q2": q2_score(pred, yte),
                   "noise": float(fit.prior.noise), "status": "ok"}
        except (RuntimeError, np.linalg.LinAlgError, ValueError) as exc:
            row = {"seed": seed, "kernel": name, "log_likelihood": float("nan"), "rmse": float("nan"),
                   "q2": float("nan"), "noise": float("nan"), "status": f"failed: {exc}"}
        row["fit_seconds"] = time.perf_counter() - t0
        rows.append(row)
    return rows


def run_gfunction(config: ExperimentConfig) -> ExperimentResult:
    t0 = time.perf_counter()
    g = GFunction(tuple(config.get("a", G_FUNCTION_A)))
    threshold = config.get("threshold", DEFAULT_THRESHOLD)
    table = g_sobol_closed_form(g)
    subsets = significant_subsets(table, threshold)
    params = ExperimentKernelParams(**config.get("kernel_init", {}))
    kernels = build_experiment_kernels(g.d, subsets, params)
    cfg = {
        "n_train": config.get("n_train", 100),
        "n_test": config.get("n_test", 1000),
        "design": config.get("design", "uniform"),
        "restarts": config.get("restarts", 4),
        "maxfev": config.get("maxfev", None),
        "bounds": config.get("bounds", [1e-4, 1e2]),
        "param_bounds": config.get("param_bounds", {"*lengthscales*": [0.05, 20.0], "noise": [1e-8, 10.0]}),
        "noise_init": config.get("noise_init", 1e-2),
        "polish": config.get("polish", 1),
    }
    n_seeds = config.get("n_seeds", 10)
    rows = []
    for rep in range(n_seeds):
        rows += fit_gfunction_replicate(kernels, g, config.seed + rep, cfg)
    for r in rows:
        r.pop("fit_seconds")

    summary = {}
    for name in kernels:
        q = np.array([r["q2"] for r in rows if r["kernel"] == name and r["status"] == "ok"])
        summary[name] = {"q2_mean": float(q.mean()) if q.size else float("nan"),
                         "q2_sd": float(q.std(ddof=1)) if q.size > 1 else float("nan"), "n_ok": int(q.size)}
    mq = {k: v["q2_mean"] for k, v in summary.items()}
    main = [I for I in subsets if len(I) == 1]
    checks = {
        "main_effects_except_last": sorted(main) == [(i,) for i in range(1, g.d)] if g.a == G_FUNCTION_A else True,
        "parameter_counts": {k: len(v.hyperparameters()) for k, v in kernels.items()}
        == expected_parameter_counts(g.d, subsets),
        "q2_ordering": mq["k_spa"] > mq["k_anova"] > mq["k_add"] > mq["k_gauss"],
        "q2_within_0.15_of_reference": all(abs(mq[k] - REFERENCE_Q2[k]) <= 0.15 for k in REFERENCE_Q2),
    }
    extra = {"subsets": subsets, "summary": summary, "main_effect_share": float(table.main_effects().sum()),
             "table": table}
    result = ExperimentResult("gfunction", rows, checks, {}, extra)
    if config.out is not None:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        table.to_csv(out / "gfunction_sobol.csv")
        write_csv(out / "gfunction_subsets.csv", ["subset", "S_I"],
                  [[",".join(map(str, I)), table.indices[I]] for I in subsets])
        write_csv(out / "gfunction_summary.csv", ["kernel", "q2_mean", "q2_sd", "n_ok", "reference_q2"],
                  [[k, v["q2_mean"], v["q2_sd"], v["n_ok"], REFERENCE_Q2[k]] for k, v in summary.items()])
        with open(out / "gfunction_kernels.json", "w") as fh:
            json.dump({k: v.to_dict() for k, v in kernels.items()}, fh, indent=1, sort_keys=True)
    return _finish(config, result, t0)


# ---------------------------------------------------------------------------
# invariance gallery
# ---------------------------------------------------------------------------


@dataclass
class GalleryCase:
    kernel_name: str
    kernel: object
    operator_name: str
    operator: CompositionCombination
    expected: bool
    probe_box: Box
    kernel_tol: float = 1e-10
    path_tol: float = 1e-8
    path_relative: bool = False


def gallery_cases(seed: int = 0, fd_step: float = 1e-3, fd_path_step: float = 0.05) -> list[GalleryCase]:
    """Invariant (kernel, operator) pairs with a squared-exponential control for each operator."""
    sq = Box.cube(-1.0, 1.0, 2)
    unit = Box((0.0,), (1.0,))
    circle_box = Box.cube(-0.7, 0.7, 2)
    k1, k2 = make_polar_kernels()
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0, 2 * math.pi, 5)
    rot_avg = CompositionCombination([rotation(a) for a in angles], np.full(5, 0.2), label="sampled-rotations")
    nu = gauss_legendre(unit, 30)
    k0 = make_centered_kernel(SquaredExponential(1.0, 0.3, domain=unit), nu)
    add_k = make_additive_kernel([[SquaredExponential(1.0, 0.5), None], [None, SquaredExponential(1.0, 0.5)]],
                                 domain=sq)
    ode_box = Box((0.0,), (2 * math.pi,))
    k_ode = make_ode_span_kernel(np.eye(2), ode_box)
    k_harm = make_harmonic_kernel(1.0)
    sym = symmetrize_kernel(SquaredExponential(1.0, 0.5, domain=Box((-1.0,), (1.0,))), negation_group(1))

    se2 = SquaredExponential(1.0, 0.5, dim=2, domain=sq)
    se1u = SquaredExponential(1.0, 0.3, domain=unit)
    se_ode = SquaredExponential(1.0, 1.0, domain=ode_box)
    se1 = SquaredExponential(1.0, 0.5, domain=Box((-1.0,), (1.0,)))

    ode_fd = LinearDifferentialCheck("ode", fd_step, 1)
    lap_fd = LinearDifferentialCheck("laplacian", fd_step, 2)
    ode_fd_path = LinearDifferentialCheck("ode", fd_path_step, 1)
    lap_fd_path = LinearDifferentialCheck("laplacian", fd_path_step, 2)

    ops = [
        ("k1", k1, "quarter-turn average", quarter_turn_group().average(), sq, {}),
        ("k2", k2, "sampled rotations", rot_avg, sq, {}),
        ("k0", k0, "centering", centering_operator(nu), unit, {}),
        ("additive", add_k, "additivity", additivity_operator(sq.center), sq, {}),
        ("k_ode", k_ode, "ode shift (exact)", ode_shift_operator(0.3), ode_box.shrink(0.3), {}),
        ("k_harm", k_harm, "circle mean (exact)", mean_value_operator(0.25), sq.shrink(0.25), {}),
        ("symmetrized_se", sym, "negation average", negation_group(1).average(), Box((-1.0,), (1.0,)), {}),
        ("k_ode", k_ode, "fd y''+y", ode_fd.as_combination(), ode_box.shrink(2 * fd_path_step),
         {"kernel_tol": 1e-6, "path_tol": 1e-2, "path_relative": True, "path_op": ode_fd_path.as_combination()}),
        ("k_harm", k_harm, "fd laplacian", lap_fd.as_combination(), sq.shrink(2 * fd_path_step),
         {"kernel_tol": 1e-6, "path_tol": 1e-2, "path_relative": True, "path_op": lap_fd_path.as_combination()}),
    ]
    controls = {"k1": se2, "k2": se2, "k0": se1u, "additive": se2, "k_ode": se_ode, "k_harm": se2,
                "symmetrized_se": se1}
    cases = []
    for kname, kern, oname, op, box, opts in ops:
        for label, kk, expected in ((kname, kern, True), (f"se_control[{kname}]", controls[kname], False)):
            c = GalleryCase(label, kk, oname, op, expected, box,
                            opts.get("kernel_tol", 1e-10), opts.get("path_tol", 1e-8), opts.get("path_relative", False))
            c.path_operator = opts.get("path_op", op)
            cases.append(c)
    return cases


def run_gallery_case(case: GalleryCase, n_probe: int = 200, n_grid: int = 40, n_paths: int = 10, seed: int = 0):
    kr = check_argumentwise_invariance(case.operator, case.kernel, n_probe, case.kernel_tol, seed, case.probe_box)
    grid = case.probe_box.sample(n_grid, np.random.default_rng(seed + 1))
    pr = path_invariance_test(case.kernel, case.path_operator, grid, n_paths, case.path_tol, seed + 2)
    path_pass = pr.max_violation <= case.path_tol * (max(1.0, pr.path_scale) if case.path_relative else 1.0)
    return {
        "kernel": case.kernel_name, "operator": case.operator_name, "expected": case.expected,
        "kernel_violation": kr.max_violation, "kernel_pass": kr.passed,
        "path_violation": pr.max_violation, "path_pass": bool(path_pass),
        "agree": kr.passed == bool(path_pass), "as_expected": kr.passed == case.expected == bool(path_pass),
    }


def run_invariance_gallery(config: ExperimentConfig) -> ExperimentResult:
    t0 = time.perf_counter()
    seed = config.seed
    cases = gallery_cases(seed, config.get("fd_step", 1e-3), config.get("fd_path_step", 0.05))
    rows = [run_gallery_case(c, config.get("n_probe", 200), config.get("n_grid", 40), config.get("n_paths", 10), seed)
            for c in cases]

    # k2 paths restricted to a circle are constant
    k1, k2 = make_polar_kernels()
    ang = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    circ = 0.6 * np.column_stack([np.cos(ang), np.sin(ang)])
    cpaths = sample_paths(GPPrior(k2), circ, 10, seed, method="spectral")
    circle_spread = float(np.max(cpaths.max(axis=1) - cpaths.min(axis=1)))

    checks = {
        "all_pairs_as_expected": all(r["as_expected"] for r in rows),
        "kernel_and_path_agree": all(r["agree"] for r in rows),
        "k2_constant_on_circles": circle_spread <= 1e-8,
    }

    n_plot = config.get("n_plot", 41)
    s = np.linspace(-1.0, 1.0, n_plot)
    G1, G2 = np.meshgrid(s, s, indexing="ij")
    P2 = np.column_stack([G1.ravel(), G2.ravel()])
    t_unit = np.linspace(0.0, 1.0, 201)[:, None]
    t_ode = np.linspace(0.0, 2 * math.pi, 201)[:, None]
    unit = Box((0.0,), (1.0,))
    k0 = make_centered_kernel(SquaredExponential(1.0, 0.3, domain=unit), gauss_legendre(unit, 30))
    add_k = make_additive_kernel([[SquaredExponential(1.0, 0.5), None], [None, SquaredExponential(1.0, 0.5)]])
    plots = {
        "path_k1": (k1, P2), "path_k2": (k2, P2), "path_additive": (add_k, P2),
        "path_k_harm": (make_harmonic_kernel(1.0), P2),
        "path_k0": (k0, t_unit), "path_k_ode": (make_ode_span_kernel(), t_ode),
    }
    grids = {}
    for i, (gname, (kern, P)) in enumerate(plots.items()):
        path = sample_paths(GPPrior(kern), P, 1, seed + 10 + i, method="spectral")[0]
        header = [f"x{j + 1}" for j in range(P.shape[1])] + ["value"]
        grids[gname] = (header, np.column_stack([P, path]))
    res = ExperimentResult("gallery", rows, checks, grids, {"circle_spread": circle_spread})
    return _finish(config, res, t0)


EXPERIMENTS: dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    "zero-mean": run_zero_mean,
    "ode": run_ode,
    "harmonic": run_harmonic,
    "gfunction": run_gfunction,
    "invariance-gallery": run_invariance_gallery,
}


def run(config: ExperimentConfig) -> ExperimentResult:
    try:
        fn = EXPERIMENTS[config.experiment]
    except KeyError:
        raise ValueError(f"unknown experiment {config.experiment!r}; choose from {sorted(EXPERIMENTS)}") from None
    return fn(config)
