"""Command-line entry points: ``bench``, ``check-invariance`` and ``sample``.

All three exit with status 0 when every check they run passes and 1 otherwise;
malformed input exits with status 2.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .bench import EXPERIMENTS, ExperimentConfig, run, write_csv
from .gp import GPPrior, sample_paths
from .invariance import CompositionCombination, check_argumentwise_invariance
from .kernels import kernel_from_dict


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _read_grid(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    try:
        float(rows[0][0])
        header = [f"x{i + 1}" for i in range(len(rows[0]))]
    except ValueError:
        header, rows = rows[0], rows[1:]
    return header, np.array(rows, dtype=float)


def bench_main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="bench", description="Run one experiment and write CSV/JSON outputs.")
    p.add_argument("experiment", choices=sorted(EXPERIMENTS))
    p.add_argument("--config", help="JSON file of experiment parameters")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    a = p.parse_args(argv)

    params = {}
    seed = 0
    if a.config:
        doc = _load_json(a.config)
        seed = doc.pop("seed", 0)
        doc.pop("experiment", None)
        doc.pop("out", None)
        params = doc.pop("params", doc)
    if a.seed is not None:
        seed = a.seed
    result = run(ExperimentConfig(a.experiment, seed, a.out, params))
    for name, ok in result.checks.items():
        print(f"{'PASS' if ok else 'FAIL'}  {a.experiment}:{name}")
    return 0 if result.passed else 1


def check_invariance_main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="check-invariance",
                                description="Check that a kernel is argumentwise invariant under an operator.")
    p.add_argument("--kernel", required=True, help="kernel JSON (Kernel.to_dict format)")
    p.add_argument("--operator", required=True, help="operator JSON (CompositionCombination.to_dict format)")
    p.add_argument("--n-probe", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    try:
        kernel = kernel_from_dict(_load_json(a.kernel))
        T = CompositionCombination.from_dict(_load_json(a.operator))
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = check_argumentwise_invariance(T, kernel, a.n_probe, a.tol, a.seed)
    print(json.dumps({"passed": rep.passed, "max_violation": rep.max_violation,
                      "max_relative": rep.max_relative, "n_probe": rep.n_probe, "tol": rep.tol}))
    return 0 if rep.passed else 1


def sample_main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="sample", description="Draw prior sample paths of a kernel on a grid.")
    p.add_argument("--kernel", required=True, help="kernel JSON")
    p.add_argument("--grid", required=True, help="CSV of grid points, one row per point")
    p.add_argument("--n", type=int, required=True, help="number of paths")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("cholesky", "spectral"), default="cholesky")
    p.add_argument("--out", help="output CSV (default: stdout)")
    a = p.parse_args(argv)
    try:
        kernel = kernel_from_dict(_load_json(a.kernel))
        header, X = _read_grid(a.grid)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    paths = sample_paths(GPPrior(kernel), X, a.n, a.seed, method=a.method)
    cols = header + [f"path{j}" for j in range(a.n)]
    table = np.column_stack([X, paths.T]).tolist()
    if a.out:
        write_csv(a.out, cols, table)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(cols)
        w.writerows([[repr(float(v)) for v in row] for row in table])
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    commands = {"bench": bench_main, "check-invariance": check_invariance_main, "sample": sample_main}
    if not argv or argv[0] not in commands:
        print(f"usage: python -m pathinv {{{','.join(commands)}}} ...", file=sys.stderr)
        return 2
    return commands[argv[0]](argv[1:])
