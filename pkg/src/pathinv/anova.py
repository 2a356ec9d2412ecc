"""Sobol' g-function, variance-based sensitivity indices and sparse ANOVA kernels."""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .invariance import gauss_legendre, make_centered_kernel
from .kernels import Box, Constant, Kernel, Product, Slice, SquaredExponential, Sum

IndexSet = tuple  # sorted tuple of 1-based coordinate indices


def index_set(indices: Iterable[int], d: int | None = None) -> IndexSet:
    I = tuple(sorted(int(i) for i in indices))
    if not I or len(set(I)) != len(I) or I[0] < 1 or (d is not None and I[-1] > d):
        raise ValueError(f"invalid index set {I!r}")
    return I


def all_subsets(d: int, max_order: int | None = None) -> list[IndexSet]:
    max_order = d if max_order is None else max_order
    return [I for r in range(1, max_order + 1) for I in itertools.combinations(range(1, d + 1), r)]


# ---------------------------------------------------------------------------
# g-function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GFunction:
    """``g(x) = prod_i (|4 x_i - 2| + a_i) / (1 + a_i)`` on the unit cube."""

    a: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in np.atleast_1d(self.a))
        if not a or any(v < 0 or not math.isfinite(v) for v in a):
            raise ValueError("g-function parameters must be finite and >= 0")
        object.__setattr__(self, "a", a)

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def betas(self) -> np.ndarray:
        return 1.0 / (3.0 * (1.0 + np.array(self.a)) ** 2)

    @property
    def variance(self) -> float:
        return float(np.prod(1.0 + self.betas) - 1.0)

    def __call__(self, X) -> np.ndarray:
        return g_eval(self, X)


def g_eval(g: GFunction, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != g.d:
        raise ValueError(f"expected points of dimension {g.d}")
    a = np.array(g.a)
    return np.prod((np.abs(4.0 * X - 2.0) + a) / (1.0 + a), axis=1)


# ---------------------------------------------------------------------------
# Sobol tables
# ---------------------------------------------------------------------------


@dataclass
class SobolTable:
    """Map from index sets to ``S_I``; ``complete`` when every nonempty subset is present."""

    d: int
    indices: dict = field(default_factory=dict)
    total_variance: float = float("nan")
    degenerate: bool = False

    @property
    def complete(self) -> bool:
        return len(self.indices) == 2 ** self.d - 1

    def __getitem__(self, I) -> float:
        return self.indices[index_set(I)]

    def __len__(self):
        return len(self.indices)

    def total(self) -> float:
        return float(sum(self.indices.values()))

    def main_effects(self) -> np.ndarray:
        return np.array([self.indices.get((i,), 0.0) for i in range(1, self.d + 1)])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["subset", "S_I"])
            for I in sorted(self.indices, key=lambda t: (len(t), t)):
                w.writerow([",".join(map(str, I)), repr(float(self.indices[I]))])

    @classmethod
    def from_csv(cls, path, d: int) -> "SobolTable":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        return cls(d, {index_set(map(int, s.split(","))): float(v) for s, v in rows})


def g_sobol_closed_form(g: GFunction, max_order: int | None = None) -> SobolTable:
    """``S_I = prod_{i in I} beta_i / (prod_i (1 + beta_i) - 1)``, ``beta_i = (1 + a_i)^-2 / 3``."""
    max_order = g.d if max_order is None else max_order
    if not 1 <= max_order <= g.d:
        raise ValueError("max_order must lie in [1, d]")
    b = g.betas
    D = g.variance
    table = {I: float(np.prod(b[np.array(I) - 1]) / D) for I in all_subsets(g.d, max_order)}
    return SobolTable(g.d, table, D)


def significant_subsets(table: SobolTable, threshold: float) -> list[IndexSet]:
    """Index sets with ``S_I >= threshold``, ordered by size then lexicographically."""
    if not 0 < threshold <= 1:
        raise ValueError("threshold must lie in (0, 1]")
    return sorted((I for I, s in table.indices.items() if s >= threshold), key=lambda t: (len(t), t))


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def _composite_gl(n_panels: int, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(n_nodes)
    edges = np.linspace(0.0, 1.0, n_panels + 1)
    nodes = np.concatenate([0.5 * (b - a) * t + 0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
    weights = np.concatenate([0.5 * (b - a) * w for a, b in zip(edges[:-1], edges[1:])])
    return nodes, weights


def hdmr_quadrature(f: Callable, d: int, n_panels: int = 2, n_nodes: int = 8) -> SobolTable:
    """Full HDMR on a tensor composite Gauss-Legendre grid over ``[0, 1]^d``.

    The conditional expectations ``E[f | x_J]`` are weighted partial sums of
    the tensor of values; the components follow by Moebius inversion
    ``f_I = sum_{J subset I} (-1)^{|I| - |J|} E[f | x_J]``.  Exact up to
    quadrature error (exact for products of piecewise-polynomial factors
    with kinks on panel edges).
    """
    t, w = _composite_gl(n_panels, n_nodes)
    m = t.size
    grids = np.meshgrid(*([t] * d), indexing="ij")
    F = np.asarray(f(np.column_stack([g.ravel() for g in grids])), dtype=float).reshape((m,) * d)
    W = [w] * d

    def cond(J):
        # E[f | x_J] as an array over the axes in J
        G = F
        for ax in reversed(range(d)):
            if ax + 1 not in J:
                G = np.tensordot(G, W[ax], axes=([ax], [0]))
        return G

    mean = float(cond(()))
    cache = {(): np.array(mean)}
    comps = {}
    for I in all_subsets(d):
        cache[I] = cond(I)
        comp = np.zeros((m,) * len(I))
        for r in range(len(I) + 1):
            for J in itertools.combinations(I, r):
                E = cache[J]
                shape = [m if i in J else 1 for i in I]
                comp = comp + (-1) ** (len(I) - r) * E.reshape(shape)
        comps[I] = comp
    var_I = {}
    for I, comp in comps.items():
        wt = np.ones((1,) * 0)
        for _ in I:
            wt = np.multiply.outer(wt, w)
        var_I[I] = float(np.sum(wt * comp ** 2))
    total = sum(var_I.values())
    if total <= 1e-28 * max(1.0, mean * mean):  # round-off level: f is constant
        return SobolTable(d, {I: 0.0 for I in var_I}, 0.0, degenerate=True)
    return SobolTable(d, {I: v / total for I, v in var_I.items()}, total)


@dataclass(frozen=True)
class SobolEstimate:
    index: IndexSet
    value: float
    stderr: float
    total_variance: float
    method: str
    degenerate: bool = False
    warning: str | None = None


def monte_carlo_sobol(f: Callable, I, d: int, n_mc: int = 100_000, seed=0, method: str = "auto",
                      target_stderr: float | None = None) -> SobolEstimate:
    """Estimate ``S_I = Var[f_I] / Var[f]`` for ``f`` on the uniform unit cube.

    ``method="quadrature"`` (default for ``d <= 4``) runs :func:`hdmr_quadrature`.
    ``method="pick-freeze"`` combines closed-index estimators
    ``V_J = E[f(A) (f(C_J) - f(B))]`` (``C_J`` takes columns ``J`` from ``A``,
    the rest from ``B``) by Moebius inversion over ``J subset I``; the
    standard error is that of the per-sample combination.  Zero total
    variance returns 0 with ``degenerate=True``.
    """
    I = index_set(I, d)
    if method == "auto":
        method = "quadrature" if d <= 4 else "pick-freeze"
    if method == "quadrature":
        table = hdmr_quadrature(f, d)
        return SobolEstimate(I, table.indices[I] if not table.degenerate else 0.0, 0.0,
                             table.total_variance, method, table.degenerate)
    if method != "pick-freeze":
        raise ValueError(f"unknown method {method!r}")
    rng = np.random.default_rng(seed)
    A = rng.random((n_mc, d))
    B = rng.random((n_mc, d))
    fA = np.asarray(f(A), dtype=float)
    fB = np.asarray(f(B), dtype=float)
    var = float(np.var(np.concatenate([fA, fB]), ddof=1))
    if var <= 1e-28 * max(1.0, float(np.mean(fA)) ** 2):
        return SobolEstimate(I, 0.0, 0.0, 0.0, method, True)
    comb = np.zeros(n_mc)
    for r in range(len(I) + 1):
        for J in itertools.combinations(I, r):
            if r == 0:
                continue  # V_emptyset = 0
            C = B.copy()
            cols = np.array(J) - 1
            C[:, cols] = A[:, cols]
            comb += (-1) ** (len(I) - r) * fA * (np.asarray(f(C), dtype=float) - fB)
    value = float(comb.mean() / var)
    stderr = float(comb.std(ddof=1) / math.sqrt(n_mc) / var)
    warning = None
    if target_stderr is not None and stderr > target_stderr:
        warning = f"n_mc={n_mc} gives stderr {stderr:.2e} > requested {target_stderr:.2e}"
    return SobolEstimate(I, value, stderr, var, method, False, warning)


# ---------------------------------------------------------------------------
# kernels for the sparse-ANOVA experiment
# ---------------------------------------------------------------------------


def build_centered_1d_kernel(sigma2: float, theta: float, interval=(0.0, 1.0), n_nodes: int = 50,
                             name: str | None = None) -> Kernel:
    """Squared-exponential kernel centred against the uniform probability measure on ``interval``."""
    box = Box((interval[0],), (interval[1],))
    se = SquaredExponential(sigma2, theta, domain=box)
    k0 = make_centered_kernel(se, gauss_legendre(box, n_nodes, probability=True))
    k0.name = name
    se.name = name
    return k0


REFERENCE_PARAMETER_COUNTS = {"k_add": 21, "k_spa": 19, "k_anova": 21, "k_gauss": 11}


def expected_parameter_counts(d: int, subsets: Iterable[IndexSet]) -> dict:
    """Counts implied by the parameterisation: one variance and one lengthscale per active 1-D block."""
    active = {i for I in subsets for i in I}
    return {"k_add": 1 + 2 * d, "k_spa": 1 + 2 * len(active), "k_anova": 1 + 2 * d, "k_gauss": 1 + d}


@dataclass
class ExperimentKernelParams:
    sigma2_0: float = 1.0      # bias amplitude in k_add / k_spa
    sigma2: float = 1.0        # overall amplitude in k_anova / k_gauss
    sigma2_i: float = 1.0
    theta_i: float = 0.5
    n_nodes: int = 50


def build_experiment_kernels(d: int, subsets: Iterable[IndexSet], params: ExperimentKernelParams | None = None,
                             expected_counts: dict | None = None) -> dict[str, Kernel]:
    """The four kernels compared on the g-function.

    ``k_add = s0 + sum_i k0_i``; ``k_spa = s0 + sum_{I in S} prod_{i in I} k0_i``;
    ``k_anova = s * prod_i (1 + k0_i)``; ``k_gauss = s * prod_i exp(-(x_i - y_i)^2 / theta_i^2)``.
    Each ``k0_i`` is one shared object inside a kernel, so its variance and
    lengthscale are counted once.  Hyperparameter counts are checked against
    ``expected_counts`` (default: one variance and lengthscale per active
    coordinate plus the amplitude).
    """
    params = params or ExperimentKernelParams()
    subsets = [index_set(I, d) for I in subsets]
    expected = expected_counts or expected_parameter_counts(d, subsets)

    def k0(i):
        base = build_centered_1d_kernel(params.sigma2_i, params.theta_i, (0.0, 1.0), params.n_nodes, name=f"k0_{i}")
        return Slice(base, [i - 1], d, name=f"x{i}")

    def bias(value, name):
        return Constant(value, d, name=name)

    comps = {i: k0(i) for i in range(1, d + 1)}
    k_add = Sum([bias(params.sigma2_0, "sigma2_0")] + [comps[i] for i in range(1, d + 1)], name="k_add")

    spa_comps = {i: k0(i) for i in sorted({i for I in subsets for i in I})}
    terms = [spa_comps[I[0]] if len(I) == 1 else Product([spa_comps[i] for i in I]) for I in subsets]
    k_spa = Sum([bias(params.sigma2_0, "sigma2_0")] + terms, name="k_spa")

    one = Constant(1.0, d, fixed=("value",))
    anova_comps = [k0(i) for i in range(1, d + 1)]
    k_anova = Product([bias(params.sigma2, "sigma2")] + [Sum([one, c]) for c in anova_comps], name="k_anova")

    se = SquaredExponential(params.sigma2, np.full(d, params.theta_i), domain=Box.cube(0.0, 1.0, d), name="gauss")
    k_gauss = se

    kernels = {"k_add": k_add, "k_spa": k_spa, "k_anova": k_anova, "k_gauss": k_gauss}
    for key, k in kernels.items():
        n = len(k.hyperparameters())
        if n != expected[key]:
            raise ValueError(f"{key} has {n} parameters, expected {expected[key]}")
    return kernels
