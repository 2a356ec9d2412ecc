"""Gaussian random fields: sampling, regression, likelihood and Mercer expansions.

Linear solves use a Cholesky factor of ``K + noise I + jitter I``.  Jitter
starts at ``1e-12 * mean(diag K)`` and grows tenfold up to
``1e-6 * mean(diag K)`` before giving up, since rank-deficient kernels
(``ODESpan``, additive kernels, centred kernels) are routine here.
"""
from __future__ import annotations

import csv
import fnmatch
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg, optimize
from scipy.stats import qmc

from .invariance import CompositionCombination, QuadratureMeasure
from .kernels import Kernel, as_points

JITTER_START = 1e-12
JITTER_MAX = 1e-6
SPECTRAL_RTOL = 1e-12


def cholesky_jitter(K: np.ndarray) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of ``K + jitter I`` with escalating jitter.

    A jitter-free factorization is tried first; well-conditioned systems
    (including exact interpolation with a rank-deficient kernel) are then
    solved exactly instead of being smoothed by the jitter.
    """
    K = 0.5 * (K + K.T)
    scale = float(np.mean(np.diag(K)))
    if not np.isfinite(scale) or scale <= 0:
        raise np.linalg.LinAlgError("matrix has nonpositive mean diagonal")
    n = K.shape[0]
    try:
        L = linalg.cholesky(K, lower=True)
        if np.all(np.diag(L) > math.sqrt(JITTER_START * scale)):
            return L, 0.0
    except linalg.LinAlgError:
        pass
    jitter = JITTER_START * scale
    while jitter <= JITTER_MAX * scale * (1 + 1e-9):
        try:
            return linalg.cholesky(K + jitter * np.eye(n), lower=True), jitter
        except linalg.LinAlgError:
            jitter *= 10.0
    raise np.linalg.LinAlgError(f"Cholesky failed with jitter up to {JITTER_MAX:g} * mean(diag)")


def spectral_factor(K: np.ndarray, rtol: float = SPECTRAL_RTOL) -> np.ndarray:
    """``A`` with ``A A^T = K`` restricted to eigenvalues above ``rtol * lambda_max``."""
    lam, V = np.linalg.eigh(0.5 * (K + K.T))
    top = lam[-1] if lam.size else 0.0
    if top <= 0:
        return np.zeros((K.shape[0], 0))
    keep = lam > rtol * top
    return V[:, keep] * np.sqrt(lam[keep])


# ---------------------------------------------------------------------------
# prior and data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GPPrior:
    kernel: Kernel
    mean: Callable | None = None
    noise: float = 0.0

    def __post_init__(self):
        if not self.noise >= 0:
            raise ValueError("noise variance must be >= 0")

    def mean_values(self, X) -> np.ndarray:
        X = as_points(X, self.kernel.dim)
        if self.mean is None:
            return np.zeros(X.shape[0])
        return np.asarray(self.mean(X), dtype=float).reshape(X.shape[0])


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.size:
            raise ValueError(f"{X.shape[0]} inputs but {y.size} outputs")
        if np.unique(X, axis=0).shape[0] < X.shape[0]:
            warnings.warn("dataset contains repeated input points", stacklevel=3)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.size

    def to_csv(self, path) -> None:
        d = self.X.shape[1]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{i + 1}" for i in range(d)] + ["y"])
            for x, y in zip(self.X, self.y):
                w.writerow([repr(float(v)) for v in x] + [repr(float(y))])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], np.array(rows[1:], dtype=float)
        if header[-1] != "y" or not all(h == f"x{i + 1}" for i, h in enumerate(header[:-1])):
            raise ValueError(f"expected header x1..xd,y, got {header}")
        return cls(body[:, :-1], body[:, -1])


# ---------------------------------------------------------------------------
# regression
# ---------------------------------------------------------------------------


class Posterior:
    """Conditional mean ``m`` and kernel ``c`` given a dataset.

    ``m(x) = mu(x) + k(x)^T (K + noise I)^-1 (y - mu(X))`` and
    ``c(x, x') = k(x, x') - k(x)^T (K + noise I)^-1 k(x')``.
    """

    def __init__(self, prior: GPPrior, data: Dataset):
        self.prior = prior
        self.data = data
        k = prior.kernel
        self._X = as_points(data.X, k.dim)
        if data.n == 0:
            self.L, self.jitter = np.zeros((0, 0)), 0.0
        else:
            self.L, self.jitter = cholesky_jitter(k(self._X) + prior.noise * np.eye(data.n))
        self.residual = data.y - prior.mean_values(self._X)
        self.alpha = linalg.cho_solve((self.L, True), self.residual)

    @property
    def kernel(self) -> Kernel:
        return self.prior.kernel

    def mean(self, X) -> np.ndarray:
        X = as_points(X, self.kernel.dim)
        if self.data.n == 0:
            return self.prior.mean_values(X)
        return self.prior.mean_values(X) + self.kernel(X, self._X) @ self.alpha

    def _whitened(self, X):
        if self.data.n == 0:
            return np.zeros((0, X.shape[0]))
        return linalg.solve_triangular(self.L, self.kernel(self._X, X), lower=True)

    def cov(self, X, Y=None) -> np.ndarray:
        X = as_points(X, self.kernel.dim)
        Y = X if Y is None else as_points(Y, self.kernel.dim)
        VX = self._whitened(X)
        VY = VX if Y is X else self._whitened(Y)
        return self.kernel(X, Y) - VX.T @ VY

    def var(self, X) -> np.ndarray:
        X = as_points(X, self.kernel.dim)
        V = self._whitened(X)
        return self.kernel.diag(X) - np.einsum("ij,ij->j", V, V)

    def as_kernel(self) -> Kernel:
        """The conditional covariance as a kernel object."""
        from .kernels import FunctionKernel

        return FunctionKernel(lambda A, B: self.cov(A, B), self.kernel.dim, domain=self.kernel.domain)

    def to_csv(self, X, path) -> None:
        """Write ``x..., mean, variance`` rows."""
        X = as_points(X, self.kernel.dim)
        m, v = self.mean(X), self.var(X)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{i + 1}" for i in range(X.shape[1])] + ["mean", "variance"])
            for x, mi, vi in zip(X, m, v):
                w.writerow([repr(float(t)) for t in x] + [repr(float(mi)), repr(float(vi))])


def posterior(prior: GPPrior, data: Dataset) -> Posterior:
    return Posterior(prior, data)


def log_marginal_likelihood(prior: GPPrior, data: Dataset) -> float:
    """``-r^T A^-1 r / 2 - log det A / 2 - n log(2 pi) / 2`` with ``A = K + noise I``."""
    X = as_points(data.X, prior.kernel.dim)
    A = prior.kernel(X) + prior.noise * np.eye(data.n)
    L, _ = cholesky_jitter(A)
    r = data.y - prior.mean_values(X)
    z = linalg.solve_triangular(L, r, lower=True)
    return float(-0.5 * z @ z - np.log(np.diag(L)).sum() - 0.5 * data.n * math.log(2 * math.pi))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _factor(K: np.ndarray, method: str) -> np.ndarray:
    if not np.any(K):
        return np.zeros((K.shape[0], 0))
    if method == "cholesky":
        return cholesky_jitter(K)[0]
    if method == "spectral":
        return spectral_factor(K)
    raise ValueError(f"unknown sampling method {method!r}")


def _draw(mean: np.ndarray, K: np.ndarray, n_paths: int, seed, method: str) -> np.ndarray:
    A = _factor(K, method)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n_paths, A.shape[1]))
    return mean[None, :] + Z @ A.T


def sample_paths(prior: GPPrior, grid, n_paths: int = 1, seed=0, method: str = "cholesky") -> np.ndarray:
    """Rows are draws of the field on ``grid``.

    ``method="cholesky"`` factors ``K + jitter I``; ``method="spectral"``
    keeps only eigenvalues above ``1e-12 * lambda_max``, which is the
    faithful choice for low-rank kernels when exact linear constraints on
    the paths matter.
    """
    X = as_points(grid, prior.kernel.dim)
    if X.shape[0] == 0:
        raise ValueError("empty grid")
    return _draw(prior.mean_values(X), prior.kernel(X), n_paths, seed, method)


def conditional_simulate(post: Posterior, grid, n_paths: int = 1, seed=0, method: str = "cholesky") -> np.ndarray:
    """Draws from the conditional field ``m + GRF(0, c)`` on ``grid``."""
    X = as_points(grid, post.kernel.dim)
    if X.shape[0] == 0:
        raise ValueError("empty grid")
    return _draw(post.mean(X), post.cov(X), n_paths, seed, method)


# ---------------------------------------------------------------------------
# Mercer / Karhunen-Loeve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MercerDecomposition:
    """Eigenpairs of the kernel integral operator discretised on ``nu``.

    ``eigenfunctions[:, n]`` holds ``phi_n`` at the quadrature nodes; the
    columns are orthonormal in ``L2(nu)``.
    """

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    nu: QuadratureMeasure

    @property
    def N(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        return (self.eigenfunctions * self.eigenvalues) @ self.eigenfunctions.T


def discrete_mercer(kernel: Kernel, nu: QuadratureMeasure, N: int | None = None) -> MercerDecomposition:
    """Nystrom discretisation: eigendecompose ``W^1/2 K W^1/2``."""
    n = nu.nodes.shape[0]
    N = n if N is None else int(N)
    if not 0 <= N <= n:
        raise ValueError(f"N must lie in [0, {n}]")
    if np.any(nu.weights <= 0):
        raise ValueError("discrete_mercer needs strictly positive weights")
    s = np.sqrt(nu.weights)
    K = kernel(nu.nodes)
    M = s[:, None] * K * s[None, :]
    lam, V = np.linalg.eigh(0.5 * (M + M.T))
    order = np.argsort(lam)[::-1][:N]
    lam = np.clip(lam[order], 0.0, None)
    phi = V[:, order] / s[:, None]
    return MercerDecomposition(lam, phi, nu)


def kl_sample(decomp: MercerDecomposition, seed=0, n_paths: int = 1) -> np.ndarray:
    """Truncated expansion ``sum_n sqrt(gamma_n) zeta_n phi_n`` at the nodes."""
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n_paths, decomp.N))
    return (Z * np.sqrt(decomp.eigenvalues)) @ decomp.eigenfunctions.T


# ---------------------------------------------------------------------------
# path invariance
# ---------------------------------------------------------------------------


def _keys(P: np.ndarray, decimals: int) -> list[tuple]:
    return [tuple(r) for r in np.round(P, decimals) + 0.0]


def orbit_closure(points, T: CompositionCombination, decimals: int = 10) -> np.ndarray:
    """``points`` together with every image ``v_i(x)``, duplicates removed (first occurrence kept)."""
    X = as_points(points, T.dim)
    allp = np.vstack([X] + T.images(X))
    seen: dict[tuple, int] = {}
    rows = []
    for key, p in zip(_keys(allp, decimals), allp):
        if key not in seen:
            seen[key] = len(rows)
            rows.append(p)
    return np.array(rows)


@dataclass(frozen=True)
class PathInvarianceReport:
    max_violation: float
    passed: bool
    tol: float
    n_paths: int
    n_points: int
    path_scale: float = field(default=float("nan"))


def path_invariance_test(kernel: Kernel, T: CompositionCombination, grid, n_paths: int = 20,
                         tol: float = 1e-8, seed=0, closure: bool = True,
                         decimals: int = 10) -> PathInvarianceReport:
    """Sample centred paths and measure ``sup |T(path)(x) - path(x)|`` over ``grid``.

    Paths are drawn jointly on the orbit closure of ``grid`` (the grid plus
    all symbol images) with the spectral sampler.  With ``closure=False``
    the grid itself must already contain every image.
    """
    X = as_points(grid, kernel.dim)
    if closure:
        P = orbit_closure(X, T, decimals)
    else:
        P = X
    index = {k: i for i, k in reversed(list(enumerate(_keys(P, decimals))))}
    try:
        img_idx = [np.array([index[k] for k in _keys(V, decimals)]) for V in T.images(X)]
        grid_idx = np.array([index[k] for k in _keys(X, decimals)])
    except KeyError:
        raise ValueError("operator orbit leaves the grid; build an orbit-closed grid with orbit_closure()") from None
    paths = _draw(np.zeros(P.shape[0]), kernel(P), n_paths, seed, "spectral")
    Tpath = sum(w * paths[:, idx] for w, idx in zip(T.weights, img_idx))
    viol = float(np.max(np.abs(Tpath - paths[:, grid_idx]))) if n_paths else 0.0
    scale = float(np.max(np.abs(paths))) if n_paths else 0.0
    return PathInvarianceReport(viol, viol <= tol, tol, n_paths, P.shape[0], scale)


# ---------------------------------------------------------------------------
# maximum likelihood
# ---------------------------------------------------------------------------


@dataclass
class MLConfig:
    """Settings for :func:`fit_ml`.

    ``param_bounds`` maps fnmatch patterns over hyperparameter names (see
    :meth:`Kernel.hyperparameters`; the noise variance is ``"noise"``) to
    ``(low, high)``; unmatched parameters use ``bounds``.  ``polish`` is the
    number of extra simplex relaunches allowed per restart.
    """

    restarts: int = 10
    seed: int = 0
    bounds: tuple = (1e-4, 1e4)
    param_bounds: dict = field(default_factory=dict)
    fit_noise: bool = True
    start_from_template: bool = True
    maxfev: int | None = None
    xatol: float = 1e-4
    fatol: float = 1e-6
    polish: int = 0


@dataclass(frozen=True)
class RestartInfo:
    index: int
    initial: np.ndarray
    initial_log_likelihood: float
    final: np.ndarray
    log_likelihood: float
    nfev: int
    message: str


@dataclass(frozen=True)
class FitResult:
    prior: GPPrior
    log_likelihood: float
    names: tuple
    values: np.ndarray
    restarts: tuple


_FAIL = 1e25


def _bounds_for(names, config: MLConfig) -> np.ndarray:
    out = []
    for n in names:
        lo, hi = config.bounds
        for pat, b in config.param_bounds.items():
            if fnmatch.fnmatchcase(n, pat):
                lo, hi = b
                break
        if not 0 < lo < hi or not np.isfinite(hi):
            raise ValueError(f"invalid bounds {lo, hi} for {n}")
        out.append((lo, hi))
    return np.array(out, dtype=float)


def fit_ml(template: GPPrior, data: Dataset, config: MLConfig | None = None) -> FitResult:
    """Maximise the log marginal likelihood over log-parameters with Nelder-Mead restarts.

    Restart 0 starts from the template values (clipped to the bounds) when
    ``config.start_from_template``; the others start from a Latin hypercube
    in the log-bound box.  The best restart wins, ties going to the lowest
    index.
    """
    config = config or MLConfig()
    if config.restarts < 1:
        raise ValueError("need at least one restart")
    hyper = template.kernel.hyperparameters()
    names = list(hyper)
    x_init = list(hyper.values())
    if config.fit_noise:
        names.append("noise")
        x_init.append(max(template.noise, 1e-300))
    if not names:
        raise ValueError("nothing to fit")
    B = _bounds_for(names, config)
    logB = np.log(B)
    nk = len(hyper)

    def build(theta):
        v = np.exp(theta)
        kern = template.kernel.with_hyperparameters(v[:nk])
        noise = v[nk] if config.fit_noise else template.noise
        return GPPrior(kern, template.mean, float(noise))

    def objective(theta):
        try:
            val = log_marginal_likelihood(build(theta), data)
        except (np.linalg.LinAlgError, ValueError, FloatingPointError):
            return _FAIL
        return -val if np.isfinite(val) else _FAIL

    starts = []
    n_lhs = config.restarts - (1 if config.start_from_template else 0)
    if config.start_from_template:
        starts.append(np.clip(np.log(x_init), logB[:, 0], logB[:, 1]))
    if n_lhs > 0:
        u = qmc.LatinHypercube(d=len(names), seed=config.seed).random(n_lhs)
        starts.extend(qmc.scale(u, logB[:, 0], logB[:, 1]))

    maxfev = config.maxfev or 200 * len(names)
    infos = []
    for i, x0 in enumerate(starts):
        f0 = objective(x0)
        xbest, fbest, nfev = x0, f0, 0
        # a collapsed simplex is the usual failure mode in many dimensions, so
        # each restart is relaunched with a fresh simplex around its best point
        for _ in range(1 + config.polish):
            res = optimize.minimize(objective, xbest, method="Nelder-Mead", bounds=list(map(tuple, logB)),
                                    options={"maxfev": maxfev, "xatol": config.xatol, "fatol": config.fatol,
                                             "adaptive": len(names) > 4})
            nfev += int(res.nfev)
            if res.fun >= fbest - config.fatol:
                if res.fun < fbest:
                    xbest, fbest = res.x, float(res.fun)
                break
            xbest, fbest = res.x, float(res.fun)
        infos.append(RestartInfo(i, np.exp(x0), -f0, np.exp(xbest), -fbest, nfev, str(res.message)))

    ok = [r for r in infos if r.log_likelihood > -_FAIL / 10]
    if not ok:
        raise RuntimeError("all restarts failed: " + "; ".join(f"#{r.index}: {r.message}" for r in infos))
    best = max(ok, key=lambda r: (r.log_likelihood, -r.index))
    prior = build(np.log(best.final))
    return FitResult(prior, best.log_likelihood, tuple(names), best.final, tuple(infos))
