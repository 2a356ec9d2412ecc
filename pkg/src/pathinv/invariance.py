"""Combinations of composition operators and argumentwise-invariant kernels.

A combination of composition operators acts on functions as

    T(f)(x) = sum_i alpha_i f(v_i(x))

for symbol maps ``v_i: D -> D``.  A kernel is argumentwise invariant under
``T`` when ``T(k(., x')) = k(., x')`` for every ``x'``; the centred random
field with covariance ``k`` then has ``T``-invariant sample paths.

This module provides the symbol primitives, operator families (group
averages, centring, additivity, finite-difference and exact differential
invariances), a sampled invariance checker, and constructors for kernels
that are invariant by design.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .kernels import Box, Kernel, as_points, gram, min_eig_ratio, register

# ---------------------------------------------------------------------------
# symbol maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolMap:
    """A map ``v: D -> D`` applied row-wise to point arrays.

    ``spec`` is the JSON description for the named primitives and ``None``
    for construction-time closures.  ``point`` is set for constant maps so
    callers can evaluate once and broadcast.
    """

    func: Callable[[np.ndarray], np.ndarray]
    label: str
    dim: int
    spec: dict | None = None
    point: np.ndarray | None = field(default=None, compare=False)

    def __call__(self, X) -> np.ndarray:
        X = as_points(X, self.dim)
        return np.asarray(self.func(X), dtype=float).reshape(X.shape)

    def to_dict(self) -> dict:
        if self.spec is None:
            raise TypeError(f"symbol {self.label!r} is a closure and cannot be serialised")
        return dict(self.spec)


def identity(dim: int) -> SymbolMap:
    return SymbolMap(lambda X: X.copy(), "id", dim, {"name": "identity", "dim": dim})


def rotation(angle: float) -> SymbolMap:
    """Planar rotation about the origin.

    Multiples of pi/2 are applied as exact coordinate swaps and sign flips.
    """
    q = angle / (math.pi / 2)
    spec = {"name": "rotation", "angle": float(angle)}
    if abs(q - round(q)) < 1e-12:
        turns = int(round(q)) % 4
        perms = {
            0: lambda X: X.copy(),
            1: lambda X: np.column_stack([-X[:, 1], X[:, 0]]),
            2: lambda X: -X,
            3: lambda X: np.column_stack([X[:, 1], -X[:, 0]]),
        }
        return SymbolMap(perms[turns], f"rot({turns}pi/2)", 2, spec)
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, -s], [s, c]])
    return SymbolMap(lambda X: X @ R.T, f"rot({angle:.6g})", 2, spec)


def negation(dim: int = 1) -> SymbolMap:
    return SymbolMap(lambda X: -X, "neg", dim, {"name": "negation", "dim": dim})


def coordinate_slot(i: int, anchor) -> SymbolMap:
    """``v(x) = anchor`` with its ``i``-th coordinate replaced by ``x_i``."""
    a = np.asarray(anchor, dtype=float).ravel()

    def f(X):
        out = np.repeat(a[None, :], X.shape[0], axis=0)
        out[:, i] = X[:, i]
        return out

    return SymbolMap(f, f"slot({i})", a.size, {"name": "coordinate_slot", "i": int(i), "anchor": a.tolist()})


def constant_map(a) -> SymbolMap:
    a = np.asarray(a, dtype=float).ravel()
    return SymbolMap(lambda X: np.repeat(a[None, :], X.shape[0], axis=0), "const", a.size,
                     {"name": "constant", "a": a.tolist()}, point=a)


def translation(offset) -> SymbolMap:
    o = np.asarray(offset, dtype=float).ravel()
    return SymbolMap(lambda X: X + o, f"shift({o.tolist()})", o.size, {"name": "translation", "offset": o.tolist()})


def radial_projection(u) -> SymbolMap:
    """``v(x) = |x| u`` for a unit vector ``u`` (closure, not serialisable)."""
    u = np.asarray(u, dtype=float).ravel()
    u = u / np.linalg.norm(u)
    return SymbolMap(lambda X: np.linalg.norm(X, axis=1)[:, None] * u[None, :], "radial", u.size)


_SYMBOLS = {
    "identity": lambda s: identity(s["dim"]),
    "rotation": lambda s: rotation(s["angle"]),
    "negation": lambda s: negation(s.get("dim", 1)),
    "coordinate_slot": lambda s: coordinate_slot(s["i"], s["anchor"]),
    "constant": lambda s: constant_map(s["a"]),
    "translation": lambda s: translation(s["offset"]),
}


def symbol_from_dict(spec: dict) -> SymbolMap:
    try:
        return _SYMBOLS[spec["name"]](spec)
    except KeyError:
        raise ValueError(f"unknown symbol primitive {spec.get('name')!r}") from None


# ---------------------------------------------------------------------------
# combinations of composition operators
# ---------------------------------------------------------------------------


class CompositionCombination:
    """``T(f)(x) = sum_i weights[i] * f(symbols[i](x))``."""

    def __init__(self, symbols: Sequence[SymbolMap], weights: Sequence[float], label: str = "T"):
        symbols = tuple(symbols)
        weights = np.asarray(weights, dtype=float).ravel()
        if not symbols:
            raise ValueError("a combination needs at least one symbol")
        if len(symbols) != weights.size:
            raise ValueError("symbols and weights differ in length")
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite")
        dims = {s.dim for s in symbols}
        if len(dims) != 1:
            raise ValueError(f"symbols act on different dimensions: {sorted(dims)}")
        self.symbols = symbols
        self.weights = weights
        self.dim = dims.pop()
        self.label = label

    def __len__(self):
        return len(self.symbols)

    def images(self, X, domain: Box | None = None) -> list[np.ndarray]:
        X = as_points(X, self.dim)
        out = [s(X) for s in self.symbols]
        if domain is not None:
            for s, V in zip(self.symbols, out):
                if not np.all(domain.contains(V, atol=1e-9)):
                    raise ValueError(f"symbol {s.label} maps points outside the domain {domain}")
        return out

    def apply(self, f: Callable, X, domain: Box | None = None) -> np.ndarray:
        """``T(f)`` at the rows of ``X``; ``f`` maps (n, d) arrays to (n,) values."""
        X = as_points(X, self.dim)
        total = np.zeros(X.shape[0])
        for w, V in zip(self.weights, self.images(X, domain)):
            total += w * np.asarray(f(V), dtype=float).reshape(X.shape[0])
        return total

    def apply_to_kernel(self, kernel: Kernel, X, Xprime) -> np.ndarray:
        """Matrix ``[T(k(., x'_j))(x_i)]_{ij}``."""
        X = as_points(X, self.dim)
        Xp = as_points(Xprime, self.dim)
        out = np.zeros((X.shape[0], Xp.shape[0]))
        for s, w in zip(self.symbols, self.weights):
            if s.point is not None:
                out += w * kernel(s.point[None, :], Xp)
            else:
                out += w * kernel(s(X), Xp)
        return out

    def to_dict(self) -> dict:
        return {"op": "composition_combination", "label": self.label,
                "symbols": [s.to_dict() for s in self.symbols], "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, spec: dict) -> "CompositionCombination":
        if spec.get("op") != "composition_combination":
            raise ValueError("not a composition_combination document")
        return cls([symbol_from_dict(s) for s in spec["symbols"]], spec["weights"], spec.get("label", "T"))

    def __repr__(self):
        return f"CompositionCombination({self.label!r}, q={len(self)})"


def apply_T_to_function(T: CompositionCombination, f: Callable, x, domain: Box | None = None):
    """``sum_i alpha_i f(v_i(x))``; scalar for a single point."""
    vals = T.apply(f, x, domain)
    return float(vals[0]) if vals.size == 1 else vals


def apply_T_to_kernel_arg(T: CompositionCombination, kernel: Kernel, xprime) -> Callable:
    """The function ``x -> T(k(., x'))(x)``."""
    xp = as_points(xprime, kernel.dim)

    def section(X):
        return T.apply_to_kernel(kernel, X, xp)[:, 0]

    return section


# ---------------------------------------------------------------------------
# groups, measures
# ---------------------------------------------------------------------------


class GroupAction:
    """Finite group of symbol maps; identity and closure are checked on samples."""

    def __init__(self, maps: Sequence[SymbolMap], sample_box: Box | None = None,
                 n_samples: int = 64, seed: int = 0, atol: float = 1e-10):
        self.maps = tuple(maps)
        if not self.maps:
            raise ValueError("empty group")
        self.dim = self.maps[0].dim
        box = sample_box or Box.cube(-1.0, 1.0, self.dim)
        X = box.sample(n_samples, np.random.default_rng(seed))
        imgs = [g(X) for g in self.maps]
        if not any(np.allclose(V, X, rtol=0, atol=atol) for V in imgs):
            raise ValueError("group does not contain the identity (on samples)")
        for gi in self.maps:
            for V in imgs:
                comp = gi(V)
                if not any(np.allclose(comp, W, rtol=0, atol=atol) for W in imgs):
                    raise ValueError(f"group not closed under composition: {gi.label} o ... has no match")

    @property
    def order(self) -> int:
        return len(self.maps)

    def average(self) -> CompositionCombination:
        m = self.order
        return CompositionCombination(self.maps, np.full(m, 1.0 / m), label="group-average")


def quarter_turn_group() -> GroupAction:
    return GroupAction([rotation(k * math.pi / 2) for k in range(4)])


def negation_group(dim: int = 1) -> GroupAction:
    return GroupAction([identity(dim), negation(dim)])


@dataclass(frozen=True)
class QuadratureMeasure:
    """Discrete measure ``sum_u w_u delta_u``."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        if nodes.shape[0] != w.size:
            raise ValueError("nodes and weights differ in length")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("quadrature weights must be finite and nonnegative")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    @property
    def is_probability(self) -> bool:
        return abs(self.mass - 1.0) <= 1e-12

    def normalized(self) -> "QuadratureMeasure":
        return QuadratureMeasure(self.nodes, self.weights / self.mass)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float).ravel()))

    def to_dict(self) -> dict:
        return {"nodes": self.nodes.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, spec: dict) -> "QuadratureMeasure":
        return cls(np.array(spec["nodes"]), np.array(spec["weights"]))


def _tensor(rules, probability: bool) -> QuadratureMeasure:
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    nodes = np.column_stack([g.ravel() for g in grids])
    w = np.prod(np.column_stack([g.ravel() for g in wgrids]), axis=1)
    if probability:
        w = w / w.sum()
    return QuadratureMeasure(nodes, w)


def uniform_grid(box: Box, n: int | Sequence[int], probability: bool = True) -> QuadratureMeasure:
    """Tensor midpoint rule; Lebesgue measure on ``box`` unless ``probability``."""
    ns = [n] * box.dim if np.isscalar(n) else list(n)
    rules = []
    for lo, hi, k in zip(box.lower, box.upper, ns):
        h = (hi - lo) / k
        rules.append((lo + h * (np.arange(k) + 0.5), np.full(k, h)))
    return _tensor(rules, probability)


def gauss_legendre(box: Box, n: int | Sequence[int], probability: bool = True) -> QuadratureMeasure:
    """Tensor Gauss-Legendre rule on ``box``."""
    ns = [n] * box.dim if np.isscalar(n) else list(n)
    rules = []
    for lo, hi, k in zip(box.lower, box.upper, ns):
        t, w = np.polynomial.legendre.leggauss(k)
        rules.append((0.5 * (hi - lo) * t + 0.5 * (hi + lo), 0.5 * (hi - lo) * w))
    return _tensor(rules, probability)


def centering_operator(nu: QuadratureMeasure) -> CompositionCombination:
    """``T(f)(x) = f(x) - int f d(nu / |nu|)`` as identity minus constant maps."""
    w = nu.weights / nu.mass
    symbols = [identity(nu.dim)] + [constant_map(u) for u in nu.nodes]
    return CompositionCombination(symbols, np.concatenate([[1.0], -w]), label="centering")


def additivity_operator(a, d: int | None = None) -> CompositionCombination:
    """Fixed points are exactly the additive functions ``sum_i f_i(x_i)``."""
    a = np.asarray(a, dtype=float).ravel()
    if d is None:
        d = a.size
    if a.size != d:
        raise ValueError(f"anchor has dimension {a.size}, expected {d}")
    symbols = [coordinate_slot(i, a) for i in range(d)] + [constant_map(a)]
    weights = [1.0] * d + [-(d - 1.0)]
    return CompositionCombination(symbols, weights, label="additivity")


# ---------------------------------------------------------------------------
# differential operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearDifferentialCheck:
    """Second-order central-difference stencil for ``laplacian`` or ``ode`` (``y'' + y``)."""

    operator: str = "laplacian"
    h: float = 1e-3
    dim: int = 2

    def __post_init__(self):
        if self.operator not in ("laplacian", "ode"):
            raise ValueError(f"unknown operator {self.operator!r}")
        if not self.h > 0:
            raise ValueError("step h must be positive")
        if self.operator == "ode" and self.dim != 1:
            object.__setattr__(self, "dim", 1)

    def stencil(self) -> tuple[list[np.ndarray], np.ndarray]:
        """Offsets and weights of ``L_h``."""
        h2 = self.h * self.h
        offsets = [np.zeros(self.dim)]
        weights = [-2.0 * self.dim / h2 + (1.0 if self.operator == "ode" else 0.0)]
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = self.h
            offsets += [e, -e]
            weights += [1.0 / h2, 1.0 / h2]
        return offsets, np.array(weights)

    def as_combination(self) -> CompositionCombination:
        """``T = id + L_h``: its fixed points are the discrete solutions of ``L_h f = 0``."""
        offsets, weights = self.stencil()
        weights = weights.copy()
        weights[0] += 1.0
        return CompositionCombination([translation(o) for o in offsets], weights, label=f"fd-{self.operator}")

    def residual(self, f: Callable, X) -> np.ndarray:
        offsets, weights = self.stencil()
        X = as_points(X, self.dim)
        return sum(w * np.asarray(f(X + o), dtype=float).reshape(X.shape[0]) for o, w in zip(offsets, weights))


def fd_operator_residual(check: LinearDifferentialCheck, f: Callable, x, domain: Box | None = None):
    """Central-difference estimate of ``L[f](x)`` (Laplacian or ``f'' + f``)."""
    X = as_points(x, check.dim)
    if domain is not None and not np.all(domain.shrink(check.h).contains(X, atol=0.0)):
        raise ValueError("finite-difference stencil exits the domain")
    r = check.residual(f, X)
    return float(r[0]) if r.size == 1 else r


def ode_shift_operator(h: float) -> CompositionCombination:
    """``T(f)(t) = (f(t+h) + f(t-h)) / (2 cos h)``; fixes ``span(cos, sin)`` exactly."""
    c = 2.0 * math.cos(h)
    return CompositionCombination([translation([h]), translation([-h])], [1.0 / c, 1.0 / c], label="ode-shift")


def mean_value_operator(radius: float, n: int = 16) -> CompositionCombination:
    """Average over ``n`` equispaced points of a circle: fixes harmonic functions."""
    ang = 2.0 * math.pi * np.arange(n) / n
    offs = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    return CompositionCombination([translation(o) for o in offs], np.full(n, 1.0 / n), label="mean-value")


# ---------------------------------------------------------------------------
# invariance checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceReport:
    max_violation: float
    max_relative: float
    passed: bool
    n_probe: int
    tol: float


def check_argumentwise_invariance(T: CompositionCombination, kernel: Kernel, n_probe: int = 200,
                                  tol: float = 1e-10, seed: int = 0, domain: Box | None = None) -> InvarianceReport:
    """Probe ``|T(k(., x'))(x) - k(x, x')|`` on all pairs of ``n_probe`` random points.

    Passes iff every violation is at most ``tol * (1 + |k(x, x')|)``.
    Probes are drawn from ``domain`` (default: the kernel's domain, else
    ``[-1, 1]^d``).
    """
    if n_probe < 1:
        raise ValueError("n_probe must be >= 1")
    box = domain or kernel.domain or Box.cube(-1.0, 1.0, kernel.dim)
    rng = np.random.default_rng(seed)
    X = box.sample(n_probe, rng)
    Xp = box.sample(n_probe, rng)
    K = kernel(X, Xp)
    viol = np.abs(T.apply_to_kernel(kernel, X, Xp) - K)
    rel = viol / (1.0 + np.abs(K))
    return InvarianceReport(float(viol.max()), float(rel.max()), bool(rel.max() <= tol), n_probe, tol)


# ---------------------------------------------------------------------------
# invariant kernels
# ---------------------------------------------------------------------------


@register
class Symmetrized(Kernel):
    """``k_G(x, y) = |G|^-2 sum_{g, g'} k(g x, g' y)``."""

    kind = "symmetrized"

    def __init__(self, kernel: Kernel, group: GroupAction, **kw):
        if group.dim != kernel.dim:
            raise ValueError("group and kernel dimensions differ")
        kw.setdefault("domain", kernel.domain)
        super().__init__(kernel.dim, **kw)
        self.kernel = kernel
        self.group = group

    @property
    def params(self):
        return {"group": [g.to_dict() for g in self.group.maps]}

    @property
    def children(self):
        return (self.kernel,)

    def _compute(self, X, Y, cache):
        GX = [g(X) for g in self.group.maps]
        GY = GX if Y is X else [g(Y) for g in self.group.maps]
        K = np.zeros((X.shape[0], Y.shape[0]))
        for A in GX:
            for B in GY:
                K += self.kernel(A, B)
        return K / self.group.order ** 2

    def _diag(self, X, cache):
        G = [g(X) for g in self.group.maps]
        out = np.zeros(X.shape[0])
        for A in G:
            for B in G:
                out += np.array([self.kernel(a[None], b[None])[0, 0] for a, b in zip(A, B)])
        return out / self.group.order ** 2

    def _rebuild(self, params, children):
        return Symmetrized(children[0], self.group)

    @classmethod
    def _from_spec(cls, params, children, domain):
        group = GroupAction([symbol_from_dict(s) for s in params["group"]])
        return cls(children[0], group, domain=domain)


def symmetrize_kernel(kernel: Kernel, G: GroupAction) -> Symmetrized:
    return Symmetrized(kernel, G)


@register
class Centered(Kernel):
    """Kernel whose sections integrate to zero against a quadrature measure.

    With ``m(x) = int k(x, u) dnu(u)`` and ``c = int int k dnu dnu`` for the
    normalised measure, ``k0(x, y) = k(x, y) - m(x) - m(y) + c``.
    """

    kind = "centered"

    def __init__(self, kernel: Kernel, nu: QuadratureMeasure, **kw):
        if nu.dim != kernel.dim:
            raise ValueError("measure and kernel dimensions differ")
        kw.setdefault("domain", kernel.domain)
        super().__init__(kernel.dim, **kw)
        self.kernel = kernel
        self.nu = nu
        self._w = nu.weights / nu.mass
        self._c = None

    @property
    def params(self):
        return {"measure": self.nu.to_dict()}

    @property
    def children(self):
        return (self.kernel,)

    def _total(self, cache):
        if self._c is None:
            Kuu = self.kernel._eval(self.nu.nodes, self.nu.nodes, cache)
            self._c = float(self._w @ Kuu @ self._w)
        return self._c

    def _mean(self, X, cache):
        return self.kernel._eval(X, self.nu.nodes, cache) @ self._w

    def _compute(self, X, Y, cache):
        mX = self._mean(X, cache)
        mY = mX if Y is X else self._mean(Y, cache)
        K = self.kernel._eval(X, Y, cache)
        return K - mX[:, None] - mY[None, :] + self._total(cache)

    def _diag(self, X, cache):
        return self.kernel._diag(X, cache) - 2.0 * self._mean(X, cache) + self._total(cache)

    def _rebuild(self, params, children):
        return Centered(children[0], self.nu)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(children[0], QuadratureMeasure.from_dict(params["measure"]), domain=domain)


def make_centered_kernel(kernel: Kernel, nu: QuadratureMeasure, allow_unnormalized: bool = False) -> Centered:
    """Centre ``kernel`` with respect to ``nu``.

    ``nu`` must be a probability measure unless ``allow_unnormalized``; a
    finite measure of any mass is then centred through ``nu / |nu|``, which
    has the same null-integral functions.
    """
    if not nu.is_probability and not allow_unnormalized:
        raise ValueError(f"centring measure must be a probability measure (mass {nu.mass!r})")
    return Centered(kernel, nu)


@register
class Additive(Kernel):
    """``k(x, y) = sum_{i, j} k_ij(x_i, y_j)`` from a block matrix of 1-D kernels."""

    kind = "additive"

    def __init__(self, blocks: Sequence[Sequence[Kernel | None]], **kw):
        d = len(blocks)
        if d == 0 or any(len(row) != d for row in blocks):
            raise ValueError("blocks must form a square matrix")
        positions, kids = [], []
        for i, row in enumerate(blocks):
            for j, b in enumerate(row):
                if b is None:
                    continue
                if b.dim != 1:
                    raise ValueError(f"block ({i}, {j}) is not a 1-D kernel")
                positions.append((i, j))
                kids.append(b)
        if not kids:
            raise ValueError("at least one nonzero block required")
        super().__init__(d, **kw)
        self.positions = tuple(positions)
        self.blocks = tuple(kids)

    @property
    def params(self):
        return {"positions": [list(p) for p in self.positions], "dim": self.dim}

    @property
    def children(self):
        return self.blocks

    def _compute(self, X, Y, cache):
        K = np.zeros((X.shape[0], Y.shape[0]))
        for (i, j), b in zip(self.positions, self.blocks):
            K += b(X[:, i], Y[:, j])
        return K

    def _diag(self, X, cache):
        out = np.zeros(X.shape[0])
        for (i, j), b in zip(self.positions, self.blocks):
            out += np.array([b(xi, xj)[0, 0] for xi, xj in zip(X[:, i], X[:, j])]) if i != j \
                else b._diag(X[:, [i]], {})
        return out

    def _rebuild(self, params, children):
        return Additive(_blocks_matrix(self.dim, self.positions, children))

    @classmethod
    def _from_spec(cls, params, children, domain):
        pos = [tuple(p) for p in params["positions"]]
        return cls(_blocks_matrix(params["dim"], pos, children), domain=domain)


def _blocks_matrix(d, positions, kids):
    M = [[None] * d for _ in range(d)]
    for (i, j), k in zip(positions, kids):
        M[i][j] = k
    return M


def make_additive_kernel(blocks, domain: Box | None = None, n_check: int = 50, seed: int = 0,
                         tol: float = 1e-8) -> Additive:
    """Assemble an additive kernel and verify it is (empirically) PSD.

    Individually valid blocks do not make a valid kernel when off-diagonal
    blocks are present, so the assembled function is checked on ``n_check``
    random points; failure raises ``ValueError`` with the offending ratio.
    """
    k = Additive(blocks, domain=domain)
    box = domain or Box.cube(-1.0, 1.0, k.dim)
    X = box.sample(n_check, np.random.default_rng(seed))
    G = gram(k, X)
    if not np.allclose(G.matrix, k(X).T, rtol=1e-12, atol=1e-12):
        raise ValueError("additive blocks are not symmetric: need k_ji(s, t) = k_ij(t, s)")
    ratio = min_eig_ratio(G)
    if ratio < -tol:
        raise ValueError(f"assembled additive kernel is not PSD: lambda_min/lambda_max = {ratio:.3e}")
    return k


@register
class ODESpan(Kernel):
    """``k(s, t) = (cos s, sin s) Sigma (cos t, sin t)^T``; sections solve ``y'' + y = 0``."""

    kind = "ode_span"

    def __init__(self, Sigma, **kw):
        S = np.asarray(Sigma, dtype=float)
        if S.shape != (2, 2) or not np.allclose(S, S.T, rtol=0, atol=1e-14):
            raise ValueError("Sigma must be a symmetric 2x2 matrix")
        if np.linalg.eigvalsh(S)[0] < -1e-12:
            raise ValueError("Sigma must be positive semi-definite")
        super().__init__(1, **kw)
        self.Sigma = S

    @property
    def params(self):
        return {"Sigma": self.Sigma}

    @staticmethod
    def _features(X):
        t = X[:, 0]
        return np.column_stack([np.cos(t), np.sin(t)])

    def _compute(self, X, Y, cache):
        return self._features(X) @ self.Sigma @ self._features(Y).T

    def _diag(self, X, cache):
        F = self._features(X)
        return np.einsum("ij,jk,ik->i", F, self.Sigma, F)

    def _rebuild(self, params, children):
        return ODESpan(params["Sigma"])

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params["Sigma"], domain=domain)


def make_ode_span_kernel(Sigma=None, domain: Box | None = None) -> ODESpan:
    return ODESpan(np.eye(2) if Sigma is None else Sigma,
                   domain=domain or Box((0.0,), (2 * math.pi,)))


@register
class Harmonic(Kernel):
    """``exp(<x, y> / theta^2) cos((x2 y1 - x1 y2) / theta^2)``, harmonic in each argument.

    Equals ``Re exp(z conj(w) / theta^2)`` with ``z = x1 + i x2``.
    """

    kind = "harmonic"
    positive_params = ("theta",)

    def __init__(self, theta: float = 1.0, **kw):
        if not theta > 0:
            raise ValueError("theta must be positive")
        kw.setdefault("domain", Box.cube(-1.0, 1.0, 2))
        super().__init__(2, **kw)
        self.theta = float(theta)

    @property
    def params(self):
        return {"theta": self.theta}

    def _compute(self, X, Y, cache):
        s = 1.0 / self.theta ** 2
        P = (X @ Y.T) * s
        Q = (np.outer(X[:, 1], Y[:, 0]) - np.outer(X[:, 0], Y[:, 1])) * s
        return np.exp(P) * np.cos(Q)

    def _diag(self, X, cache):
        return np.exp(np.einsum("ij,ij->i", X, X) / self.theta ** 2)

    def _rebuild(self, params, children):
        return Harmonic(params["theta"])

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params.get("theta", 1.0), domain=domain) if domain else cls(params.get("theta", 1.0))


def make_harmonic_kernel(theta: float = 1.0) -> Harmonic:
    return Harmonic(theta)
