"""Covariance kernels, kernel algebra and Gram-matrix diagnostics.

A kernel maps two point arrays ``X`` (n, d) and ``Y`` (m, d) to the n x m
matrix of covariances.  Kernels are immutable; hyperparameter updates build
new objects through :meth:`Kernel.with_hyperparameters`, which keeps shared
sub-kernels shared (a kernel object used in several places of a composite
owns a single set of parameters).

The squared-exponential kernel is parameterised *without* the usual factor
1/2 in the exponent::

    k(x, y) = variance * prod_i exp(-(x_i - y_i)**2 / lengthscale_i**2)

so that ``exp(-4 (t - t')**2)`` is obtained with lengthscale 0.5.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

_REGISTRY: dict[str, type] = {}


def register(cls):
    """Class decorator adding a kernel type to the JSON registry."""
    _REGISTRY[cls.kind] = cls
    return cls


# ---------------------------------------------------------------------------
# points and domains
# ---------------------------------------------------------------------------


def as_points(X, dim: int) -> np.ndarray:
    """Coerce ``X`` to a float array of shape (n, dim).

    Scalars and 1-D arrays are accepted for ``dim == 1``; a 1-D array of
    length ``dim`` is read as a single point otherwise.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 0:
        X = X.reshape(1, 1)
    elif X.ndim == 1:
        X = X[:, None] if dim == 1 else X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"dimension mismatch: expected points of dimension {dim}, got shape {np.shape(X)}")
    return X


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod_i [lower_i, upper_i]``."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi) or not lo:
            raise ValueError("lower and upper must be nonempty and of equal length")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"degenerate box: lower={lo}, upper={hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, lo: float, hi: float, dim: int) -> "Box":
        return cls((lo,) * dim, (hi,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (np.array(self.lower) + np.array(self.upper))

    def contains(self, X, atol: float = 1e-12) -> np.ndarray:
        X = as_points(X, self.dim)
        return np.all((X >= np.array(self.lower) - atol) & (X <= np.array(self.upper) + atol), axis=1)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(n, self.dim))

    def shrink(self, margin: float) -> "Box":
        return Box(tuple(a + margin for a in self.lower), tuple(b - margin for b in self.upper))

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, spec: dict) -> "Box":
        return cls(tuple(spec["lower"]), tuple(spec["upper"]))


# ---------------------------------------------------------------------------
# kernel base class
# ---------------------------------------------------------------------------


class Kernel:
    """Base class.  Subclasses implement ``_compute`` and ``_diag``.

    ``positive_params`` lists the parameters exposed to likelihood fitting
    (all strictly positive, optimised on log scale); names in ``fixed`` are
    held constant.
    """

    kind = "kernel"
    positive_params: tuple = ()

    def __init__(self, dim: int, domain: Box | None = None, name: str | None = None, fixed=()):
        if dim < 1:
            raise ValueError("kernel dimension must be >= 1")
        if domain is not None and domain.dim != dim:
            raise ValueError(f"domain dimension {domain.dim} does not match kernel dimension {dim}")
        self.dim = int(dim)
        self.domain = domain
        self.name = name
        self.fixed = frozenset(fixed)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, X, Y=None) -> np.ndarray:
        X = as_points(X, self.dim)
        Y = X if Y is None else as_points(Y, self.dim)
        return self._eval(X, Y, {})

    def _eval(self, X, Y, cache: dict) -> np.ndarray:
        # keeping X, Y alive in the cache prevents id() reuse during one call
        key = (id(self), id(X), id(Y))
        hit = cache.get(key)
        if hit is None:
            hit = (X, Y, self._compute(X, Y, cache))
            cache[key] = hit
        return hit[2]

    def _compute(self, X, Y, cache) -> np.ndarray:
        raise NotImplementedError

    def diag(self, X) -> np.ndarray:
        """``k(x, x)`` for every row of ``X``."""
        return self._diag(as_points(X, self.dim), {})

    def _diag(self, X, cache) -> np.ndarray:
        return np.array([self._compute(x[None], x[None], cache)[0, 0] for x in X])

    def eval(self, x, y) -> float:
        """Scalar evaluation ``k(x, y)``; flags points outside the domain."""
        x = as_points(x, self.dim)
        y = as_points(y, self.dim)
        if x.shape[0] != 1 or y.shape[0] != 1:
            raise ValueError("eval expects single points")
        if self.domain is not None and not (self.domain.contains(x)[0] and self.domain.contains(y)[0]):
            warnings.warn(f"{self.kind} kernel evaluated outside its domain", stacklevel=2)
        return float(self._eval(x, y, {})[0, 0])

    # -- structure ----------------------------------------------------------

    @property
    def params(self) -> dict:
        return {}

    @property
    def children(self) -> tuple:
        return ()

    def _rebuild(self, params: dict, children: tuple) -> "Kernel":
        raise NotImplementedError

    def _copy_meta(self, other: "Kernel") -> "Kernel":
        other.name = self.name
        other.fixed = self.fixed
        if other.domain is None:
            other.domain = self.domain
        return other

    # -- hyperparameters ----------------------------------------------------

    def _own_hyper(self) -> list[tuple[str, float]]:
        out = []
        for p in self.positive_params:
            if p in self.fixed:
                continue
            v = np.atleast_1d(self.params[p])
            if v.size == 1 and np.ndim(self.params[p]) == 0:
                out.append((p, float(v[0])))
            else:
                out.extend((f"{p}[{i}]", float(vi)) for i, vi in enumerate(v))
        return out

    def _unique_nodes(self) -> list["Kernel"]:
        seen: dict[int, Kernel] = {}

        def walk(k):
            if id(k) in seen:
                return
            seen[id(k)] = k
            for c in k.children:
                walk(c)

        walk(self)
        return list(seen.values())

    def hyperparameters(self) -> dict[str, float]:
        """Learnable parameters of the whole tree, shared nodes counted once."""
        out: dict[str, float] = {}
        for node in self._unique_nodes():
            prefix = node.name or node.kind
            for pname, value in node._own_hyper():
                key = f"{prefix}.{pname}"
                n = 1
                while key in out:
                    n += 1
                    key = f"{prefix}#{n}.{pname}"
                out[key] = value
        return out

    def with_hyperparameters(self, values: Sequence[float]) -> "Kernel":
        """Rebuild with new learnable values, ordered as in :meth:`hyperparameters`."""
        values = list(map(float, values))
        nodes = self._unique_nodes()
        need = sum(len(n._own_hyper()) for n in nodes)
        if len(values) != need:
            raise ValueError(f"expected {need} hyperparameters, got {len(values)}")
        it = iter(values)
        new_params: dict[int, dict] = {}
        for node in nodes:
            params = dict(node.params)
            for p in node.positive_params:
                if p in node.fixed:
                    continue
                if np.ndim(params[p]) == 0:
                    params[p] = next(it)
                else:
                    params[p] = np.array([next(it) for _ in np.atleast_1d(params[p])])
            new_params[id(node)] = params
        memo: dict[int, Kernel] = {}

        def rebuild(k):
            if id(k) not in memo:
                kids = tuple(rebuild(c) for c in k.children)
                memo[id(k)] = k._copy_meta(k._rebuild(new_params[id(k)], kids))
            return memo[id(k)]

        return rebuild(self)

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        """JSON-ready ``{type, params, domain, children}`` document."""
        spec = {
            "type": self.kind,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "domain": None if self.domain is None else self.domain.to_dict(),
            "children": [c.to_dict() for c in self.children],
        }
        if self.name:
            spec["name"] = self.name
        if self.fixed:
            spec["fixed"] = sorted(self.fixed)
        return spec

    # -- algebra ------------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        if np.isscalar(other):
            return scale(other, self)
        return mul(self, other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return scale(other, self)
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}={_jsonable(v)}" for k, v in self.params.items())
        kids = ", ".join(repr(c) for c in self.children)
        body = ", ".join(s for s in (inner, kids) if s)
        return f"{type(self).__name__}({body})"


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def kernel_from_dict(spec: dict) -> Kernel:
    """Inverse of :meth:`Kernel.to_dict`."""
    try:
        cls = _REGISTRY[spec["type"]]
    except KeyError:
        raise ValueError(f"unknown kernel type {spec.get('type')!r}") from None
    children = tuple(kernel_from_dict(c) for c in spec.get("children", []))
    domain = Box.from_dict(spec["domain"]) if spec.get("domain") else None
    k = cls._from_spec(spec.get("params", {}), children, domain)
    k.name = spec.get("name")
    k.fixed = frozenset(spec.get("fixed", ()))
    return k


def _check_positive(**kw):
    for name, v in kw.items():
        if np.any(~np.isfinite(v)) or np.any(np.asarray(v) <= 0):
            raise ValueError(f"{name} must be positive, got {v}")


# ---------------------------------------------------------------------------
# base kernels
# ---------------------------------------------------------------------------


@register
class SquaredExponential(Kernel):
    kind = "squared_exponential"
    positive_params = ("variance", "lengthscales")

    def __init__(self, variance=1.0, lengthscales=1.0, dim: int | None = None, **kw):
        ls = np.atleast_1d(np.asarray(lengthscales, dtype=float)).copy()
        if dim is None:
            dom = kw.get("domain")
            dim = dom.dim if dom is not None and ls.size == 1 else ls.size
        if ls.size == 1 and dim > 1:
            ls = np.full(dim, ls[0])
        if ls.size != dim:
            raise ValueError(f"need {dim} lengthscales, got {ls.size}")
        _check_positive(variance=variance, lengthscales=ls)
        super().__init__(dim, **kw)
        self.variance = float(variance)
        self.lengthscales = ls

    @property
    def params(self):
        return {"variance": self.variance, "lengthscales": self.lengthscales}

    def _compute(self, X, Y, cache):
        r2 = cdist(X / self.lengthscales, Y / self.lengthscales, "sqeuclidean")
        return self.variance * np.exp(-r2)

    def _diag(self, X, cache):
        return np.full(X.shape[0], self.variance)

    def _rebuild(self, params, children):
        return SquaredExponential(params["variance"], params["lengthscales"], dim=self.dim)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params.get("variance", 1.0), params.get("lengthscales", 1.0),
                   dim=None if domain is None else domain.dim, domain=domain)


@register
class Constant(Kernel):
    """``k(x, y) = value``; ``value = 0`` gives the zero kernel."""

    kind = "constant"
    positive_params = ("value",)

    def __init__(self, value=1.0, dim: int = 1, **kw):
        if not np.isfinite(value) or value < 0:
            raise ValueError(f"constant kernel needs value >= 0, got {value}")
        super().__init__(dim, **kw)
        self.value = float(value)
        if self.value == 0.0:
            self.fixed = self.fixed | {"value"}

    @property
    def params(self):
        return {"value": self.value}

    def _compute(self, X, Y, cache):
        return np.full((X.shape[0], Y.shape[0]), self.value)

    def _diag(self, X, cache):
        return np.full(X.shape[0], self.value)

    def _rebuild(self, params, children):
        return Constant(params["value"], self.dim)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params.get("value", 1.0), dim=params.get("dim", 1 if domain is None else domain.dim),
                   domain=domain)

    def to_dict(self):
        spec = super().to_dict()
        spec["params"]["dim"] = self.dim
        return spec


def constant(value: float, dim: int = 1, fixed: bool = False) -> Constant:
    return Constant(value, dim, fixed=("value",) if fixed else ())


def zero_kernel(dim: int = 1) -> Constant:
    return Constant(0.0, dim)


@register
class Linear(Kernel):
    """Dot-product kernel ``variance * <x, y>``."""

    kind = "linear"
    positive_params = ("variance",)

    def __init__(self, variance=1.0, dim: int = 1, **kw):
        _check_positive(variance=variance)
        super().__init__(dim, **kw)
        self.variance = float(variance)

    @property
    def params(self):
        return {"variance": self.variance, "dim": self.dim}

    def _compute(self, X, Y, cache):
        return self.variance * (X @ Y.T)

    def _diag(self, X, cache):
        return self.variance * np.einsum("ij,ij->i", X, X)

    def _rebuild(self, params, children):
        return Linear(params["variance"], self.dim)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params.get("variance", 1.0), params.get("dim", 1), domain=domain)


@register
class Brownian(Kernel):
    """Brownian motion / sheet covariance ``variance * prod_i min(x_i, y_i)``."""

    kind = "brownian"
    positive_params = ("variance",)

    def __init__(self, variance=1.0, dim: int = 1, **kw):
        _check_positive(variance=variance)
        super().__init__(dim, **kw)
        self.variance = float(variance)

    @property
    def params(self):
        return {"variance": self.variance, "dim": self.dim}

    def _compute(self, X, Y, cache):
        K = np.ones((X.shape[0], Y.shape[0]))
        for i in range(self.dim):
            K *= np.minimum(X[:, i][:, None], Y[:, i][None, :])
        return self.variance * K

    def _diag(self, X, cache):
        return self.variance * np.prod(X, axis=1)

    def _rebuild(self, params, children):
        return Brownian(params["variance"], self.dim)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params.get("variance", 1.0), params.get("dim", 1), domain=domain)


def fold_first_quadrant(X) -> np.ndarray:
    """Rotate each 2-D point by a multiple of pi/2 into ``{x1 > 0, x2 >= 0}``.

    The folded coordinates are ``(rho cos(t), rho sin(t))`` with
    ``t = theta mod pi/2``.  Only sign flips and swaps are used, so points
    related by a quarter turn fold to bitwise-identical coordinates.  The
    origin folds to itself.
    """
    X = as_points(X, 2)
    x1, x2 = X[:, 0], X[:, 1]
    out = np.empty_like(X)
    q0 = (x1 > 0) & (x2 >= 0)
    q1 = (x1 <= 0) & (x2 > 0)
    q2 = (x1 < 0) & (x2 <= 0)
    q3 = ~(q0 | q1 | q2)
    out[q0] = X[q0]
    out[q1] = np.column_stack([x2[q1], -x1[q1]])
    out[q2] = -X[q2]
    out[q3] = np.column_stack([-x2[q3], x1[q3]])
    return out + 0.0  # normalise -0.0


@register
class PolarK1(Kernel):
    """Brownian sheet pulled back through the quarter-turn fold.

    ``k1(x, y) = min(rho_x cos t_x, rho_y cos t_y) * min(rho_x sin t_x, rho_y sin t_y)``
    with ``t = theta mod pi/2``; invariant under rotations by multiples of
    pi/2 in each argument.
    """

    kind = "polar_k1"

    def __init__(self, **kw):
        kw.setdefault("domain", Box.cube(-1.0, 1.0, 2))
        super().__init__(2, **kw)

    def _compute(self, X, Y, cache):
        fx, fy = fold_first_quadrant(X), fold_first_quadrant(Y)
        return (np.minimum(fx[:, 0][:, None], fy[:, 0][None, :])
                * np.minimum(fx[:, 1][:, None], fy[:, 1][None, :]))

    def _diag(self, X, cache):
        f = fold_first_quadrant(X)
        return f[:, 0] * f[:, 1]

    def _rebuild(self, params, children):
        return PolarK1()

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(domain=domain) if domain is not None else cls()


@register
class PolarK2(Kernel):
    """Brownian motion in the radius: ``k2(x, y) = min(|x|, |y|)``."""

    kind = "polar_k2"

    def __init__(self, **kw):
        kw.setdefault("domain", Box.cube(-1.0, 1.0, 2))
        super().__init__(2, **kw)

    def _compute(self, X, Y, cache):
        return np.minimum(np.hypot(X[:, 0], X[:, 1])[:, None], np.hypot(Y[:, 0], Y[:, 1])[None, :])

    def _diag(self, X, cache):
        return np.hypot(X[:, 0], X[:, 1])

    def _rebuild(self, params, children):
        return PolarK2()

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(domain=domain) if domain is not None else cls()


def make_se_kernel(sigma2: float, lengthscales, domain: Box | None = None) -> SquaredExponential:
    return SquaredExponential(sigma2, lengthscales, domain=domain)


def make_polar_kernels() -> tuple[PolarK1, PolarK2]:
    return PolarK1(), PolarK2()


# ---------------------------------------------------------------------------
# composites
# ---------------------------------------------------------------------------


def _same_dim(kernels):
    dims = {k.dim for k in kernels}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch between operands: {sorted(dims)}")
    return dims.pop()


@register
class Sum(Kernel):
    kind = "sum"

    def __init__(self, kernels: Sequence[Kernel], **kw):
        kernels = tuple(kernels)
        if not kernels:
            raise ValueError("empty sum")
        super().__init__(_same_dim(kernels), **kw)
        self.kernels = kernels

    @property
    def children(self):
        return self.kernels

    def _compute(self, X, Y, cache):
        K = self.kernels[0]._eval(X, Y, cache).copy()
        for k in self.kernels[1:]:
            K += k._eval(X, Y, cache)
        return K

    def _diag(self, X, cache):
        return sum(k._diag(X, cache) for k in self.kernels)

    def _rebuild(self, params, children):
        return Sum(children)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(children, domain=domain)


@register
class Product(Kernel):
    kind = "product"

    def __init__(self, kernels: Sequence[Kernel], **kw):
        kernels = tuple(kernels)
        if not kernels:
            raise ValueError("empty product")
        super().__init__(_same_dim(kernels), **kw)
        self.kernels = kernels

    @property
    def children(self):
        return self.kernels

    def _compute(self, X, Y, cache):
        K = self.kernels[0]._eval(X, Y, cache).copy()
        for k in self.kernels[1:]:
            K *= k._eval(X, Y, cache)
        return K

    def _diag(self, X, cache):
        out = np.ones(X.shape[0])
        for k in self.kernels:
            out = out * k._diag(X, cache)
        return out

    def _rebuild(self, params, children):
        return Product(children)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(children, domain=domain)


@register
class Scale(Kernel):
    """``c * k`` with a fixed nonnegative factor ``c``."""

    kind = "scale"

    def __init__(self, factor: float, kernel: Kernel, **kw):
        if not np.isfinite(factor) or factor < 0:
            raise ValueError(f"scale factor must be >= 0, got {factor}")
        super().__init__(kernel.dim, **kw)
        self.factor = float(factor)
        self.kernel = kernel

    @property
    def params(self):
        return {"factor": self.factor}

    @property
    def children(self):
        return (self.kernel,)

    def _compute(self, X, Y, cache):
        return self.factor * self.kernel._eval(X, Y, cache)

    def _diag(self, X, cache):
        return self.factor * self.kernel._diag(X, cache)

    def _rebuild(self, params, children):
        return Scale(params["factor"], children[0])

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(params["factor"], children[0], domain=domain)


@register
class Slice(Kernel):
    """Lift a kernel on selected coordinates to an ``input_dim``-dimensional space."""

    kind = "slice"

    def __init__(self, kernel: Kernel, dims: Sequence[int], input_dim: int, **kw):
        dims = tuple(int(i) for i in dims)
        if len(dims) != kernel.dim:
            raise ValueError(f"kernel of dimension {kernel.dim} cannot act on coordinates {dims}")
        if any(i < 0 or i >= input_dim for i in dims):
            raise ValueError(f"coordinates {dims} out of range for input dimension {input_dim}")
        super().__init__(input_dim, **kw)
        self.kernel = kernel
        self.dims = dims

    @property
    def params(self):
        return {"dims": list(self.dims), "input_dim": self.dim}

    @property
    def children(self):
        return (self.kernel,)

    def _sub(self, X, cache):
        # one projected copy per input array so the child's cache can hit
        key = ("slice", self.dims, id(X))
        hit = cache.get(key)
        if hit is None:
            hit = (X, np.ascontiguousarray(X[:, list(self.dims)]))
            cache[key] = hit
        return hit[1]

    def _compute(self, X, Y, cache):
        Xs = self._sub(X, cache)
        Ys = Xs if Y is X else self._sub(Y, cache)
        return self.kernel._eval(Xs, Ys, cache)

    def _diag(self, X, cache):
        return self.kernel._diag(self._sub(X, cache), cache)

    def _rebuild(self, params, children):
        return Slice(children[0], self.dims, self.dim)

    @classmethod
    def _from_spec(cls, params, children, domain):
        return cls(children[0], params["dims"], params["input_dim"], domain=domain)


def add(k1: Kernel, k2: Kernel) -> Sum:
    return Sum([k1, k2])


def mul(k1: Kernel, k2: Kernel) -> Product:
    return Product([k1, k2])


def scale(c: float, k: Kernel) -> Scale:
    return Scale(c, k)


def shift_mean_embed(k: Kernel, c: float) -> Sum:
    """``k + c``: adds a constant kernel, i.e. a random constant offset of variance ``c``."""
    return Sum([k, Constant(c, k.dim)])


@register
class FunctionKernel(Kernel):
    """Wrap a vectorised callable ``f(X, Y) -> (n, m)``; not serialisable."""

    kind = "function"

    def __init__(self, func: Callable, dim: int, **kw):
        super().__init__(dim, **kw)
        self.func = func

    def _compute(self, X, Y, cache):
        return np.asarray(self.func(X, Y), dtype=float)

    def _rebuild(self, params, children):
        return FunctionKernel(self.func, self.dim)

    def to_dict(self):
        raise TypeError("FunctionKernel wraps an arbitrary callable and cannot be serialised")


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray
    points: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def gram(kernel: Kernel, points) -> GramMatrix:
    """Assemble ``K_ij = k(x_i, x_j)``, symmetrised from the upper triangle."""
    X = as_points(points, kernel.dim)
    if np.unique(X, axis=0).shape[0] < X.shape[0]:
        warnings.warn("gram: duplicate points", stacklevel=2)
    K = kernel(X)
    iu = np.triu_indices(K.shape[0], 1)
    K[(iu[1], iu[0])] = K[iu]
    return GramMatrix(K, X)


def min_eig_ratio(G) -> float:
    """``lambda_min / lambda_max`` (0 for the zero matrix)."""
    M = G.matrix if isinstance(G, GramMatrix) else np.asarray(G)
    ev = np.linalg.eigvalsh(0.5 * (M + M.T))
    top = max(abs(ev[-1]), abs(ev[0]))
    return 0.0 if top == 0 else float(ev[0] / top)


def min_eig_check(G, tol: float = 1e-8) -> bool:
    """True iff ``lambda_min >= -tol * lambda_max``."""
    return min_eig_ratio(G) >= -tol
