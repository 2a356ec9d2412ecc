import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pathinv import (
    Box, Brownian, Constant, Linear, Product, SquaredExponential, Sum, add, constant, gram, kernel_from_dict,
    make_polar_kernels, make_se_kernel, min_eig_check, min_eig_ratio, mul, rotation, scale, shift_mean_embed,
    zero_kernel,
)
from pathinv.kernels import FunctionKernel, Slice, fold_first_quadrant

finite = st.floats(-1.0, 1.0, allow_nan=False)
points2 = arrays(np.float64, (12, 2), elements=finite)


def builtin_kernels():
    k1, k2 = make_polar_kernels()
    return {
        "se": make_se_kernel(1.3, [0.4, 0.9]),
        "k1": k1,
        "k2": k2,
        "linear": Linear(0.7, 2),
        "const": constant(2.0, 2),
        "sum": add(make_se_kernel(1.0, 0.5, Box.cube(-1, 1, 2)), Linear(1.0, 2)),
        "product": mul(make_se_kernel(1.0, 0.5, Box.cube(-1, 1, 2)), k2),
        "scaled": scale(3.0, k1),
    }


def test_se_basic_values():
    k = make_se_kernel(1.0, 1.0)
    assert k.eval(0.0, 0.0) == 1.0
    k = make_se_kernel(1.0, 0.5)
    assert k.eval(0.0, 0.5) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert make_se_kernel(2.5, 0.3).eval(0.7, 0.7) == 2.5


def test_se_long_lengthscale_tends_to_variance():
    k = make_se_kernel(1.7, 1e8)
    rng = np.random.default_rng(0)
    X, Y = rng.uniform(-5, 5, (20, 1)), rng.uniform(-5, 5, (20, 1))
    np.testing.assert_allclose(k(X, Y), 1.7, rtol=1e-12)


def test_se_matches_direct_formula():
    rng = np.random.default_rng(1)
    X, Y = rng.normal(size=(7, 3)), rng.normal(size=(5, 3))
    ls = np.array([0.3, 1.1, 2.0])
    k = SquaredExponential(0.8, ls)
    expected = np.array([[0.8 * math.exp(-np.sum(((x - y) / ls) ** 2)) for y in Y] for x in X])
    np.testing.assert_allclose(k(X, Y), expected, rtol=1e-13)


def test_brownian_min():
    assert Brownian().eval(0.3, 0.7) == pytest.approx(0.3)
    assert Brownian(dim=2).eval([0.3, 0.9], [0.7, 0.5]) == pytest.approx(0.15)


def test_k2_depends_only_on_radii():
    _, k2 = make_polar_kernels()
    rng = np.random.default_rng(2)
    for a, b in rng.uniform(0, 2 * np.pi, (10, 2)):
        x = 0.5 * np.array([np.cos(a), np.sin(a)])
        y = 0.8 * np.array([np.cos(b), np.sin(b)])
        assert k2.eval(x, y) == pytest.approx(0.5, abs=1e-15)


def test_k2_rotation_of_second_argument():
    _, k2 = make_polar_kernels()
    rng = np.random.default_rng(3)
    X, Y = rng.uniform(-1, 1, (20, 2)), rng.uniform(-1, 1, (20, 2))
    for ang in rng.uniform(0, 2 * np.pi, 20):
        R = rotation(ang)
        np.testing.assert_allclose(k2(X, R(Y)), k2(X, Y), atol=1e-12)


def test_k1_quarter_turn_invariance():
    k1, _ = make_polar_kernels()
    rng = np.random.default_rng(4)
    X, Y = rng.uniform(-1, 1, (50, 2)), rng.uniform(-1, 1, (50, 2))
    quarter = rotation(np.pi / 2)
    np.testing.assert_allclose(k1(quarter(X), Y), k1(X, Y), atol=1e-15)


def test_k1_against_trigonometric_formula():
    # independent oracle: polar coordinates with the angle reduced mod pi/2
    k1, _ = make_polar_kernels()
    rng = np.random.default_rng(5)
    X, Y = rng.uniform(-1, 1, (30, 2)), rng.uniform(-1, 1, (30, 2))

    def fold(p):
        r = np.hypot(p[:, 0], p[:, 1])
        th = np.mod(np.arctan2(p[:, 1], p[:, 0]), np.pi / 2)
        return np.column_stack([r * np.cos(th), r * np.sin(th)])

    A, B = fold(X), fold(Y)
    expected = np.minimum(A[:, None, 0], B[None, :, 0]) * np.minimum(A[:, None, 1], B[None, :, 1])
    np.testing.assert_allclose(k1(X, Y), expected, atol=1e-12)


def test_fold_is_exact_on_axes():
    P = np.array([[0.0, 0.5], [-0.5, 0.0], [0.0, -0.5], [0.5, 0.0], [0.0, 0.0]])
    F = fold_first_quadrant(P)
    assert np.all(F >= 0)
    np.testing.assert_array_equal(np.hypot(F[:, 0], F[:, 1]), [0.5, 0.5, 0.5, 0.5, 0.0])


def test_algebra():
    rng = np.random.default_rng(6)
    X, Y = rng.uniform(-1, 1, (100, 2)), rng.uniform(-1, 1, (100, 2))
    k = make_se_kernel(1.0, [0.5, 0.7])
    np.testing.assert_array_equal(add(k, zero_kernel(2))(X, Y), k(X, Y))
    np.testing.assert_allclose(scale(4.0, k)(X, Y), 4 * k(X, Y), rtol=1e-15)
    np.testing.assert_allclose(shift_mean_embed(k, 0.3)(X, Y), k(X, Y) + 0.3, rtol=1e-15)


def test_product_of_se_adds_inverse_square_lengthscales():
    rng = np.random.default_rng(7)
    X, Y = rng.normal(size=(30, 1)), rng.normal(size=(30, 1))
    a, b = 0.6, 1.4
    prod = mul(make_se_kernel(1.0, a), make_se_kernel(1.0, b))
    merged = make_se_kernel(1.0, 1.0 / math.sqrt(a ** -2 + b ** -2))
    np.testing.assert_allclose(prod(X, Y), merged(X, Y), rtol=1e-12)


def test_operators_and_dims():
    k = make_se_kernel(1.0, 0.5)
    assert isinstance(k + k, Sum)
    assert isinstance(k * k, Product)
    with pytest.raises(ValueError):
        add(k, make_se_kernel(1.0, [0.5, 0.5]))
    with pytest.raises(ValueError):
        scale(-1.0, k)
    with pytest.raises(ValueError):
        Constant(-1.0)


def test_gram_single_point_and_psd():
    k = make_se_kernel(2.0, 0.4)
    G = gram(k, [[0.3]])
    np.testing.assert_array_equal(G.matrix, [[2.0]])
    X = np.random.default_rng(8).uniform(-1, 1, (20, 1))
    assert min_eig_check(gram(k, X), 1e-8)
    k1, _ = make_polar_kernels()
    assert min_eig_check(gram(k1, np.random.default_rng(9).uniform(-1, 1, (20, 2))))


def test_min_eig_check_rejects_indefinite():
    assert not min_eig_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert min_eig_ratio(np.zeros((3, 3))) == 0.0


def test_gram_warns_on_duplicates():
    with pytest.warns(UserWarning):
        gram(make_se_kernel(1.0, 1.0), [[0.1], [0.1]])


def test_eval_outside_domain_warns():
    k = make_se_kernel(1.0, 1.0, Box((0.0,), (1.0,)))
    with pytest.warns(UserWarning):
        k.eval(2.0, 0.5)


def test_slice_projects_inputs():
    k = Slice(make_se_kernel(1.0, 0.3), [1], 3)
    X = np.array([[9.0, 0.1, -4.0]])
    Y = np.array([[-2.0, 0.4, 7.0]])
    assert k(X, Y)[0, 0] == pytest.approx(math.exp(-1.0))


def test_hyperparameter_roundtrip_preserves_sharing():
    base = make_se_kernel(1.0, 0.5)
    k = add(mul(base, constant(2.0)), base)
    names = list(k.hyperparameters())
    assert len(names) == 3
    k2 = k.with_hyperparameters([3.0, 0.25, 5.0])
    assert list(k2.hyperparameters().values()) == [3.0, 0.25, 5.0]


@pytest.mark.parametrize("name", list(builtin_kernels()))
def test_json_roundtrip(name):
    k = builtin_kernels()[name]
    spec = json.loads(json.dumps(k.to_dict()))
    k2 = kernel_from_dict(spec)
    X = np.random.default_rng(10).uniform(-1, 1, (15, 2))
    np.testing.assert_array_equal(k2(X), k(X))


def test_function_kernel_is_not_serialisable():
    with pytest.raises(TypeError):
        FunctionKernel(lambda X, Y: X @ Y.T, 1).to_dict()
    with pytest.raises(ValueError):
        kernel_from_dict({"type": "no-such-kernel"})


@pytest.mark.parametrize("name", list(builtin_kernels()))
@settings(max_examples=25, deadline=None)
@given(X=points2, Y=points2)
def test_symmetry_property(name, X, Y):
    k = builtin_kernels()[name]
    A, B = k(X, Y), k(Y, X).T
    assert np.all(np.abs(A - B) <= 1e-12 * (1 + np.abs(A)))


@pytest.mark.parametrize("name", list(builtin_kernels()))
@settings(max_examples=25, deadline=None)
@given(X=arrays(np.float64, (30, 2), elements=finite, unique=False))
def test_empirical_psd_property(name, X):
    assert min_eig_ratio(builtin_kernels()[name](X)) >= -1e-8


def test_diag_matches_full():
    X = np.random.default_rng(11).uniform(-1, 1, (25, 2))
    for k in builtin_kernels().values():
        np.testing.assert_allclose(k.diag(X), np.diag(k(X)), rtol=1e-13, atol=1e-15)
