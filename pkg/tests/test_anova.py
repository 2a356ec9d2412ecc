import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathinv import (
    GFunction, SobolTable, additivity_operator, build_centered_1d_kernel, build_experiment_kernels, g_eval,
    g_sobol_closed_form, hdmr_quadrature, monte_carlo_sobol, path_invariance_test, significant_subsets,
)
from pathinv.anova import REFERENCE_PARAMETER_COUNTS, ExperimentKernelParams, all_subsets, index_set

G_A = (0, 0, 0, 2, 2, 2, 4, 4, 4, 8)


def test_g_eval_corners_and_centre():
    g = GFunction((0.0, 1.5, 3.0))
    expected = np.prod([(2 + a) / (1 + a) for a in g.a])
    for corner in itertools.product([0.0, 1.0], repeat=3):
        assert g(np.array(corner)) == pytest.approx(expected, rel=1e-14)
    assert g(np.full(3, 0.5))[0] == 0.0
    g2 = GFunction((1.0, 2.0))
    assert g_eval(g2, [0.5, 0.5])[0] == pytest.approx(0.5 * 2 / 3)


def test_g_mean_is_one():
    g = GFunction(G_A)
    X = np.random.default_rng(0).random((100_000, 10))
    assert g(X).mean() == pytest.approx(1.0, abs=0.01)


def test_g_validation():
    with pytest.raises(ValueError):
        GFunction((-1.0,))
    with pytest.raises(ValueError):
        GFunction(())
    with pytest.raises(ValueError):
        g_eval(GFunction((0, 0)), np.zeros((2, 3)))


def test_closed_form_small_cases():
    t = g_sobol_closed_form(GFunction((0.0,)))
    assert t[(1,)] == pytest.approx(1.0, rel=1e-15)
    t = g_sobol_closed_form(GFunction((0.0, 0.0)))
    assert t[(1,)] == pytest.approx(3 / 7, rel=1e-14)
    assert t[(2,)] == pytest.approx(3 / 7, rel=1e-14)
    assert t[(1, 2)] == pytest.approx(1 / 7, rel=1e-14)
    assert t.total() == pytest.approx(1.0, abs=1e-15)


def test_main_effect_share_is_two_thirds():
    t = g_sobol_closed_form(GFunction(G_A))
    assert t.main_effects().sum() == pytest.approx(0.66, abs=0.005)


@settings(max_examples=30, deadline=None)
@given(a=st.lists(st.floats(0, 20), min_size=1, max_size=8))
def test_closed_form_is_complete(a):
    t = g_sobol_closed_form(GFunction(tuple(a)))
    assert t.complete
    assert abs(t.total() - 1.0) <= 1e-10
    assert all(v >= 0 for v in t.indices.values())


@settings(max_examples=20, deadline=None)
@given(a=st.lists(st.floats(0, 5), min_size=2, max_size=5), i=st.integers(0, 4), bump=st.floats(0.1, 3))
def test_raising_a_lowers_indices_containing_i(a, i, bump):
    i = i % len(a)
    before = g_sobol_closed_form(GFunction(tuple(a)))
    a2 = list(a)
    a2[i] += bump
    after = g_sobol_closed_form(GFunction(tuple(a2)))
    for I, s in before.indices.items():
        if i + 1 in I:
            assert after.indices[I] < s


def test_closed_form_against_quadrature_oracle():
    rng = np.random.default_rng(1)
    for d in (1, 2, 3, 4):
        g = GFunction(tuple(rng.uniform(0, 5, d)))
        closed = g_sobol_closed_form(g)
        oracle = hdmr_quadrature(g, d)
        assert oracle.complete
        for I in all_subsets(d):
            assert abs(closed[I] - oracle[I]) <= 1e-6
        assert abs(oracle.total() - 1.0) <= 1e-10


def test_quadrature_oracle_on_polynomial():
    # f = x1 + 2 x2 + x1 x2: variances 1/12 * (1.5)^2, 1/12 * (2.5)^2, (1/12)^2
    f = lambda X: X[:, 0] + 2 * X[:, 1] + X[:, 0] * X[:, 1]  # noqa: E731
    t = hdmr_quadrature(f, 2)
    v1, v2, v12 = 2.25 / 12, 6.25 / 12, 1 / 144
    total = v1 + v2 + v12
    assert t[(1,)] == pytest.approx(v1 / total, rel=1e-12)
    assert t[(2,)] == pytest.approx(v2 / total, rel=1e-12)
    assert t[(1, 2)] == pytest.approx(v12 / total, rel=1e-12)


def test_monte_carlo_additive_in_x1():
    f = lambda X: np.sin(2 * np.pi * X[:, 0])  # noqa: E731
    est = monte_carlo_sobol(f, (1,), 3, n_mc=20_000, seed=2, method="pick-freeze")
    assert abs(est.value - 1.0) <= 3 * est.stderr + 1e-12
    for I in [(2,), (1, 2), (1, 3), (1, 2, 3)]:
        e = monte_carlo_sobol(f, I, 3, n_mc=20_000, seed=3, method="pick-freeze")
        assert abs(e.value) <= 3 * e.stderr + 1e-12


def test_monte_carlo_matches_closed_form():
    g = GFunction((0.0, 0.0))
    for I, exact in [((1,), 3 / 7), ((2,), 3 / 7), ((1, 2), 1 / 7)]:
        e = monte_carlo_sobol(g, I, 2, n_mc=100_000, seed=4, method="pick-freeze")
        assert abs(e.value - exact) <= 3 * e.stderr
        q = monte_carlo_sobol(g, I, 2)
        assert q.method == "quadrature"
        assert q.value == pytest.approx(exact, abs=1e-6)


def test_monte_carlo_constant_function_is_degenerate():
    f = lambda X: np.full(X.shape[0], 2.0)  # noqa: E731
    for method in ("quadrature", "pick-freeze"):
        e = monte_carlo_sobol(f, (1,), 2, n_mc=1000, method=method)
        assert e.value == 0.0 and e.degenerate


def test_significant_subsets_edge_cases():
    t = g_sobol_closed_form(GFunction(G_A))
    assert significant_subsets(t, 1.0) == []
    assert len(significant_subsets(t, 1e-300)) == 2 ** 10 - 1
    with pytest.raises(ValueError):
        significant_subsets(t, 0.0)


def test_significant_subsets_at_5e_3():
    t = g_sobol_closed_form(GFunction(G_A))
    S = significant_subsets(t, 5e-3)
    assert len(S) == 22
    assert [I for I in S if len(I) == 1] == [(i,) for i in range(1, 10)]
    assert (1, 2, 3) in S


def test_sobol_table_csv(tmp_path):
    t = g_sobol_closed_form(GFunction((0.0, 1.0, 2.0)))
    t.to_csv(tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "subset,S_I"
    assert lines[1].startswith("1,")
    back = SobolTable.from_csv(tmp_path / "s.csv", 3)
    assert back.indices == t.indices


def test_index_sets():
    assert index_set([3, 1]) == (1, 3)
    for bad in ([], [0], [1, 1]):
        with pytest.raises(ValueError):
            index_set(bad)
    with pytest.raises(ValueError):
        index_set([4], d=3)


def test_centered_1d_kernel():
    k0 = build_centered_1d_kernel(1.0, 0.5)
    from pathinv import gauss_legendre, Box

    nu = gauss_legendre(Box((0.0,), (1.0,)), 50)
    X = np.random.default_rng(5).random((20, 1))
    assert np.max(np.abs(k0(X, nu.nodes) @ nu.weights)) <= 1e-12
    assert abs(k0.eval(0.1, 0.2)) > 1e-6
    ev = np.linalg.eigvalsh(k0(np.random.default_rng(6).random((30, 1))))
    assert ev[0] >= -1e-8 * ev[-1]


def study_subsets():
    return significant_subsets(g_sobol_closed_form(GFunction(G_A)), 5e-3)


def test_parameter_counts_match_reference():
    ks = build_experiment_kernels(10, study_subsets())
    counts = {k: len(v.hyperparameters()) for k, v in ks.items()}
    assert counts == REFERENCE_PARAMETER_COUNTS


def test_parameter_count_mismatch_names_kernel():
    with pytest.raises(ValueError, match="k_spa"):
        build_experiment_kernels(10, study_subsets(), expected_counts={**REFERENCE_PARAMETER_COUNTS, "k_spa": 23})


def test_k_anova_expansion_d2():
    p = ExperimentKernelParams(sigma2=1.7, sigma2_i=0.8, theta_i=0.4)
    ks = build_experiment_kernels(2, [(1,), (2,)], p)
    k01 = build_centered_1d_kernel(0.8, 0.4)
    rng = np.random.default_rng(7)
    X, Y = rng.random((25, 2)), rng.random((25, 2))
    a = k01(X[:, :1], Y[:, :1])
    b = k01(X[:, 1:], Y[:, 1:])
    np.testing.assert_allclose(ks["k_anova"](X, Y), 1.7 * (1 + a + b + a * b), rtol=1e-12, atol=1e-12)


def test_k_spa_with_singletons_equals_k_add():
    ks = build_experiment_kernels(4, [(1,), (2,), (3,), (4,)])
    X = np.random.default_rng(8).random((20, 4))
    np.testing.assert_allclose(ks["k_spa"](X), ks["k_add"](X), rtol=1e-14)


def test_k_add_paths_are_additive():
    ks = build_experiment_kernels(3, [(1,), (2,), (3,)], ExperimentKernelParams(sigma2_0=1e-12))
    T = additivity_operator(np.full(3, 0.5))
    grid = np.random.default_rng(9).random((15, 3))
    rep = path_invariance_test(ks["k_add"], T, grid, n_paths=10, tol=1e-8)
    assert rep.passed, rep


def test_experiment_kernels_are_psd():
    ks = build_experiment_kernels(10, study_subsets())
    X = np.random.default_rng(10).random((40, 10))
    for k in ks.values():
        ev = np.linalg.eigvalsh(k(X))
        assert ev[0] >= -1e-8 * ev[-1]
