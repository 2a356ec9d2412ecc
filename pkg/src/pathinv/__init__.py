"""Gaussian-process regression with argumentwise-invariant kernels."""
from .kernels import (
    Box, Brownian, Constant, GramMatrix, Kernel, Linear, PolarK1, PolarK2, Product, Scale, Slice,
    SquaredExponential, Sum, add, as_points, constant, gram, kernel_from_dict, make_polar_kernels,
    make_se_kernel, min_eig_check, min_eig_ratio, mul, scale, shift_mean_embed, zero_kernel,
)
from .invariance import (
    Additive, Centered, CompositionCombination, GroupAction, Harmonic, InvarianceReport,
    LinearDifferentialCheck, ODESpan, QuadratureMeasure, SymbolMap, Symmetrized, additivity_operator,
    apply_T_to_function, apply_T_to_kernel_arg, centering_operator, check_argumentwise_invariance,
    constant_map, coordinate_slot, fd_operator_residual, gauss_legendre, identity, make_additive_kernel,
    make_centered_kernel, make_harmonic_kernel, make_ode_span_kernel, mean_value_operator, negation,
    negation_group, ode_shift_operator, quarter_turn_group, rotation, symmetrize_kernel, translation,
    uniform_grid,
)
from .gp import (
    Dataset, FitResult, GPPrior, MLConfig, MercerDecomposition, Posterior, conditional_simulate,
    discrete_mercer, fit_ml, kl_sample, log_marginal_likelihood, orbit_closure, path_invariance_test,
    posterior, sample_paths,
)
from .anova import (
    GFunction, SobolTable, build_centered_1d_kernel, build_experiment_kernels, g_eval, g_sobol_closed_form,
    hdmr_quadrature, monte_carlo_sobol, significant_subsets,
)

__version__ = "0.1.0"
