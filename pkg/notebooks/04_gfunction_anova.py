# %% [markdown]
# # Sobol indices of the g-function and sparse ANOVA kernels
#
# The closed-form Sobol indices pick out which interaction terms matter. Those subsets
# decide the structure of the sparse ANOVA kernel, which we then fit by maximum likelihood.

# %%
from pathinv import GFunction, build_experiment_kernels, g_sobol_closed_form, significant_subsets
from pathinv.bench import G_FUNCTION_A, ExperimentConfig, run_gfunction

g = GFunction(G_FUNCTION_A)
table = g_sobol_closed_form(g)
print("sum of main effects:", round(table.main_effects().sum(), 4))
for thr in (1e-5, 1e-3, 5e-3):
    print(f"threshold {thr:g}: {len(significant_subsets(table, thr))} subsets")

# %%
subsets = significant_subsets(table, 5e-3)
kernels = build_experiment_kernels(g.d, subsets)
print({k: len(v.hyperparameters()) for k, v in kernels.items()})

# %% [markdown]
# A single small replicate keeps this script quick. The bench CLI runs the full study.

# %%
small = {"n_seeds": 1, "n_train": 60, "n_test": 500, "restarts": 1, "polish": 0}
res = run_gfunction(ExperimentConfig("gfunction", seed=0, params=small))
for name, s in res.extra["summary"].items():
    print(f"{name:>8}: Q2 = {s['q2_mean']:.3f}")
