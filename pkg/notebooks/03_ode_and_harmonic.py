# %% [markdown]
# # Kernels whose paths solve a differential equation
#
# `k_ode` spans the solution set of f'' + f = 0, so two noise-free values pin a path down.
# `k_harm` has harmonic paths, so the regression error peaks on the boundary.

# %%
from pathinv.bench import ExperimentConfig, run_harmonic, run_ode

ode = run_ode(ExperimentConfig("ode"))
for row in ode.rows:
    print(f"{row['n_obs']} observations: max posterior sd = {row['max_sd']:.2e}")

# %%
harm = run_harmonic(ExperimentConfig("harmonic"))
row = harm.rows[0]
print("interior max error:", round(row["interior_max_error"], 4))
print("boundary max error:", round(row["boundary_max_error"], 4))
print("checks:", harm.checks)
