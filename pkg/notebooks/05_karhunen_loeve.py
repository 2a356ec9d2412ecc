# %% [markdown]
# # Discrete Karhunen-Loeve expansion
#
# Eigen-decomposing the kernel against a quadrature rule gives a second way to sample.
# The eigenvalues add up to the weighted trace of the kernel.

# %%
import numpy as np

from pathinv import Box, GPPrior, discrete_mercer, gauss_legendre, kl_sample, make_ode_span_kernel, sample_paths

nu = gauss_legendre(Box((0.0,), (2 * np.pi,)), 20)
k = make_ode_span_kernel()
dec = discrete_mercer(k, nu)
print("leading eigenvalues:", np.round(dec.eigenvalues[:4], 6))
print("trace gap:", abs(dec.eigenvalues.sum() - nu.weights @ k.diag(nu.nodes)))

# %%
a = kl_sample(dec, seed=0, n_paths=5000)
b = sample_paths(GPPrior(k), nu.nodes, 5000, seed=1, method="spectral")
print("max covariance difference:", np.abs(np.cov(a.T) - np.cov(b.T)).max())
