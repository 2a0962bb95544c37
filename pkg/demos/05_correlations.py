# %% [markdown]
# # Entanglement and discord in a coupled pair
#
# The Gibbs state of two coupled oscillators is Gaussian.  Its logarithmic
# negativity switches on below a threshold temperature, while Gaussian
# discord is positive at any finite coupling.

# %%
import numpy as np

from harmonic_quench import ChainSpec, equilibrium_covariance, gaussian_discord, log_negativity
from harmonic_quench.correlations import entanglement_threshold, lag_correlation_curves

spec = ChainSpec(2, 1.0, 1.0, 1.0)
print("threshold beta*:", entanglement_threshold(spec))

for b in (0.5, 1.5, 1.7, 5.0, 50.0):
    cov = equilibrium_covariance(spec.replace(beta=b))
    d, _ = gaussian_discord(cov)
    print(f"beta = {b:5.1f}: E = {log_negativity(cov):.6f}, D = {d:.6f}")

# %% [markdown]
# Lag and correlations side by side over a temperature sweep.

# %%
table = lag_correlation_curves(spec, np.geomspace(0.1, 20, 8))
print(table.columns)
for row in table.rows():
    print(" ".join(f"{x:10.5f}" for x in row))
