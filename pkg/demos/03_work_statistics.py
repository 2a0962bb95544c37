# %% [markdown]
# # Characteristic function of work
#
# After a sudden switch-on of the coupling, the work done on an initially
# thermal chain is a random variable.  Its characteristic function chi(u)
# factorises over normal modes.

# %%
import numpy as np

from harmonic_quench import ChainSpec, average_work, characteristic_function
from harmonic_quench.work import chi_at, chi_quadrature

spec = ChainSpec(n_modes=2, omega=1.0, g0=1.0, beta=1.0)
wc = characteristic_function(spec, np.linspace(0, 10, 11))
for u, c in zip(wc.u_grid, wc.chi):
    print(f"u = {u:4.1f}  chi = {c.real:+.6f} {c.imag:+.6f}i")

# %% [markdown]
# A phase-space quadrature of the coherent-state echo gives the same
# numbers without using the closed form.

# %%
for u in (1.0, 3.0):
    print(u, chi_at(spec, u), chi_quadrature(spec, u))

# %% [markdown]
# The first moment is the mean work, g0 V (N - 1) / 2.

# %%
h = 1e-4
deriv = (chi_at(spec, h) - chi_at(spec, -h)) / (2 * h)
print("-i chi'(0):", (-1j * deriv).real, " closed form:", average_work(spec))
