# %% [markdown]
# # The post-quench propagator as an optical network
#
# Evolution under the coupled Hamiltonian is a passive mixer, single-mode
# squeezers, free rotations at the normal-mode frequencies, and the inverse
# squeezers and mixer.

# %%
import numpy as np

from harmonic_quench import ChainSpec, build_h1, propagator_network, thermal_state
from harmonic_quench.symplectic import evolution_symplectic

spec = ChainSpec(n_modes=3, omega=1.0, g0=0.5, beta=2.0)
t = 1.4
net = propagator_network(spec, t)
for el in net.elements:
    print(el)

# %%
s_net = net.symplectic().matrix
s_exp = evolution_symplectic(build_h1(spec), t)
print("network vs matrix exponential:", np.max(np.abs(s_net - s_exp)))

# %% [markdown]
# Acting on the initial thermal state gives the covariance at time t.  The
# symplectic eigenvalues are unchanged by any Gaussian unitary.

# %%
state = thermal_state(spec).transform(net)
print("symplectic eigenvalues:", state.symplectic_eigenvalues())
print("thermal variance V:", spec.variance)

# %% [markdown]
# Networks serialise to JSON and can be replayed.

# %%
text = net.to_json(indent=1)
print(text[:200], "...")
