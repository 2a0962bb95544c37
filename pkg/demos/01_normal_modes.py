# %% [markdown]
# # Normal modes of a coupled chain
#
# A chain of N oscillators with nearest-neighbour spring coupling g0 has a
# tridiagonal potential.  Its eigenvalues have a closed form, and the
# centre-of-mass mode keeps the bare frequency.

# %%
import numpy as np
from scipy import linalg

from harmonic_quench import ChainSpec, build_h1, normal_modes, spectrum

spec = ChainSpec(n_modes=5, omega=1.0, g0=0.8)
lam = spectrum(spec)
dense = linalg.eigvalsh(build_h1(spec).v_block)
print("closed form:", lam)
print("dense eigvalsh:", dense)
print("max difference:", np.max(np.abs(lam - dense)))

# %% [markdown]
# Each normal mode j oscillates at mu_j = sqrt(omega lambda_j).  Relative to
# the bare oscillator its ground state is squeezed by r_j = ln(mu_j/omega)/4.

# %%
nm = normal_modes(spec)
for j, (mu, r) in enumerate(zip(nm.mus, nm.squeeze_params), start=1):
    print(f"mode {j}: mu = {mu:.6f}, r = {r:.6f}")

# %% [markdown]
# The columns of the orthogonal mixer are the mode shapes.  The first one is
# uniform.

# %%
print(np.round(nm.p_matrix, 4))
