# %% [markdown]
# # Brute-force check in a truncated Fock space
#
# For two oscillators the Hamiltonians can be diagonalised directly.  The
# two-point-measurement work distribution then gives chi(u) and all
# moments, independently of the Gaussian machinery.

# %%
import numpy as np

from harmonic_quench import ChainSpec, average_work, fock
from harmonic_quench.work import chi_at

spec = ChainSpec(2, 1.0, 1.0, 1.0)
sys = fock.build_system(spec, 30)
dist = fock.tpm_distribution(sys, spec)
print("TPM <W>:", dist.moment(1), " closed form:", average_work(spec))

u = np.linspace(0, 5, 6)
print("max |chi - oracle|:", np.max(np.abs(chi_at(spec, u) - fock.oracle_chi(sys, spec, u))))

# %% [markdown]
# The relative entropy between the evolved state and the post-quench Gibbs
# state does not depend on time and equals the lag.

# %%
for t in (0.0, 1.0, 2.5):
    print(t, fock.relative_entropy_lag(sys, spec, t))
