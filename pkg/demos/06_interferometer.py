# %% [markdown]
# # Building the mode mixer from beam splitters
#
# Any real orthogonal mixer factors into a triangular mesh of two-mode
# beam splitters plus sign flips.

# %%
import numpy as np

from harmonic_quench import ChainSpec, normal_modes, reck_decompose, reconstruct
from harmonic_quench.interferometer import complementary_angle

p = normal_modes(ChainSpec(4, 1.0, 1.0)).p_matrix
plan = reck_decompose(p)
for el in plan.network.elements:
    print(el)

print("round trip error:", np.max(np.abs(reconstruct(plan) - p)))

# %% [markdown]
# Some tables quote the angle from the reflected port.

# %%
print(np.round([np.tan(complementary_angle(m.theta)) for m in plan.mixers], 6))
