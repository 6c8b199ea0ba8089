# %% [markdown]
# # Idealizing keys, and why distances only shrink
#
# The adjusted parameter eps_sec + 2d rests on two facts: no channel
# increases trace distance, and swapping the real keys for an ideal
# uniform key is such a channel.

# %%
import numpy as np

from pulsecorr.verifier import CqEntry, CqFinalState, cq_trace_distance, dpi_property, gamma_map, random_cq_state
from pulsecorr.verifier.cq import random_density_matrix

ket0 = np.diag([1.0, 0.0])
mismatched = CqFinalState((CqEntry(1, 0, 1, 1.0, ket0),))
ideal = gamma_map(mismatched)
for e in ideal.entries:
    print(f"K={e.K} k_A={e.k_A} k_B={e.k_B} weight={e.weight}")

# %%
rng = np.random.default_rng(4)
a, b = random_cq_state(rng, 3, 2), random_cq_state(rng, 3, 2)
print("before:", cq_trace_distance(a, b), " after:", cq_trace_distance(gamma_map(a), gamma_map(b)))

# %%
rho, sigma = random_density_matrix(6, rng), random_density_matrix(6, rng, 1)
for seed in range(5):
    before, after, ok = dpi_property(rho, sigma, seed)
    print(f"channel {seed}: {before:.4f} -> {after:.4f}  ok={ok}")
