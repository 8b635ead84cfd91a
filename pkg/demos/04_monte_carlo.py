# %% [markdown]
# # Seeded Monte Carlo experiments
#
# Results depend on (seed, config) only; the worker count never changes them.

# %%
import numpy as np

from majorlab import (UT_MAJ, DistributionSpec, ExperimentConfig, Functional,
                      bridge_persistence_check, convergence_study, ecdf_pi,
                      estimate_comparability)

dist = DistributionSpec.dirichlet(0.5)
cfg = ExperimentConfig(UT_MAJ, dist, 10, 200_000, seed=7)
r1 = estimate_comparability(cfg, threads=1)
r4 = estimate_comparability(cfg, threads=4)
print(r1.to_dict())
print("same with 4 threads:", r1 == r4)

# %%
# the same count, seen as a zero-sum walk that never goes negative
print(bridge_persistence_check(10, 200_000, dist, seed=7).count, r1.count)

# %%
grid = tuple(np.round(np.arange(0.1, 1.0, 0.2), 10))
tab = ecdf_pi(ExperimentConfig(Functional.PI_UT, DistributionSpec.uniform(), 6, 200_000,
                               seed=1, grid=grid))
for t, F, ref, z in zip(tab.t, tab.F, tab.exact_ref, tab.z):
    print(f"t={t:.1f}  F={F:.4f}  exact={ref:.4f}  z={z:+.2f}")
print("atom at 1:", tab.atom, "vs", tab.atom_ref)

# %%
for row in convergence_study(0.3, [4, 64, 512], 50_000, seed=2):
    print(row)
