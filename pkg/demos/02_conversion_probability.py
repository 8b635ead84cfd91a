# %% [markdown]
# # How much of x survives a conversion to y
#
# `pi_maj` and `pi_ut` return the largest weight p such that p x plus some
# leftover state lies below y, together with the partial sum that binds.

# %%
import numpy as np

from majorlab import MAJ, UT_MAJ, pi_maj, pi_ut, sample_uniform, verify_witness, RngStream

x = np.array([0.7, 0.25, 0.05])
y = np.array([1 / 12, 5 / 12, 1 / 2])

for name, fn, rel in (("maj", pi_maj, MAJ), ("ut", pi_ut, UT_MAJ)):
    r = fn(x, y)
    print(f"{name}: p* = {r.p_star:.6f} (binding k = {r.argmin_k}),"
          f" witness ok: {verify_witness(x, y, r.p_star, rel)},"
          f" p* + 1e-6 ok: {verify_witness(x, y, r.p_star + 1e-6, rel)}")

# %%
# batch evaluation over random pairs
from majorlab import pi_maj_batch, pi_ut_batch

n = 10
X = sample_uniform(n, RngStream(0, 1), size=100_000)
Y = sample_uniform(n, RngStream(0, 2), size=100_000)
pm, pu = pi_maj_batch(X, Y), pi_ut_batch(X, Y)
print("min Pi_maj", pm.min(), ">= 1/n =", 1 / n)
print("share with Pi_ut == 1:", np.mean(pu == 1.0), " (1/n =", 1 / n, ")")
