# %% [markdown]
# # Closed forms and the order-statistics recursion

# %%
import numpy as np

from majorlab import (RngStream, bernstein_table, bolshev, dirichlet_bound, exact_cdf_pi_ut,
                      example_cdf_n3_alpha2, partial_sums, sample_uniform)

# %%
# P(all m sorted uniforms clear their band)
print(bolshev([0.3, 0.3]), (1 - 0.3) ** 2)
print(bolshev([0.1, 0.2, 0.5, 0.5]))

# %%
# averaging the band probability over random profiles gives back the Pi_UT law
n, t = 5, 0.6
S = partial_sums(sample_uniform(n, RngStream(3), size=50_000), "unsorted")[:, :-1]
print("averaged:", bolshev(t * S).mean(), " closed form:", 1 - exact_cdf_pi_ut(n, t))

# %%
t = np.linspace(0.1, 0.9, 5)
print("n=3, alpha=2 CDF :", np.round(example_cdf_n3_alpha2(t), 4))
print("upper bound      :", np.round(dirichlet_bound(3, 2.0, t), 4))

# %%
rows = bernstein_table(1000)
print("all bound chains hold at n=1000:", all(d.chain_holds() for d in rows))
print("k=1: A_k = %.3f, B_k = %.3f" % (rows[0].A_k, rows[0].B_k))
