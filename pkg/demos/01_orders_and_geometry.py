# %% [markdown]
# # Orders on the probability simplex
#
# Two vectors, three relations, and the polytope of everything below a target.

# %%
import numpy as np

from majorlab import MAJ, UT_MAJ, WEAK_MAJ, compare, extreme_points, hull_membership_2d, profile

x = np.array([0.0, 0.0, 1.0])
y = np.array([0.2, 0.5, 0.3])

# %%
# sorted and unsorted partial sums drive every comparison
print("sorted  ", profile(y, "sorted").values)
print("unsorted", profile(y, "unsorted").values)

# %%
for rel in (MAJ, WEAK_MAJ, UT_MAJ):
    print(f"{rel!s:5} x below y: {compare(x, y, rel)}   y below x: {compare(y, x, rel)}")

# %% [markdown]
# The point mass on the last coordinate sits at the bottom of the UT order but at
# the top of majorization, so the two orders are not nested.

# %%
for rel in (MAJ, UT_MAJ):
    eps = extreme_points(y, rel)
    print(rel, "extreme points:")
    print(np.round(eps.points, 3))

# %%
# predicate and polytope agree on random points
rng = np.random.default_rng(1)
pts = rng.dirichlet(np.ones(3), size=2000)
for rel in (MAJ, UT_MAJ):
    eps = extreme_points(y, rel)
    agree = np.mean([compare(p, y, rel) == hull_membership_2d(p, eps) for p in pts])
    print(rel, "agreement:", agree)
