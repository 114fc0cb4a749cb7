# %% [markdown]
# # The (k, c) family and the Funk metric
#
# Every metric here is spherically symmetric: F(x, y) = phi(|x|, |y|, <x, y>).
# The family member with k = c = 1 is the Funk metric of the unit ball.

# %%
import numpy as np

from finslerflat import MetricSpec, SamplePoint, finsler_eval, funk_formula, phi_family

# %% at the origin phi reduces to |y| / sqrt(k)
print(phi_family(1, 1, 0.0, 1.0, 0.0), phi_family(4, 2, 0.0, 1.0, 0.0))

# %% the direct Funk formula and the family agree
funk = MetricSpec.funk(dim=2)
fam = MetricSpec.family(1, 1, dim=2)
p = SamplePoint(np.array([0.5, 0.0]), np.array([0.0, 1.0]))
print(finsler_eval(funk, p), finsler_eval(fam, p), funk_formula(p.x, p.y))

# %% F is not reversible: moving toward the boundary costs more than moving away
x = np.array([0.8, 0.0])
for y in ([1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]):
    print(y, finsler_eval(funk, SamplePoint(x, np.array(y))))

# %% domain radius is sqrt(k)/|c|
for k, c in [(1, 1), (2, 0.5), (4, 2), (1, -1)]:
    print((k, c), MetricSpec.family(k, c).radius)
