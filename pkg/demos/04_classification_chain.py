# %% [markdown]
# # From the ODE for f back to phi
#
# The family is generated by f(t) = 1/sqrt(c^2 t + k), the solution of
# 2 f' + c^2 f^3 = 0.  Here we check each step of the chain numerically.

# %%
import numpy as np

from finslerflat import (
    MetricSpec,
    identity_suite,
    ode_residual,
    quadrature_reconstruction_check,
    sample_domain,
)

k, c = 2.0, 0.5
spec = MetricSpec.family(k, c)

# %% the generator solves its ODE; a wrong power does not
grid = np.linspace(0, 10, 41)
print("ode residual", ode_residual(c, k, grid))
print("wrong f", ode_residual(c, k, grid, f=lambda t: 1 / (c * c * t + k)))

# %% identities between phi, its partial derivatives and f
worst = {}
for p in sample_domain(spec, 1, 300):
    for key, val in identity_suite(spec, p).items():
        worst[key] = max(worst.get(key, 0.0), val)
for key, val in worst.items():
    print(f"{key:20s} {val:.2e}")

# %% phi differences equal the integral of f over |y|
print(quadrature_reconstruction_check(spec, r=1.2, v=0.6, u1=0.8, u2=2.5))
print(quadrature_reconstruction_check(spec, r=1.2, v=0.6, u1=0.8, u2=2.5, f=lambda t: 1.0))
