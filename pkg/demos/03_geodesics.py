# %% [markdown]
# # Geodesics are straight lines
#
# For every family member the spray is G = (c F / 2) y, so geodesics keep
# their direction and only change speed.  We integrate x'' = -2 G(x, x') with
# fixed-step RK4 and measure the distance to the chord.

# %%
import io

import numpy as np

from finslerflat import (
    MetricSpec,
    SamplePoint,
    energy_drift,
    finsler_eval,
    geodesic_integrate,
    spray_coefficients,
    straightness_residual,
    write_trace_csv,
)

funk = MetricSpec.funk(dim=2)
p = SamplePoint(np.array([0.1, 0.0]), np.array([0.5, 0.5]))
print("G =", spray_coefficients(funk, p), " F y / 2 =", 0.5 * finsler_eval(funk, p) * p.y)

# %%
tr = geodesic_integrate(funk, p.x, p.y, t_end=0.5, step=1e-3)
print("states", len(tr), "straightness", straightness_residual(tr),
      "energy drift", energy_drift(tr))

# %% the Funk geodesic toward the boundary only approaches it asymptotically
tr = geodesic_integrate(funk, [0.95, 0.0], [1.0, 0.0], t_end=1.0)
print("final x", tr.x[-1], "truncated", tr.truncated)

# %% with c < 0 the speed grows and the geodesic leaves the ball in finite time
rev = MetricSpec.family(1, -1, dim=2)
tr = geodesic_integrate(rev, [0.95, 0.0], [1.0, 0.0], t_end=1.0)
print("truncated", tr.truncated, tr.messages)

# %% traces export as plot-ready CSV
buf = io.StringIO()
write_trace_csv(tr, buf)
print(buf.getvalue().splitlines()[:3])
