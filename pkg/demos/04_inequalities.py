"""Weighted Hardy-Rellich checks, the pointwise convexity step and the integral identity.

Every report carries the error budget used to decide its verdict.
"""

# %% Inequality on the unit ball for a few profiles
import numpy as np

from frachardy import FracParams, PohozaevSpec, bump, check_cordoba, check_hardy_rellich, check_pohozaev_id, combo

params = FracParams(3, 0.5, 0.5, 2)
for u in (bump(2.0, 1.0), bump(4.0, 0.8), combo([1.0, -0.3], [2.0, 3.0], 1.0)):
    rep = check_hardy_rellich(params, u)
    print(f"lhs {rep.lhs:.6e}  rhs {rep.rhs:.6e}  rhs/lhs {rep.ratio:8.3f}  {rep.verdict}")

# %% Convexity inequality at 50 radii for the smoothed power
u = bump(2.0, 1.0)
radii = np.linspace(0.02, 1.2, 50)
for t in (0.5, 0.1):
    rep = check_cordoba(u, 3, 0.5, t, 2.0, radii)
    print(f"t={t}: smallest normalized margin {rep.min_normalized:.3e}, passes={rep.passes}")

# %% The identity in full space and the exterior contribution lost on the ball
u = bump(2.0, 0.8)
for t in (0.5, 0.1, 0.02):
    p = FracParams(3, 0.5, 1.0, 2.0)
    full = check_pohozaev_id(p, u, t)
    ball = check_pohozaev_id(p, u, t, PohozaevSpec(integration_domain_for_B="omega"))
    print(f"t={t:5}: residual {full.residual:.1e}  exterior defect {ball.exterior_defect:.6e}")
