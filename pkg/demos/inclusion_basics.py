"""
=====================================
Is one ellipsoid inside another?
=====================================

A walk through ``decide`` on a few hand-checkable pairs, then a look at the
scalar dual function that drives it.
"""

# %%
# Ellipsoids are ``{x : (x - c)^T P (x - c) <= 1}``
# --------------------------------------------------

import numpy as np

from ellincl import DualContext, Ellipsoid, decide, normalize

ball = Ellipsoid.unit_ball(2)
E = Ellipsoid([0.0, 2.0 / 3.0], np.diag([2.0, 9.0]))
print("semi-axes of E:", 1 / np.sqrt(np.diag(E.shape)))

# %%
# The verdict comes with the rule that settled it. Cheap pretests run first
# (center membership, the shape ordering, an empty search interval), and only
# then the bisection.

for name, (A, B) in {
    "concentric, smaller": (Ellipsoid([0, 0], 2 * np.eye(2)), ball),
    "center outside": (Ellipsoid([2, 0], np.eye(2)), ball),
    "thin, off-center": (Ellipsoid([0, 0.9], np.diag([4.0, 100.0])), ball),
    "E vs unit disc": (E, ball),
    "identical": (ball, ball),
}.items():
    v = decide(A, B)
    print(f"{name:22s} -> {v.relation.value:13s} rule={v.rule} exit={v.exit}")

# %%
# The dual function
# -----------------
#
# After mapping the container onto the unit ball the problem lives on the
# interval ``[1 / lam_min, 1 - |c|^2]``. The supremum of the concave function
# below is compared with -1. For E it peaks at the left end with value
# -15/14, so E sticks out of the disc.

ctx = DualContext(normalize(E, ball))
print("interval:", ctx.interval_lo, ctx.interval_hi)
for beta in np.linspace(ctx.interval_lo, ctx.interval_hi, 5):
    s = ctx.sample(beta)
    print(f"beta={beta:.3f}  ell={s.value:+.5f}  ell'={s.dvalue:+.4f}  ell''={s.ddvalue:+.4f}")

# %%
# Check against the boundary itself: the farthest point of E from the origin.

theta = np.linspace(0, 2 * np.pi, 200001)
X = E.center + np.stack([np.cos(theta) / np.sqrt(2), np.sin(theta) / 3], axis=1)
print("max |x|^2 on the boundary:", (X**2).sum(1).max(), " 15/14 =", 15 / 14)
