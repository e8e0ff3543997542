"""
================================================
Invariant level set of a disturbed linear system
================================================

A two-state system under LQR feedback with an additive scalar disturbance
``w`` in ``[-0.5, 0.5]``. For each disturbance vertex the Lyapunov function
``v = x^T P x`` fails to decrease on an ellipsoid; the smallest level set of
``v`` covering those ellipsoids is forward invariant.
"""

# %%

import numpy as np

from ellincl import Ellipsoid, contact_points, example_system, invariant_level, rescaled_pair, simulate_check
from ellincl.invariant import violation_ellipsoid

system = example_system()
print("closed-loop eigenvalues:", np.linalg.eigvals(system.closed_loop))
level = invariant_level(system)
print("gamma =", level.gamma, "| per vertex:", level.per_ellipsoid_gammas, "| maximizations:", level.evaluations)

# %%
# The binding point: where the violation region touches ``v = gamma``.

B = violation_ellipsoid(system, [0.5]).ellipsoid
V, _ = rescaled_pair(B, Ellipsoid(np.zeros(2), system.P), level.gamma)
xbar = contact_points(B, V).points[0]
print("contact point", xbar, "v =", system.v(xbar), "vdot at w=0.5:", system.vdot(xbar, [0.5]))

# %%
# A trajectory from (-1, -1) with a random piecewise-constant disturbance
# never sees v increase while above the level.

sim = simulate_check(system, level.gamma, [-1.0, -1.0], disturbance_seed=0)
print("violations:", sim.violations, "| v(0) =", sim.values[0], "| final v =", sim.values[-1])
for t in (0, 1, 2, 5, 10, 30):
    k = int(t / 1e-3)
    print(f"t={t:>4}: x={np.round(sim.states[k], 4)}  v={sim.values[k]:.4f}")

# %%
# Halving the level breaks it: near the contact point, with the disturbance
# held at its extremes, v climbs above gamma / 2.

for seed in range(10):
    half = simulate_check(system, level.gamma / 2, 0.9 * xbar, horizon=3.0, disturbance_seed=seed, sampling="vertices")
    if not half.ok:
        print(f"seed {seed}: {half.violations} steps where v grows above gamma/2")
        break
