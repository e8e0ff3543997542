"""
=========================================
Minimal scaling factor and contact points
=========================================

``minimal_scaling`` returns the factor ``gamma`` for which ``E`` exactly
touches ``E(c0, P0 / gamma)``. Below one E fits with room to spare, above one
the container has to grow.
"""

# %%

import numpy as np

from ellincl import Ellipsoid, contact_points, decide, minimal_scaling, rescaled_pair

ball = Ellipsoid.unit_ball(2)
E = Ellipsoid([0.0, 2.0 / 3.0], np.diag([2.0, 9.0]))
r = minimal_scaling(E, ball)
print(f"gamma = {r.gamma!r}  (15/14 = {15 / 14!r})  beta* = {r.beta_star}  boundary maximizer: {r.at_lower_boundary}")

# %%
# Rescale the container by gamma and the pair touches: the supremum of the
# dual function is -1 up to rounding. A hair smaller and E sticks out; a hair
# larger and E is strictly inside.

touching, shrunk_E = rescaled_pair(E, ball, r.gamma)
print("sup ell after rescaling:", minimal_scaling(E, touching).ell_star)
for f in (1 - 1e-6, 1 + 1e-6):
    print(f"container scaled by {f:.6f} gamma: {decide(E, ball.rescaled(r.gamma * f)).relation.value}")

# %%
# The second pair returned by ``rescaled_pair`` moves and scales E instead,
# keeping the original container.
print("scaled E inside unit disc:", decide(shrunk_E, ball).relation.value)

# %%
# Contact points
# --------------
#
# The maximizer sits on the closed end of the interval here, so the contact
# set is found along the free eigendirection: two mirror points.

cps = contact_points(E, touching)
for x, (a, b) in zip(cps.points, cps.residuals(E, touching)):
    print(f"x = {x}  residuals {a:+.1e} {b:+.1e}")

# %%
# A 1-D case has a unique contact point: [1/3, 1] touches [-1, 1] at +1.

seg = Ellipsoid([2.0 / 3.0], [[9.0]])
print("1-D contact:", contact_points(seg, Ellipsoid.unit_ball(1)).points)

# %%
# Random pairs in higher dimension behave the same way.

rng = np.random.default_rng(1)
n = 6
Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
E0 = Ellipsoid(np.zeros(n), (Q * rng.uniform(0.5, 3, n)) @ Q.T)
E = Ellipsoid(0.3 * rng.standard_normal(n), E0.shape * 2.5)
r = minimal_scaling(E, E0)
cps = contact_points(E, E0.rescaled(r.gamma))
print(f"n={n}: gamma={r.gamma:.6f}, {len(cps.points)} contact point(s), residuals {cps.residuals(E, E0.rescaled(r.gamma))}")
