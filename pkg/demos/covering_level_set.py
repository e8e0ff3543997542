"""
===========================
Covering several ellipsoids
===========================

``cover`` finds the smallest level set of a template ellipsoid that contains
a whole family. The template is factored once; shapes that are multiples of
each other share one eigendecomposition, and mirror images about the
template center are not solved twice.
"""

# %%

import numpy as np

from ellincl import Ellipsoid, cover, decide

template = Ellipsoid([0.0, 0.0], np.array([[2.0, 0.5], [0.5, 1.0]]))
S = np.array([[30.0, 4.0], [4.0, 10.0]])
family = [
    Ellipsoid([0.4, 0.1], S),
    Ellipsoid([-0.4, -0.1], S),  # mirror of the first
    Ellipsoid([0.0, 0.6], 3.0 * S),  # same shape up to a factor
    Ellipsoid([0.2, -0.5], 0.5 * S),
]
r = cover(template, family)
print("gamma:", r.gamma, "from member", r.argmax_index)
print("per member:", np.round(r.per_ellipsoid_gammas, 6))
print("dual maximizations:", r.evaluations, "of", len(family))

# %%
# Every member sits inside the covering level set.
level = template.rescaled(r.gamma * (1 + 1e-9))
print([decide(E, level).relation.value for E in family])
