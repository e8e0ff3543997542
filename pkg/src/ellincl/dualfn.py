"""The scalar concave dual function of the ball-inclusion problem.

For a normalized problem with eigenvalues ``lam`` and rotated center ``c_bar``
the dual function and its derivatives are::

    ell(b)   = -b - sum_i c_bar_i^2 lam_i b / (lam_i b - 1)
    ell'(b)  = -1 + sum_i c_bar_i^2 lam_i / (lam_i b - 1)^2
    ell''(b) = -2 sum_i c_bar_i^2 lam_i^2 / (lam_i b - 1)^3

with the sums restricted to the support of ``c_bar``. The domain starts at
``1 / lam_min`` and excludes that point when the center has a component
along a smallest-eigenvalue direction.
"""
from typing import NamedTuple

import numpy as np

from .errors import OutOfDomain

# distance to the pole below which an open-domain evaluation is refused
POLE_GUARD = 1e-13


class DualSample(NamedTuple):
    beta: float
    value: float
    dvalue: float
    ddvalue: float


class DualContext:
    """Evaluation context for ``ell`` built from a :class:`NormalizedProblem`.

    ``interval_lo`` is ``1 / lam_min`` and ``interval_hi`` is
    ``1 - |c_tilde|^2``; the latter may lie below the former, which means the
    inclusion fails outright.
    """

    def __init__(self, problem):
        self.problem = problem
        self.interval_lo = 1.0 / problem.lambda_min
        self.interval_hi = 1.0 - float(problem.c_tilde @ problem.c_tilde)
        self.lower_open = problem.lower_open
        self._lam = problem.lam[problem.support]
        self._w = problem.c_bar_sq
        self._wlam = self._w * self._lam

    @property
    def support_size(self):
        return self._lam.shape[0]

    @property
    def interval_empty(self):
        lo, hi = self.interval_lo, self.interval_hi
        return hi < lo or (hi == lo and self.lower_open)

    def check(self, beta):
        lo = self.interval_lo
        if not beta >= lo:
            raise OutOfDomain(f"beta={beta!r} is below the domain start {lo!r}")
        if self.lower_open and beta - lo <= POLE_GUARD * max(1.0, lo):
            raise OutOfDomain(f"beta={beta!r} is at the excluded pole {lo!r}")

    def sample(self, beta):
        """Value and first two derivatives at ``beta``, sharing the ``lam * beta - 1`` terms."""
        self.check(beta)
        if self.support_size == 0:
            return DualSample(beta, -beta, -1.0, 0.0)
        t = self._lam * beta - 1.0
        q = self._wlam / t
        r = q / t
        return DualSample(
            beta,
            -beta - beta * float(q.sum()),
            -1.0 + float(r.sum()),
            -2.0 * float((r * self._lam / t).sum()),
        )

    def value(self, beta):
        self.check(beta)
        if self.support_size == 0:
            return -beta
        return -beta - beta * float((self._wlam / (self._lam * beta - 1.0)).sum())

    def slope(self, beta):
        self.check(beta)
        if self.support_size == 0:
            return -1.0
        t = self._lam * beta - 1.0
        return -1.0 + float((self._wlam / (t * t)).sum())

    def curvature(self, beta):
        self.check(beta)
        if self.support_size == 0:
            return 0.0
        t = self._lam * beta - 1.0
        return -2.0 * float((self._wlam * self._lam / (t * t * t)).sum())

    def lower_start(self):
        """Smallest point of the domain the maximizer can be shown to lie right of.

        On a closed domain this is ``interval_lo`` itself. On an open domain a
        single term of ``ell'`` already exceeds 1 whenever
        ``lam_i b - 1 < |c_bar_i| sqrt(lam_i)``, so the maximizer satisfies
        ``b >= (1 + |c_bar_i| sqrt(lam_i)) / lam_i`` for every support index.
        """
        lo = self.interval_lo
        if not self.lower_open:
            return lo
        bounds = (1.0 + np.sqrt(self._w * self._lam)) / self._lam
        start = max(lo, float(bounds.max()))
        # keep clear of the pole guard
        return max(start, lo + 2.0 * POLE_GUARD * max(1.0, lo))

    def __repr__(self):
        return (
            f"DualContext(n={self.problem.dim}, support={self.support_size}, "
            f"lo={self.interval_lo!r}, hi={self.interval_hi!r}, lower_open={self.lower_open})"
        )


def ell(ctx, beta):
    return ctx.value(beta)


def ell_prime(ctx, beta):
    return ctx.slope(beta)


def ell_second(ctx, beta):
    return ctx.curvature(beta)


def lagrangian_minimizer(ctx, beta):
    """Minimizer ``x*(beta) = (beta P - I)^{-1} beta P c`` in eigen-coordinates mapped back.

    Valid for ``beta`` strictly inside the domain.
    """
    p = ctx.problem
    ctx.check(beta)
    t = p.lam * beta - 1.0
    xbar = np.zeros(p.dim)
    s = p.support
    xbar[s] = beta * p.lam[s] * p.c_bar[s] / t[s]
    return p.eigvectors @ xbar

