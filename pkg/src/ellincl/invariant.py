"""Smallest forward-invariant sublevel set of ``v(x) = x^T P x`` under bounded additive disturbances.

For ``dx/dt = A_c x + H w`` with ``A_c = A - B K`` the Lyapunov derivative is

    vdot(x, w) = 2 x^T P A_c x + 2 x^T P H w = -(x - G w)^T S (x - G w) + r(w)

with ``S = -(A_c^T P + P A_c)``, ``G = S^{-1} P H`` and ``r(w) = w^T G^T S G w``,
so ``vdot >= 0`` exactly on the ellipsoid ``E(G w, S / r(w))``. Covering these
ellipsoids (one per polytope vertex) by a level set of ``v`` gives the
invariant set.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .ellipsoid import Ellipsoid
from .errors import DimensionMismatch, ZeroDisturbance
from .inclusion import DEFAULT_TOL, cover
from .linalg import as_symmetric, cholesky


def _matrix(a, name):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be a matrix")
    return a


@dataclass(frozen=True, eq=False)
class DisturbedSystem:
    """Closed-loop LTI system ``dx/dt = (A - B K) x + H w`` with ``w`` in ``co(W_vertices)``."""

    A: np.ndarray
    B: np.ndarray
    H: np.ndarray
    P: np.ndarray
    K: np.ndarray
    W_vertices: list
    S: np.ndarray = field(init=False, repr=False)
    S_factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A, B, H = _matrix(self.A, "A"), _matrix(self.B, "B"), _matrix(self.H, "H")
        P, K = as_symmetric(self.P), _matrix(self.K, "K")
        n = A.shape[0]
        if A.shape != (n, n) or B.shape[0] != n or H.shape[0] != n or P.shape != (n, n):
            raise DimensionMismatch("A, B, H and P must share the state dimension")
        if K.shape != (B.shape[1], n):
            raise DimensionMismatch(f"K must have shape {(B.shape[1], n)}, got {K.shape}")
        W = [np.atleast_1d(np.asarray(w, dtype=float)) for w in self.W_vertices]
        if not W:
            raise ValueError("the disturbance polytope needs at least one vertex")
        if any(w.shape != (H.shape[1],) for w in W):
            raise DimensionMismatch(f"disturbance vertices must have length {H.shape[1]}")
        for name, value in (("A", A), ("B", B), ("H", H), ("P", P), ("K", K), ("W_vertices", W)):
            object.__setattr__(self, name, value)
        Ac = A - B @ K
        S = as_symmetric(-(Ac.T @ P + P @ Ac))
        object.__setattr__(self, "S", S)
        # raises NotPositiveDefinite when P is not a Lyapunov matrix for A_c
        object.__setattr__(self, "S_factor", cholesky(S))

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def closed_loop(self):
        return self.A - self.B @ self.K

    @property
    def gain(self):
        """``G = S^{-1} P H`` through Cholesky solves of S."""
        return scipy.linalg.cho_solve((self.S_factor, True), self.P @ self.H)

    def v(self, x):
        x = np.asarray(x, dtype=float)
        return np.einsum("...i,ij,...j->...", x, self.P, x)

    def vdot(self, x, w):
        x = np.asarray(x, dtype=float)
        w = np.atleast_1d(np.asarray(w, dtype=float))
        return 2.0 * (x @ self.P @ self.closed_loop @ x) + 2.0 * (x @ self.P @ self.H @ w)

    def rhs(self, x, w):
        return self.closed_loop @ x + self.H @ np.atleast_1d(w)


@dataclass(frozen=True)
class ViolationEllipsoid:
    ellipsoid: Ellipsoid
    w: np.ndarray
    r: float


def violation_ellipsoid(sys, w):
    """Region ``E(G w, S / r(w))`` where ``vdot(., w) >= 0``."""
    w = np.atleast_1d(np.asarray(w, dtype=float))
    G = sys.gain
    center = G @ w
    r = float(center @ sys.S @ center)
    if not r > 0.0:
        raise ZeroDisturbance("the disturbance produces no violation region (r(w) = 0)")
    return ViolationEllipsoid(Ellipsoid(center, sys.S / r), w, r)


def invariant_level(sys, tol=DEFAULT_TOL, exploit_symmetry=True):
    """Smallest ``gamma`` such that ``{x : v(x) <= gamma}`` contains every vertex violation region.

    Vertices with ``r(w) = 0`` contribute nothing and are skipped.
    """
    regions = []
    for w in sys.W_vertices:
        try:
            regions.append(violation_ellipsoid(sys, w))
        except ZeroDisturbance:
            continue
    if not regions:
        raise ZeroDisturbance("every disturbance vertex is zero")
    template = Ellipsoid(np.zeros(sys.n), sys.P)
    return cover(template, [b.ellipsoid for b in regions], tol, exploit_symmetry)


@dataclass(frozen=True)
class SimulationCheck:
    times: np.ndarray
    states: np.ndarray
    disturbances: np.ndarray
    values: np.ndarray
    ok: bool
    violations: int


def simulate_check(
    sys,
    gamma,
    x0,
    horizon=30.0,
    dt=1e-3,
    disturbance_seed=0,
    hold=0.5,
    rtol=1e-9,
    sampling="hull",
):
    """Integrate ``dx/dt = A_c x + H w(t)`` with RK4 and audit the Lyapunov decrease outside ``v <= gamma``.

    ``w`` is piecewise constant, redrawn every ``hold`` time units as a
    uniformly random convex combination of the polytope vertices
    (``sampling="hull"``) or as a random vertex (``sampling="vertices"``,
    which reaches the extreme disturbances). A step is a
    violation when it starts with ``v >= gamma`` and ``v`` grows by more than
    ``rtol * v`` over the step.
    """
    if sampling not in ("hull", "vertices"):
        raise ValueError(f"unknown sampling {sampling!r}")
    rng = np.random.default_rng(disturbance_seed)
    steps = int(round(horizon / dt))
    per_hold = max(1, int(round(hold / dt)))
    Wv = np.array(sys.W_vertices)
    x = np.asarray(x0, dtype=float).copy()
    times = np.arange(steps + 1) * dt
    states = np.empty((steps + 1, sys.n))
    ws = np.empty((steps, Wv.shape[1]))
    states[0] = x
    w = Wv[0]
    for k in range(steps):
        if k % per_hold == 0:
            if sampling == "hull":
                w = rng.dirichlet(np.ones(len(Wv))) @ Wv
            else:
                w = Wv[rng.integers(len(Wv))]
        ws[k] = w
        k1 = sys.rhs(x, w)
        k2 = sys.rhs(x + 0.5 * dt * k1, w)
        k3 = sys.rhs(x + 0.5 * dt * k2, w)
        k4 = sys.rhs(x + dt * k3, w)
        x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[k + 1] = x
    values = sys.v(states)
    start, end = values[:-1], values[1:]
    bad = (start >= gamma) & (end - start > rtol * start)
    violations = int(bad.sum())
    return SimulationCheck(times, states, ws, values, violations == 0, violations)
