"""Deciding ``E ⊆ E0``, minimal scaling factors, contact points and covering level sets.

The decision procedure maps ``E0`` onto the unit ball, diagonalizes the
transformed shape and studies the concave dual function on the compact
interval ``[1 / lam_min, 1 - |c_tilde|^2]``. Its supremum compared to ``-1``
separates strict inclusion, touching and non-inclusion.
"""
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dualfn import DualContext
from .ellipsoid import Ellipsoid, Frame, NormalizedProblem
from .errors import DimensionMismatch, NoConvergence, NoRealRoot, NotTouching

DEFAULT_EPS = 1e-12
DEFAULT_TOL = 1e-10
# slack on "P >= P0" measured on the smallest normalized eigenvalue
SHAPE_TOL = 1e-9
CONCENTRIC_TOL = 1e-12
# relative gap under which an eigenvalue joins the smallest one's eigenspace for contact points
NULLSPACE_RTOL = 1e-9


class Relation(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    TOUCHING = "touching_eps"


@dataclass(frozen=True)
class InclusionVerdict:
    """Outcome of an inclusion test.

    ``rule`` names what settled it (``"pretest:center"``, ``"pretest:shape"``,
    ``"pretest:concentric"``, ``"pretest:concentric_touching"``,
    ``"pretest:interval"`` or ``"bisection"``); for the bisection ``exit``
    records which test fired. ``bracket`` is the final ``[l, u]`` on the
    multiplier when the bisection ran.
    """

    relation: Relation
    rule: str
    exit: str = ""
    iterations: int = 0
    bracket: tuple = None

    @property
    def inside(self):
        return self.relation is Relation.INSIDE

    @property
    def outside(self):
        return self.relation is Relation.OUTSIDE

    @property
    def touching(self):
        return self.relation is Relation.TOUCHING


@dataclass(frozen=True)
class ScalingResult:
    beta_star: float
    ell_star: float
    at_lower_boundary: bool
    iterations: int = 0

    @property
    def gamma(self):
        return -self.ell_star


@dataclass(frozen=True)
class ContactPointSet:
    points: list
    degenerate: bool
    nullspace_dim: int
    scaling: ScalingResult = None

    def residuals(self, E, E0):
        """Per point, ``(q_E(x) - 1, q_E0(x) - 1)`` for the two boundary quadratics."""
        return [(float(E.quadratic(x) - 1.0), float(E0.quadratic(x) - 1.0)) for x in self.points]


@dataclass(frozen=True)
class CoverResult:
    gamma: float
    argmax_index: int
    per_ellipsoid_gammas: list
    evaluations: int = 0
    scalings: list = field(default_factory=list, repr=False)


def _check_pair(E, E0):
    if E.dim != E0.dim:
        raise DimensionMismatch(f"dimensions differ: {E.dim} vs {E0.dim}")


def _center_test(E, E0):
    if E0.quadratic(E.center) > 1.0:
        return InclusionVerdict(Relation.OUTSIDE, "pretest:center")
    return None


def _spectral_tests(problem):
    lam_min = problem.lambda_min
    if lam_min < 1.0 - SHAPE_TOL:
        return InclusionVerdict(Relation.OUTSIDE, "pretest:shape")
    if np.linalg.norm(problem.c_tilde) <= CONCENTRIC_TOL:
        if lam_min > 1.0 + SHAPE_TOL:
            return InclusionVerdict(Relation.INSIDE, "pretest:concentric")
        b = 1.0 / lam_min
        return InclusionVerdict(Relation.TOUCHING, "pretest:concentric_touching", bracket=(b, b))
    hi = 1.0 - float(problem.c_tilde @ problem.c_tilde)
    if hi < 1.0 / lam_min:
        return InclusionVerdict(Relation.OUTSIDE, "pretest:interval")
    return None


def pretest(E, E0):
    """Cheap sufficient tests; returns a verdict or ``None`` when inconclusive.

    Order: center membership, ``P >= P0`` on the normalized spectrum, the
    concentric case, then emptiness of the search interval.
    """
    _check_pair(E, E0)
    verdict = _center_test(E, E0)
    if verdict is not None:
        return verdict
    return _spectral_tests(Frame(E0).normalize(E))


def decide(E, E0, eps=DEFAULT_EPS, pretests=True):
    """Decide whether ``E`` lies strictly inside ``E0``, outside it, or touches it within ``eps``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    _check_pair(E, E0)
    if pretests:
        verdict = _center_test(E, E0)
        if verdict is not None:
            return verdict
    problem = Frame(E0).normalize(E)
    if pretests:
        verdict = _spectral_tests(problem)
        if verdict is not None:
            return verdict
    return bisect(DualContext(problem), eps)


def bisect(ctx, eps=DEFAULT_EPS):
    """Certified bisection for ``sup ell > -1`` on ``[1 / lam_min, 1 - |c_tilde|^2]``.

    Stops as soon as a midpoint value exceeds ``-1`` (inclusion) or the
    concavity bound ``ell* <= ell(b) - ell''(l) (u - l)^2 / 2`` falls below
    ``-1`` (non-inclusion); otherwise returns a touching verdict once the
    bracket is narrower than ``eps``.
    """

    def verdict(relation, exit, k, lu):
        return InclusionVerdict(relation, "bisection", exit, k, lu)

    lo, hi = ctx.interval_lo, ctx.interval_hi
    if ctx.interval_empty:
        return verdict(Relation.OUTSIDE, "empty_interval", 0, (lo, hi))
    l, u = ctx.lower_start(), hi
    if l >= u:
        # only on an open domain: the maximizer is right of u, where ell < -1
        return verdict(Relation.OUTSIDE, "upper_slope", 0, (l, u))
    sl, su = ctx.sample(l), ctx.sample(u)
    if sl.value > -1.0 or su.value > -1.0:
        return verdict(Relation.INSIDE, "endpoint", 0, (l, u))
    if su.dvalue > 0.0:
        return verdict(Relation.OUTSIDE, "upper_slope", 0, (l, u))
    if sl.dvalue <= 0.0:
        # maximizer sits on the lower end, so ell(l) is the supremum itself
        if sl.value < -1.0:
            return verdict(Relation.OUTSIDE, "lower_boundary", 0, (l, l))
        return verdict(Relation.TOUCHING, "lower_boundary", 0, (l, l))
    k = 0
    while u - l > eps:
        b = 0.5 * (l + u)
        if not l < b < u:
            break
        sb = ctx.sample(b)
        k += 1
        if sb.value > -1.0:
            return verdict(Relation.INSIDE, "midpoint", k, (l, u))
        if sb.value < -1.0 + 0.5 * sl.ddvalue * (u - l) ** 2:
            return verdict(Relation.OUTSIDE, "certificate", k, (l, u))
        if sb.dvalue < 0.0:
            u, su = b, sb
        elif sb.dvalue > 0.0:
            l, sl = b, sb
        else:
            relation = Relation.OUTSIDE if sb.value < -1.0 else Relation.TOUCHING
            return verdict(relation, "stationary", k, (b, b))
    return verdict(Relation.TOUCHING, "eps", k, (l, u))


def maximize_dual(ctx, tol=DEFAULT_TOL, max_iter=500):
    """Maximize ``ell`` over its whole domain (not capped at ``1 - |c_tilde|^2``).

    Safeguarded Newton on ``ell'`` inside a bracket that is grown by doubling
    until ``ell'`` turns negative. Returns the boundary point when ``ell'`` is
    already non-positive at the lower end.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = ctx.lower_start()
    sa = ctx.sample(a)
    if sa.dvalue <= 0.0:
        return ScalingResult(a, sa.value, at_lower_boundary=not ctx.lower_open)
    b = max(2.0 * a, ctx.interval_hi)
    sb = ctx.sample(b)
    while sb.dvalue >= 0.0:
        a, sa = b, sb
        b *= 2.0
        sb = ctx.sample(b)
    # Newton from the left end: ell' is convex and decreasing, so the iterates
    # approach the root monotonically in exact arithmetic.
    x, sx = a, sa
    for k in range(1, max_iter + 1):
        if abs(sx.dvalue) <= tol or b - a <= tol * max(1.0, a):
            return ScalingResult(x, sx.value, False, k)
        if sx.dvalue > 0.0:
            a = x
        else:
            b = x
        step = x - sx.dvalue / sx.ddvalue if sx.ddvalue < 0.0 else math.nan
        x = step if a < step < b else 0.5 * (a + b)
        sx = ctx.sample(x)
    raise NoConvergence("dual maximization exceeded its iteration budget")


def minimal_scaling(E, E0, tol=DEFAULT_TOL):
    """Factor ``gamma`` with ``E`` touching ``E(c0, P0 / gamma)`` from inside."""
    _check_pair(E, E0)
    return maximize_dual(DualContext(Frame(E0).normalize(E)), tol)


def rescaled_pair(E, E0, gamma):
    """The two touching pairs produced by ``gamma``.

    Returns ``(E0_scaled, E_scaled)`` where ``E0_scaled = E(c0, P0 / gamma)``
    must touch ``E`` from outside, and ``E_scaled = E(d, gamma P)`` with
    ``d = gamma^{-1/2} (c - c0) + c0`` must touch ``E0`` from inside.
    """
    d = (E.center - E0.center) / math.sqrt(gamma) + E0.center
    return Ellipsoid(E0.center, E0.shape / gamma), Ellipsoid(d, gamma * E.shape)


def contact_points(E, E0, tol=1e-8, scaling=None):
    """Boundary points shared by ``E`` and ``E0`` when ``E`` touches ``E0`` from inside.

    When the maximizer lies strictly right of ``1 / lam_min`` the contact point
    is unique. Otherwise the stationarity system leaves the smallest
    eigenspace free; one basis direction of it is used and the norm equation
    is solved for the coefficient, giving up to two points.
    """
    _check_pair(E, E0)
    problem = Frame(E0).normalize(E)
    if scaling is None:
        scaling = maximize_dual(DualContext(problem))
    if abs(scaling.ell_star + 1.0) > tol:
        raise NotTouching(f"sup of the dual function is {scaling.ell_star!r}, not -1")
    return _contact_points_normalized(problem, scaling, tol)


def _contact_points_normalized(problem, scaling, tol):
    beta = scaling.beta_star
    lam, V = problem.lam, problem.eigvectors
    s = problem.support
    xbar = np.zeros(problem.dim)
    if not scaling.at_lower_boundary:
        xbar[s] = beta * lam[s] * problem.c_bar[s] / (beta * lam[s] - 1.0)
        return ContactPointSet([problem.to_original(V @ xbar)], False, 0, scaling)

    in_block = lam <= problem.lambda_min * (1.0 + NULLSPACE_RTOL) + NULLSPACE_RTOL
    in_block[s] = False
    block = np.flatnonzero(in_block)
    rest = np.setdiff1d(s, block)
    xbar[rest] = beta * lam[rest] * problem.c_bar[rest] / (beta * lam[rest] - 1.0)
    x_p = V @ xbar
    direction = V[:, block[0]]
    # |x_p + alpha * direction|^2 = 1
    qa = float(direction @ direction)
    qb = float(x_p @ direction)
    qc = float(x_p @ x_p) - 1.0
    disc = qb * qb - qa * qc
    if disc < -tol:
        raise NoRealRoot(f"contact quadratic has negative discriminant {disc!r}")
    root = math.sqrt(max(disc, 0.0))
    alphas = [(-qb + root) / qa] if root == 0.0 else [(-qb + root) / qa, (-qb - root) / qa]
    points = [problem.to_original(x_p + alpha * direction) for alpha in alphas]
    return ContactPointSet(points, True, int(block.shape[0]), scaling)


def _same(A, B, rtol=1e-12):
    scale = max(1.0, float(np.max(np.abs(A))))
    return float(np.max(np.abs(A - B))) <= rtol * scale


def cover(template, ellipsoids, tol=DEFAULT_TOL, exploit_symmetry=True):
    """Smallest ``gamma`` with every ellipsoid inside ``E(c0, P0 / gamma)``.

    The template's Cholesky factor is computed once. Shapes that are positive
    multiples of an already decomposed shape reuse its eigenvectors. With
    ``exploit_symmetry``, an ellipsoid whose center mirrors (about ``c0``) a
    previous one with an equal shape inherits its factor without another
    dual maximization.
    """
    ellipsoids = list(ellipsoids)
    if not ellipsoids:
        raise ValueError("need at least one ellipsoid")
    for E in ellipsoids:
        _check_pair(E, template)
    frame = Frame(template)
    c0 = template.center
    spectra = []  # (shape, eigenvalues, eigenvectors)
    gammas, scalings = [], []
    evaluations = 0
    for i, E in enumerate(ellipsoids):
        twin = None
        if exploit_symmetry:
            offset = E.center - c0
            for j in range(i):
                other = ellipsoids[j]
                if _same(E.shape, other.shape) and (
                    _same(offset, -(other.center - c0)) or _same(offset, other.center - c0)
                ):
                    twin = j
                    break
        if twin is not None:
            gammas.append(gammas[twin])
            scalings.append(scalings[twin])
            continue
        spectral = None
        trace = float(np.trace(E.shape))
        for shape, lam, V in spectra:
            ratio = trace / float(np.trace(shape))
            if _same(E.shape, ratio * shape):
                spectral = (ratio * lam, V)
                break
        problem = frame.normalize(E, spectral=spectral)
        if spectral is None:
            spectra.append((E.shape, problem.lam, problem.eigvectors))
        result = maximize_dual(DualContext(problem), tol)
        evaluations += 1
        gammas.append(result.gamma)
        scalings.append(result)
    k = int(np.argmax(gammas))
    return CoverResult(gammas[k], k, gammas, evaluations, scalings)


def refine_certificate(ctx, bracket, width=1e-13):
    """Shrink a bracket around the maximizer by bisection on ``ell'`` and bound ``sup ell`` from above.

    Used to re-verify non-inclusion certificates: the returned bound is
    ``ell(b) - ell''(l) (u - l)^2 / 2`` at the final bracket.
    """
    l, u = bracket
    sl = ctx.sample(l)
    while u - l > width:
        b = 0.5 * (l + u)
        if not l < b < u:
            break
        sb = ctx.sample(b)
        if sb.dvalue > 0.0:
            l, sl = b, sb
        elif sb.dvalue < 0.0:
            u = b
        else:
            return sb.value
    b = 0.5 * (l + u)
    return ctx.value(b) - 0.5 * sl.ddvalue * (u - l) ** 2


__all__ = [
    "ContactPointSet",
    "CoverResult",
    "InclusionVerdict",
    "NormalizedProblem",
    "Relation",
    "ScalingResult",
    "bisect",
    "contact_points",
    "cover",
    "decide",
    "maximize_dual",
    "minimal_scaling",
    "pretest",
    "refine_certificate",
    "rescaled_pair",
]
