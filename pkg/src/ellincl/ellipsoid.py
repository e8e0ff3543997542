"""Ellipsoids ``{x : (x - c)^T P (x - c) <= 1}`` and the map onto the unit ball."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .linalg import as_symmetric, cholesky, solve_lower_triangular, sym_eig

MEMBERSHIP_TOL = 1e-10
SUPPORT_RTOL = 1e-12
# eigenvalues closer than this (relative) to the smallest one are treated as tied with it
EIG_TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Ellipsoid with ``center`` c and positive definite ``shape`` P.

    The shape is symmetrized and its Cholesky factor is computed on
    construction, so an invalid shape fails early with
    :class:`~ellincl.errors.NotPositiveDefinite`.
    """

    center: np.ndarray
    shape: np.ndarray
    factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        P = np.atleast_2d(np.asarray(self.shape, dtype=float))
        if c.ndim != 1:
            raise DimensionMismatch(f"center must be a vector, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("center has non-finite entries")
        P = as_symmetric(P)
        if P.shape[0] != c.shape[0]:
            raise DimensionMismatch(f"center has length {c.shape[0]} but shape is {P.shape}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", P)
        object.__setattr__(self, "factor", cholesky(P))

    @classmethod
    def ball(cls, center, radius=1.0):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        return cls(center, np.eye(center.shape[0]) / radius**2)

    @classmethod
    def unit_ball(cls, n):
        return cls(np.zeros(n), np.eye(n))

    @property
    def dim(self):
        return self.center.shape[0]

    def quadratic(self, x):
        """``(x - c)^T P (x - c)``; ``x`` may be a single point or an array of row points."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dim,):
            raise DimensionMismatch(f"point has shape {x.shape}, ellipsoid has dimension {self.dim}")
        d = x - self.center
        return np.einsum("...i,ij,...j->...", d, self.shape, d)

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return bool(self.quadratic(x) <= 1.0 + tol)

    def rescaled(self, gamma):
        """Same center, shape divided by ``gamma`` (semi-axes multiplied by sqrt(gamma))."""
        return Ellipsoid(self.center, self.shape / gamma)

    def transformed(self, A, b=None):
        """Image ``{A x + b : x in self}`` under an invertible linear map ``A``."""
        A = np.asarray(A, dtype=float)
        b = np.zeros(self.dim) if b is None else np.asarray(b, dtype=float)
        Ainv = np.linalg.inv(A)
        return Ellipsoid(A @ self.center + b, Ainv.T @ self.shape @ Ainv)

    def __eq__(self, other):
        if not isinstance(other, Ellipsoid):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.center, other.center)
            and np.array_equal(self.shape, other.shape)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class NormalizedProblem:
    """Spectral data of the pair ``(c_tilde, P_tilde)`` obtained by mapping E0 onto the unit ball.

    ``lam`` and the columns of ``eigvectors`` are the ascending eigenpairs of
    ``P_tilde``; ``c_bar = eigvectors.T @ c_tilde``. Only indices in ``support``
    contribute to the dual function, and ``c_bar_sq`` holds their squared
    components. ``factor`` and ``origin`` (the Cholesky factor and center of
    E0) allow mapping points back to the original coordinates.
    """

    dim: int
    c_tilde: np.ndarray
    lam: np.ndarray
    c_bar: np.ndarray
    support: np.ndarray
    c_bar_sq: np.ndarray
    lambda_min: float
    lower_open: bool
    eigvectors: np.ndarray
    factor: np.ndarray
    origin: np.ndarray

    @classmethod
    def from_spectrum(cls, c_tilde, lam, V, factor=None, origin=None):
        c_tilde = np.asarray(c_tilde, dtype=float)
        lam = np.asarray(lam, dtype=float)
        n = lam.shape[0]
        c_bar = V.T @ c_tilde
        threshold = SUPPORT_RTOL * (1.0 + np.linalg.norm(c_bar))
        support = np.flatnonzero(np.abs(c_bar) > threshold)
        lambda_min = float(lam[0])
        tied = lam[support] <= lambda_min * (1.0 + EIG_TIE_RTOL)
        return cls(
            dim=n,
            c_tilde=c_tilde,
            lam=lam,
            c_bar=c_bar,
            support=support,
            c_bar_sq=c_bar[support] ** 2,
            lambda_min=lambda_min,
            lower_open=bool(np.any(tied)),
            eigvectors=V,
            factor=np.eye(n) if factor is None else factor,
            origin=np.zeros(n) if origin is None else origin,
        )

    @classmethod
    def from_diagonal(cls, c_bar, lam):
        """Problem whose normalized shape is already ``diag(lam)`` (ascending)."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        order = np.argsort(lam, kind="stable")
        c_bar = np.atleast_1d(np.asarray(c_bar, dtype=float))[order]
        return cls.from_spectrum(c_bar, lam[order], np.eye(lam.shape[0]))

    @property
    def p_tilde(self):
        V = self.eigvectors
        return (V * self.lam) @ V.T

    def to_original(self, x_tilde):
        """Inverse change of variables ``x = L0^{-T} x_tilde + c0``."""
        x_tilde = np.asarray(x_tilde, dtype=float)
        return solve_lower_triangular(self.factor, x_tilde, trans=True) + self.origin


class Frame:
    """Change of variables ``x -> L0^T (x - c0)`` mapping ``E0`` onto the unit ball.

    Build it once per container ellipsoid and call :meth:`normalize` for each
    candidate; the Cholesky factor is shared.
    """

    def __init__(self, E0):
        self.E0 = E0
        self.factor = E0.factor
        self.origin = E0.center

    def to_normalized(self, x):
        return self.factor.T @ (np.asarray(x, dtype=float) - self.origin)

    def to_original(self, x_tilde):
        return solve_lower_triangular(self.factor, np.asarray(x_tilde, dtype=float), trans=True) + self.origin

    def transform(self, E):
        """Return ``(c_tilde, P_tilde)`` for ``E`` using two triangular solves."""
        if E.dim != self.E0.dim:
            raise DimensionMismatch(f"dimensions differ: {E.dim} vs {self.E0.dim}")
        L = self.factor
        c_tilde = L.T @ (E.center - self.origin)
        X = solve_lower_triangular(L, E.shape)  # L^{-1} P
        P_tilde = solve_lower_triangular(L, X.T)  # L^{-1} P L^{-T}
        return c_tilde, 0.5 * (P_tilde + P_tilde.T)

    def normalize(self, E, spectral=None, method="lapack"):
        """Normalized problem for ``E``.

        ``spectral`` may supply a precomputed ``(eigenvalues, eigenvectors)``
        of the normalized shape, skipping the eigendecomposition.
        """
        if spectral is None:
            c_tilde, P_tilde = self.transform(E)
            lam, V = sym_eig(P_tilde, method=method)
        else:
            c_tilde = self.factor.T @ (E.center - self.origin)
            lam, V = spectral
        return NormalizedProblem.from_spectrum(c_tilde, lam, V, self.factor, self.origin)


def contains(E, x, tol=MEMBERSHIP_TOL):
    """True iff ``(x - c)^T P (x - c) <= 1 + tol``."""
    return E.contains(x, tol)


def normalize(E, E0, method="lapack"):
    """Map the pair ``(E, E0)`` to the equivalent problem ``E(c_tilde, P_tilde)`` vs the unit ball."""
    return Frame(E0).normalize(E, method=method)
