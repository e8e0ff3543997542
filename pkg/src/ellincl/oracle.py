"""Independent baselines: boundary sampling, the 1-D closed form and the LMI matrix.

Nothing here goes through the dual function. The boundary search works
directly on ``max |x|^2`` over the boundary of the transformed ellipsoid.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.stats import norm, qmc

from .errors import NonPositiveLambda
from .linalg import sym_eig


@dataclass(frozen=True)
class OracleReport:
    """Best boundary point found.

    ``argmax_point`` is in the original coordinates (on the boundary of E);
    ``mapped_point`` is its image in the frame where E0 is the unit ball, and
    ``max_sq_norm`` its squared norm.
    """

    max_sq_norm: float
    argmax_point: np.ndarray
    mapped_point: np.ndarray
    resolution: dict


def _normalized_pair(E, E0):
    n = E.dim
    if E0 is None:
        L0, c0 = np.eye(n), np.zeros(n)
    else:
        L0, c0 = np.linalg.cholesky(E0.shape), E0.center
    c_t = L0.T @ (E.center - c0)
    X = scipy.linalg.solve_triangular(L0, E.shape, lower=True)
    P_t = scipy.linalg.solve_triangular(L0, X.T, lower=True)
    return L0, c0, c_t, 0.5 * (P_t + P_t.T)


def sphere_directions(n, samples, seed=0):
    """Scrambled Sobol points pushed onto the unit sphere (nested in ``samples``)."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        u = qmc.Sobol(d=n, scramble=True, seed=seed).random(samples)
    z = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def boundary_max_norm(E, E0=None, samples=1024, seed=0, iterations=400, starts=None):
    """Largest ``|x_tilde|^2`` over the boundary of E in the frame where E0 is the unit ball.

    Boundary points are ``c_tilde + M u`` with ``M = P_tilde^{-1/2}`` and unit
    ``u``. Every sampled direction is improved by the ascent step
    ``u <- M (c_tilde + M u) / |.|``, which never decreases a convex
    objective on the sphere. ``starts`` adds extra directions (in the
    ``u`` parametrization).

    ``samples`` should be at least ``2 ** n`` for small n; in 1-D the two
    endpoints are enumerated and ``samples`` is ignored.
    """
    n = E.dim
    L0, c0, c_t, P_t = _normalized_pair(E, E0)
    w, V = np.linalg.eigh(P_t)
    M = (V / np.sqrt(w)) @ V.T
    U = sphere_directions(n, samples, seed)
    if starts is not None:
        U = np.vstack([U, np.atleast_2d(starts)])
    if n > 1:
        for _ in range(iterations):
            G = (c_t + U @ M) @ M
            U = G / np.linalg.norm(G, axis=1, keepdims=True)
    X = c_t + U @ M
    f = np.einsum("ij,ij->i", X, X)
    k = int(np.argmax(f))
    x_t = X[k]
    x = scipy.linalg.solve_triangular(L0, x_t, lower=True, trans=1) + c0
    return OracleReport(
        max_sq_norm=float(f[k]),
        argmax_point=x,
        mapped_point=x_t,
        resolution={"samples": int(U.shape[0]), "iterations": iterations if n > 1 else 0, "seed": seed},
    )


def direction_for_point(E, x, E0=None):
    """The ``u`` parameter (see :func:`boundary_max_norm`) of the boundary point nearest in direction to ``x``."""
    L0, c0, c_t, P_t = _normalized_pair(E, E0)
    x_t = L0.T @ (np.asarray(x, dtype=float) - c0)
    w, V = np.linalg.eigh(P_t)
    u = (V * np.sqrt(w)) @ V.T @ (x_t - c_t)
    nrm = np.linalg.norm(u)
    return u / nrm if nrm > 0 else np.eye(E.dim)[0]


def gamma_closed_form_1d(c, lam):
    """Exact minimal factor ``(|c| + lam^{-1/2})^2`` for an interval against ``[-1, 1]``."""
    if not lam > 0:
        raise NonPositiveLambda(f"lambda must be positive, got {lam!r}")
    return (abs(c) + 1.0 / math.sqrt(lam)) ** 2


def lmi_matrix(c, P, beta):
    """The (n+1)x(n+1) matrix whose PSD-ness at some ``beta >= 0`` certifies ``E(c, P) ⊆ B(0, 1)``."""
    c = np.asarray(c, dtype=float)
    P = np.asarray(P, dtype=float)
    n = c.shape[0]
    Pc = P @ c
    F = np.empty((n + 1, n + 1))
    F[:n, :n] = beta * P - np.eye(n)
    F[:n, n] = F[n, :n] = -beta * Pc
    F[n, n] = beta * (c @ Pc - 1.0) + 1.0
    return F


def psd_cross_check(E, beta, E0=None, tol=1e-9):
    """Whether the LMI matrix of the normalized pair is PSD (min eigenvalue >= -tol) at ``beta``."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _, _, c_t, P_t = _normalized_pair(E, E0)
    F = lmi_matrix(c_t, P_t, beta)
    return bool(sym_eig(F).eigenvalues[0] >= -tol)
