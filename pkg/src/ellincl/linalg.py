"""Dense symmetric kernels: Cholesky, symmetric eigendecomposition, triangular solves.

The default eigensolver backend is LAPACK (through numpy).  A self-contained
Householder tridiagonalization followed by implicit-shift QL iterations is
available with ``method="householder"``; it is used to cross-check the LAPACK
path and is adequate for small problems.
"""
import math
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotPositiveDefinite,
    NotSymmetric,
    SingularFactor,
)

SYMMETRY_RTOL = 1e-8
_EPS = np.finfo(float).eps


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_symmetric(M, rtol=SYMMETRY_RTOL):
    """Return ``(M + M.T) / 2`` as a float array after validating near-symmetry."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - M.T)) > rtol * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    return 0.5 * (M + M.T)


def positivity_threshold(M):
    """Smallest admissible Cholesky pivot for ``M``: n * eps * max diagonal entry."""
    n = M.shape[0]
    return n * _EPS * max(float(np.max(np.diag(M))), 0.0)


def cholesky(M):
    """Lower-triangular ``L`` with ``L @ L.T == M``.

    Raises
    ------
    NotPositiveDefinite
        If ``M`` is not positive definite or a pivot falls below
        :func:`positivity_threshold`.
    """
    M = as_symmetric(M)
    if np.any(np.diag(M) <= 0.0):
        raise NotPositiveDefinite("non-positive diagonal entry")
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.diag(L) ** 2
    if np.min(pivots) <= positivity_threshold(M):
        raise NotPositiveDefinite("Cholesky pivot below positivity threshold")
    return L


def solve_lower_triangular(L, B, trans=False):
    """Solve ``L X = B`` (or ``L.T X = B`` when ``trans``) for lower-triangular ``L``."""
    L = np.asarray(L, dtype=float)
    B = np.asarray(B, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DimensionMismatch(f"factor must be square, got shape {L.shape}")
    if B.shape[0] != L.shape[0]:
        raise DimensionMismatch(f"right-hand side has {B.shape[0]} rows, factor has {L.shape[0]}")
    diag = np.diag(L)
    if np.min(diag) <= L.shape[0] * _EPS * np.max(np.abs(diag)) or np.min(diag) <= 0.0:
        raise SingularFactor("triangular factor has a non-positive or negligible diagonal entry")
    return scipy.linalg.solve_triangular(L, B, lower=True, trans=1 if trans else 0, check_finite=False)


def sym_eig(M, method="lapack"):
    """Eigendecomposition ``M = V diag(w) V.T`` of a symmetric matrix, ``w`` ascending.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Symmetric matrix. It is symmetrized before factorization.
    method : {"lapack", "householder"}
        Backend. ``"householder"`` runs the in-package tridiagonalization and
        implicit QL iteration.
    """
    M = as_symmetric(M)
    if method == "lapack":
        try:
            w, V = np.linalg.eigh(M)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(str(exc)) from None
        return SpectralDecomposition(w, V)
    if method == "householder":
        d, e, Q = tridiagonalize(M)
        w, V = tridiagonal_ql(d, e, Q)
        order = np.argsort(w, kind="stable")
        return SpectralDecomposition(w[order], V[:, order])
    raise ValueError(f"unknown method {method!r}")


def tridiagonalize(M):
    """Householder reduction ``M = Q T Q.T``.

    Returns the diagonal ``d``, the sub-diagonal ``e`` (length n, last entry 0)
    of ``T`` and the orthogonal ``Q``.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    Q = np.eye(n)
    for k in range(n - 2):
        x = A[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        alpha = -math.copysign(xnorm, x[0])
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        sub = A[k + 1:, k + 1:]
        p = sub @ v
        w = p - (v @ p) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = A[k, k + 1] = alpha
        Qs = Q[:, k + 1:]
        Qs -= 2.0 * np.outer(Qs @ v, v)
    d = np.diag(A).copy()
    e = np.zeros(n)
    e[:-1] = np.diag(A, -1)
    return d, e, Q


def tridiagonal_ql(d, e, Z, max_sweeps=60):
    """Implicit-shift QL iteration on a symmetric tridiagonal matrix.

    ``e[i]`` couples ``d[i]`` and ``d[i + 1]``. Rotations are accumulated into
    the columns of ``Z`` (pass the tridiagonalizing ``Q`` to get eigenvectors of
    the original matrix). Eigenvalues are returned unsorted.
    """
    d = np.array(d, dtype=float)
    e = np.array(e, dtype=float)
    Z = np.array(Z, dtype=float)
    n = d.shape[0]
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NoConvergence(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = Z[:, i].copy()
                Z[:, i] = c * zi - s * Z[:, i + 1]
                Z[:, i + 1] = s * zi + c * Z[:, i + 1]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, Z
