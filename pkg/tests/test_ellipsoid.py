import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_ellipsoid, random_orthogonal
from ellincl import Ellipsoid, Frame, NormalizedProblem, contains, normalize
from ellincl.errors import DimensionMismatch, NotPositiveDefinite

seeds = st.integers(0, 2**32 - 1)


def test_contains_examples(analytic_pair):
    B = Ellipsoid.unit_ball(2)
    assert contains(B, [0.0, 0.0])
    assert not contains(B, [2.0, 0.0])
    E, _ = analytic_pair
    x = np.array([1.0 / np.sqrt(2.0), 2.0 / 3.0])
    assert E.quadratic(x) == pytest.approx(1.0, abs=1e-15)
    assert contains(E, x)
    assert not contains(E, x * [1.001, 1.0])


def test_quadratic_vectorized(rng):
    E = random_ellipsoid(rng, 3)
    X = rng.standard_normal((5, 3))
    np.testing.assert_allclose(E.quadratic(X), [E.quadratic(x) for x in X])


def test_construction_errors():
    with pytest.raises(DimensionMismatch):
        Ellipsoid([0.0, 0.0], np.eye(3))
    with pytest.raises(NotPositiveDefinite):
        Ellipsoid([0.0, 0.0], np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        Ellipsoid([np.inf, 0.0], np.eye(2))
    with pytest.raises(DimensionMismatch):
        Ellipsoid.unit_ball(2).quadratic([1.0, 2.0, 3.0])


def test_rescaled_and_transformed():
    E = Ellipsoid.ball([1.0, 0.0], 2.0)
    np.testing.assert_allclose(E.shape, np.eye(2) / 4.0)
    assert E.rescaled(4.0).contains([5.0, 0.0])
    F = Ellipsoid.unit_ball(2).transformed(np.diag([2.0, 3.0]), [1.0, 1.0])
    np.testing.assert_allclose(F.shape, np.diag([0.25, 1.0 / 9.0]))
    assert F.contains([3.0, 1.0]) and F.contains([1.0, 4.0])
    assert Ellipsoid.unit_ball(2) == Ellipsoid([0, 0], np.eye(2))
    assert Ellipsoid.unit_ball(2) != Ellipsoid.unit_ball(3)


def test_normalize_identity():
    p = normalize(Ellipsoid.unit_ball(3), Ellipsoid.unit_ball(3))
    np.testing.assert_allclose(p.c_tilde, 0.0)
    np.testing.assert_allclose(p.lam, np.ones(3))
    assert p.support.size == 0
    assert not p.lower_open


def test_normalize_against_ball(rng):
    E = random_ellipsoid(rng, 4)
    p = normalize(E, Ellipsoid.unit_ball(4))
    np.testing.assert_allclose(p.c_tilde, E.center, atol=1e-14)
    np.testing.assert_allclose(p.p_tilde, E.shape, atol=1e-12)


def test_normalize_diagonal_hand_case():
    p = normalize(Ellipsoid([1.0, 0.0], np.diag([16.0, 16.0])), Ellipsoid([1.0, 0.0], np.diag([4.0, 4.0])))
    np.testing.assert_allclose(p.c_tilde, 0.0)
    np.testing.assert_allclose(p.lam, [4.0, 4.0])
    assert p.support.size == 0


def test_lower_open_detection():
    # center along the smallest axis: the pole is excluded
    assert NormalizedProblem.from_diagonal([0.3, 0.0], [2.0, 9.0]).lower_open
    assert not NormalizedProblem.from_diagonal([0.0, 0.3], [2.0, 9.0]).lower_open
    # ties with lam_min count as well
    assert NormalizedProblem.from_diagonal([0.0, 0.3], [2.0, 2.0]).lower_open


def test_support_threshold():
    p = NormalizedProblem.from_diagonal([1e-14, 0.5], [1.0, 2.0])
    assert list(p.support) == [1]
    assert not p.lower_open


@given(seeds, st.integers(1, 6))
def test_normalization_equivalence(seed, n):
    rng = np.random.default_rng(seed)
    E, E0 = random_ellipsoid(rng, n), random_ellipsoid(rng, n)
    frame = Frame(E0)
    c_t, P_t = frame.transform(E)
    Et = Ellipsoid(c_t, P_t)
    X = np.vstack([E.center + rng.standard_normal((40, n)) * rng.uniform(0.05, 2.0), E0.center + 0.3 * rng.standard_normal((10, n))])
    for x in X:
        xt = frame.to_normalized(x)
        qE, qt = E.quadratic(x), Et.quadratic(xt)
        assert qt == pytest.approx(qE, rel=1e-9, abs=1e-9)
        assert E0.quadratic(x) == pytest.approx(xt @ xt, rel=1e-9, abs=1e-9)
        np.testing.assert_allclose(frame.to_original(xt), x, atol=1e-9 * (1 + np.abs(x).max()))


@given(seeds, st.integers(2, 6))
def test_rotation_invariance(seed, n):
    rng = np.random.default_rng(seed)
    E, E0 = random_ellipsoid(rng, n), random_ellipsoid(rng, n)
    Q = random_orthogonal(rng, n)
    b = rng.standard_normal(n)
    p1 = normalize(E, E0)
    p2 = normalize(E.transformed(Q, b), E0.transformed(Q, b))
    np.testing.assert_allclose(p1.lam, p2.lam, rtol=1e-9, atol=1e-9)
    # the dual function only sees |c_bar| per eigenvalue
    assert np.linalg.norm(p1.c_tilde) == pytest.approx(np.linalg.norm(p2.c_tilde), rel=1e-9, abs=1e-12)


@given(seeds, st.integers(1, 5))
def test_concentric_support_empty(seed, n):
    rng = np.random.default_rng(seed)
    E0 = random_ellipsoid(rng, n)
    E = Ellipsoid(E0.center.copy(), random_ellipsoid(rng, n).shape)
    assert normalize(E, E0).support.size == 0


def test_householder_backend_matches(rng):
    E, E0 = random_ellipsoid(rng, 6), random_ellipsoid(rng, 6)
    a = normalize(E, E0)
    b = normalize(E, E0, method="householder")
    np.testing.assert_allclose(a.lam, b.lam, rtol=1e-10)
    np.testing.assert_allclose(np.abs(a.c_bar), np.abs(b.c_bar), atol=1e-10)
