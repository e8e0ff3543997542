import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellincl import (
    DisturbedSystem,
    Ellipsoid,
    contact_points,
    decide,
    example_system,
    invariant_level,
    rescaled_pair,
    simulate_check,
    violation_ellipsoid,
)
from ellincl.errors import DimensionMismatch, NotPositiveDefinite, ZeroDisturbance

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def system():
    return example_system()


@pytest.fixture(scope="module")
def level(system):
    return invariant_level(system)


def with_vertices(sys, W):
    return DisturbedSystem(sys.A, sys.B, sys.H, sys.P, sys.K, W)


def grid_max_violation_level(sys, w, half_width=1.0, k=601, zoom=2):
    """max v(x) over grid points where vdot(x, w) >= 0, computed from the raw dynamics.

    A coarse grid is refined ``zoom`` times around its best point.
    """
    Ac = sys.A - sys.B @ sys.K
    PH = sys.P @ sys.H @ np.atleast_1d(w)
    center, h = np.zeros(2), half_width
    best = -np.inf
    for _ in range(zoom + 1):
        t = np.linspace(-h, h, k)
        X = center + np.stack(np.meshgrid(t, t), axis=-1).reshape(-1, 2)
        vdot = 2 * np.einsum("ij,jk,ik->i", X, sys.P @ Ac, X) + 2 * X @ PH
        V = np.where(vdot >= 0, np.einsum("ij,jk,ik->i", X, sys.P, X), -np.inf)
        i = int(np.argmax(V))
        best = max(best, V[i])
        center, h = X[i], 10 * (2 * h / (k - 1))
    return best


def test_fixture_matrices(system):
    np.testing.assert_array_equal(system.P, [[36.10, 42.36], [42.36, 72.98]])
    np.testing.assert_array_equal(system.K, [[4.24, 7.30]])
    assert np.all(np.linalg.eigvals(system.closed_loop).real < 0)


def test_lyapunov_identity(system, rng):
    for w in (0.5, -0.5, 0.13):
        B = violation_ellipsoid(system, [w])
        G = system.gain
        for x in rng.uniform(-2, 2, (100, 2)):
            d = x - G @ [w]
            rhs = -d @ system.S @ d + B.r
            assert system.vdot(x, [w]) == pytest.approx(rhs, rel=1e-8, abs=1e-6)


def test_violation_sign_equivalence(system, rng):
    B = violation_ellipsoid(system, [0.5])
    X = B.ellipsoid.center + rng.uniform(-0.6, 0.6, (2000, 2))
    for x in X:
        vd = system.vdot(x, [0.5])
        q = B.ellipsoid.quadratic(x)
        if abs(q - 1.0) > 1e-9:
            assert (vd >= 0) == (q <= 1.0)


def test_mirror_and_homogeneity(system):
    a = violation_ellipsoid(system, [0.5])
    b = violation_ellipsoid(system, [-0.5])
    np.testing.assert_allclose(a.ellipsoid.center, -b.ellipsoid.center)
    np.testing.assert_allclose(a.ellipsoid.shape, b.ellipsoid.shape)
    assert a.r == pytest.approx(b.r)
    c = violation_ellipsoid(system, [1.5])
    np.testing.assert_allclose(c.ellipsoid.center, 3 * a.ellipsoid.center)
    assert c.r == pytest.approx(9 * a.r)
    # semi-axes scale like |w| as well
    np.testing.assert_allclose(c.ellipsoid.shape, a.ellipsoid.shape / 9.0)


def test_level_matches_grid_oracle(system, level):
    expected = max(grid_max_violation_level(system, w) for w in (0.5, -0.5))
    assert level.gamma == pytest.approx(expected, rel=1e-6)
    assert level.gamma >= expected * (1 - 1e-12)


def test_level_uses_symmetry(system, level):
    assert level.evaluations == 1
    assert level.per_ellipsoid_gammas[0] == level.per_ellipsoid_gammas[1]
    assert invariant_level(system, exploit_symmetry=False).evaluations == 2


def test_doubling_disturbance(system, level):
    doubled = invariant_level(with_vertices(system, [[-1.0], [1.0]]))
    assert doubled.gamma > level.gamma
    assert doubled.gamma == pytest.approx(4 * level.gamma, rel=1e-9)


def test_small_disturbance_limit(system, level):
    tiny = invariant_level(with_vertices(system, [[-1e-4], [1e-4]]))
    assert tiny.gamma == pytest.approx(level.gamma * (1e-4 / 0.5) ** 2, rel=1e-8)


def test_zero_disturbance(system):
    with pytest.raises(ZeroDisturbance):
        violation_ellipsoid(system, [0.0])
    with pytest.raises(ZeroDisturbance):
        invariant_level(with_vertices(system, [[0.0]]))
    assert invariant_level(with_vertices(system, [[0.0], [0.5]])).per_ellipsoid_gammas[0] > 0


def test_system_validation(system):
    with pytest.raises(DimensionMismatch):
        DisturbedSystem(system.A, system.B, system.H, system.P, [[1.0, 2.0, 3.0]], [[0.5]])
    with pytest.raises(DimensionMismatch):
        DisturbedSystem(system.A, system.B, system.H, system.P, system.K, [[0.5, 0.1]])
    # the open-loop matrix is unstable, so P is not a Lyapunov matrix without feedback
    with pytest.raises(NotPositiveDefinite):
        DisturbedSystem(system.A, system.B, system.H, system.P, [[0.0, 0.0]], [[0.5]])


@given(seeds)
def test_vertex_sufficiency(seed):
    system = example_system()
    gamma = invariant_level(system).gamma
    V = Ellipsoid(np.zeros(2), system.P / (gamma * (1 + 1e-9)))
    w = np.random.default_rng(seed).uniform(-0.5, 0.5)
    if w != 0.0:
        assert not decide(violation_ellipsoid(system, [w]).ellipsoid, V).outside


def test_simulation_zero_disturbance(system, level):
    nominal = with_vertices(system, [[0.0]])
    x0 = np.array([0.05, -0.05])
    assert nominal.v(x0) < level.gamma
    sim = simulate_check(nominal, level.gamma, x0, horizon=5.0)
    assert np.all(np.diff(sim.values) <= 1e-15)
    assert np.all(sim.values <= level.gamma)


@pytest.mark.parametrize("seed", range(3))
def test_simulation_from_corner(system, level, seed):
    sim = simulate_check(system, level.gamma, [-1.0, -1.0], disturbance_seed=seed)
    assert sim.ok and sim.violations == 0
    assert sim.states.shape == (30001, 2)
    assert np.all(np.abs(sim.disturbances) <= 0.5)


def test_half_level_is_violated(system, level):
    # start next to the contact point, where the violation region reaches the level set
    B = violation_ellipsoid(system, [0.5]).ellipsoid
    V, _ = rescaled_pair(B, Ellipsoid(np.zeros(2), system.P), level.gamma)
    xbar = contact_points(B, V).points[0]
    hit = None
    for seed in range(10):
        for x0 in (0.9 * xbar, -0.9 * xbar):
            half = simulate_check(system, level.gamma / 2, x0, horizon=3.0, disturbance_seed=seed, sampling="vertices")
            if not half.ok:
                hit = (seed, x0)
                break
        if hit:
            break
    assert hit is not None
    seed, x0 = hit
    full = simulate_check(system, level.gamma, x0, horizon=3.0, disturbance_seed=seed, sampling="vertices")
    assert full.ok


def test_simulation_rejects_unknown_sampling(system):
    with pytest.raises(ValueError):
        simulate_check(system, 1.0, [0.0, 0.0], horizon=0.01, sampling="edges")
