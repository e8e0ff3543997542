import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellincl import DualContext, NormalizedProblem, ell, ell_prime, ell_second
from ellincl.dualfn import POLE_GUARD, lagrangian_minimizer
from ellincl.errors import OutOfDomain
from ellincl.oracle import gamma_closed_form_1d

seeds = st.integers(0, 2**32 - 1)


def ctx_of(c_bar, lam):
    return DualContext(NormalizedProblem.from_diagonal(c_bar, lam))


def random_ctx(rng, n):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.sort(np.exp(rng.uniform(np.log(0.3), np.log(30.0), n)))
    c = rng.standard_normal(n)
    c *= rng.uniform(0.0, 1.2) / np.linalg.norm(c)
    return DualContext(NormalizedProblem.from_spectrum(c, lam, Q))


def interior_betas(ctx, rng, k):
    lo = ctx.interval_lo
    return lo + np.exp(rng.uniform(np.log(1e-3), np.log(5.0), k)) * max(lo, 0.1)


def test_empty_support():
    ctx = ctx_of([0.0, 0.0], [4.0, 5.0])
    for b in (0.25, 0.5, 3.0):
        assert ell(ctx, b) == -b
        assert ell_prime(ctx, b) == -1.0
        assert ell_second(ctx, b) == 0.0


def test_one_dimensional_values():
    ctx = ctx_of([0.5], [16.0])
    assert ell(ctx, 3 / 16) == pytest.approx(-0.5625, abs=1e-15)
    assert ell_prime(ctx, 3 / 16) == pytest.approx(0.0, abs=1e-14)
    assert ell_prime(ctx, 0.25) == pytest.approx(-1.0 + 4.0 / 9.0, abs=1e-15)
    assert ell_second(ctx, 3 / 16) == pytest.approx(-16.0, abs=1e-12)
    # the maximum equals minus the closed-form factor
    assert ell(ctx, 3 / 16) == pytest.approx(-gamma_closed_form_1d(0.5, 16.0), abs=1e-15)


def test_two_dimensional_boundary_value():
    ctx = ctx_of([0.0, 2.0 / 3.0], [2.0, 9.0])
    assert not ctx.lower_open
    assert ctx.interval_lo == 0.5
    assert ell(ctx, 0.5) == pytest.approx(-15.0 / 14.0, abs=1e-15)
    assert ell_prime(ctx, 0.5) == pytest.approx(-1.0 + (4.0 / 9.0) * 9.0 / 3.5**2, abs=1e-15)
    assert ell_prime(ctx, 0.5) < 0.0


def test_sample_matches_separate_calls(rng):
    ctx = random_ctx(rng, 5)
    for b in interior_betas(ctx, rng, 10):
        s = ctx.sample(b)
        assert s.value == pytest.approx(ell(ctx, b), rel=1e-14)
        assert s.dvalue == pytest.approx(ell_prime(ctx, b), rel=1e-13, abs=1e-14)
        assert s.ddvalue == pytest.approx(ell_second(ctx, b), rel=1e-13, abs=1e-14)


def test_pole_is_refused():
    ctx = ctx_of([0.5], [16.0])
    assert ctx.lower_open
    with pytest.raises(OutOfDomain):
        ell(ctx, 1 / 16)
    with pytest.raises(OutOfDomain):
        ell(ctx, 1 / 16 + 0.5 * POLE_GUARD)
    with pytest.raises(OutOfDomain):
        ell(ctx, 0.01)
    assert np.isfinite(ell(ctx, 1 / 16 + 1e-9))


def test_closed_domain_includes_endpoint():
    ctx = ctx_of([0.0, 0.5], [2.0, 9.0])
    assert np.isfinite(ell(ctx, 0.5))
    with pytest.raises(OutOfDomain):
        ell(ctx, 0.4999)


def test_empty_interval_flag():
    # 1 - |c|^2 = 0.19 < 1/4
    ctx = ctx_of([0.0, 0.9], [4.0, 100.0])
    assert ctx.interval_empty
    assert ctx.interval_hi == pytest.approx(0.19)
    assert not ctx_of([0.5], [16.0]).interval_empty


def test_lower_start_has_nonnegative_slope(rng):
    for _ in range(50):
        ctx = random_ctx(rng, 4)
        if ctx.lower_open:
            assert ell_prime(ctx, ctx.lower_start()) >= 0.0
        else:
            assert ctx.lower_start() == ctx.interval_lo


@given(seeds, st.integers(1, 6))
def test_concavity_chords(seed, n):
    rng = np.random.default_rng(seed)
    ctx = random_ctx(rng, n)
    b1, b2, b3 = np.sort(interior_betas(ctx, rng, 3))
    if not b1 < b2 < b3:
        return
    t = (b3 - b2) / (b3 - b1)
    chord = t * ell(ctx, b1) + (1 - t) * ell(ctx, b3)
    assert ell(ctx, b2) >= chord - 1e-12 * (1 + abs(chord))


@given(seeds, st.integers(1, 6))
def test_negativity_and_curvature_sign(seed, n):
    rng = np.random.default_rng(seed)
    ctx = random_ctx(rng, n)
    for b in interior_betas(ctx, rng, 8):
        assert ell(ctx, b) < 0.0
        if ctx.support_size:
            assert ell_second(ctx, b) < 0.0


@given(seeds, st.integers(1, 6))
def test_finite_differences(seed, n):
    rng = np.random.default_rng(seed)
    ctx = random_ctx(rng, n)
    for b in interior_betas(ctx, rng, 4):
        h = 1e-6 * (b - ctx.interval_lo)
        d1 = (ell(ctx, b + h) - ell(ctx, b - h)) / (2 * h)
        d2 = (ell_prime(ctx, b + h) - ell_prime(ctx, b - h)) / (2 * h)
        assert d1 == pytest.approx(ell_prime(ctx, b), rel=1e-6, abs=1e-6)
        assert d2 == pytest.approx(ell_second(ctx, b), rel=1e-5, abs=1e-5)


@given(seeds, st.integers(1, 6))
def test_dual_equals_lagrangian_minimum(seed, n):
    rng = np.random.default_rng(seed)
    ctx = random_ctx(rng, n)
    p = ctx.problem
    P, c = p.p_tilde, p.c_tilde

    def lagrangian(x, b):
        d = x - c
        return -x @ x + b * (d @ P @ d - 1.0)

    for b in interior_betas(ctx, rng, 4):
        x = np.linalg.solve(b * P - np.eye(n), b * P @ c)
        assert lagrangian(x, b) == pytest.approx(ell(ctx, b), rel=1e-9, abs=1e-9)
        np.testing.assert_allclose(lagrangian_minimizer(ctx, b), x, rtol=1e-8, atol=1e-9)
        # x is a minimizer: random perturbations do not decrease the Lagrangian
        for _ in range(3):
            y = x + 1e-3 * rng.standard_normal(n)
            assert lagrangian(y, b) >= lagrangian(x, b) - 1e-12


def test_stationarity_sign_one_dimensional():
    # the minimizer at the optimal multiplier is the far endpoint +0.75 of [0.25, 0.75]
    ctx = ctx_of([0.5], [16.0])
    assert lagrangian_minimizer(ctx, 3 / 16)[0] == pytest.approx(0.75, abs=1e-15)
