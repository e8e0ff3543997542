import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ellincl import Ellipsoid

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_spd(rng, n, lo=0.5, hi=50.0):
    Q = random_orthogonal(rng, n)
    lam = np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    return (Q * lam) @ Q.T


def random_ellipsoid(rng, n, spread=1.0, lo=0.5, hi=50.0):
    return Ellipsoid(spread * rng.standard_normal(n), random_spd(rng, n, lo, hi))


def random_pair(rng, n):
    """A pair with a rough mix of inside, outside and overlapping cases."""
    E0 = random_ellipsoid(rng, n, lo=0.2, hi=5.0)
    offset = rng.uniform(0.0, 0.9) * rng.standard_normal(n) / np.sqrt(n)
    c = E0.center + np.linalg.solve(E0.factor.T, offset)
    P = E0.shape * rng.uniform(0.5, 4.0) + random_spd(rng, n, 0.1, 20.0)
    return Ellipsoid(c, P), E0


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def analytic_pair():
    """E = E((0, 2/3), diag(2, 9)) against the unit disc: sup of ||x||^2 over E is 15/14."""
    return Ellipsoid([0.0, 2.0 / 3.0], np.diag([2.0, 9.0])), Ellipsoid.unit_ball(2)
