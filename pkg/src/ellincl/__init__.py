"""Ellipsoid inclusion through a scalar concave dual function.

``decide(E, E0)`` answers whether ``E ⊆ E0``; ``minimal_scaling`` gives the
factor ``gamma`` that makes the pair touch; ``contact_points`` and ``cover``
build on it, and :mod:`ellincl.invariant` applies ``cover`` to invariant level
sets of disturbed linear systems.
"""
from importlib import resources

from .dualfn import DualContext, ell, ell_prime, ell_second
from .ellipsoid import Ellipsoid, Frame, NormalizedProblem, contains, normalize
from .errors import (
    DimensionMismatch,
    EllinclError,
    NoConvergence,
    NonPositiveLambda,
    NoRealRoot,
    NotPositiveDefinite,
    NotSymmetric,
    NotTouching,
    OutOfDomain,
    SingularFactor,
    ZeroDisturbance,
)
from .inclusion import (
    ContactPointSet,
    CoverResult,
    InclusionVerdict,
    Relation,
    ScalingResult,
    bisect,
    contact_points,
    cover,
    decide,
    maximize_dual,
    minimal_scaling,
    pretest,
    refine_certificate,
    rescaled_pair,
)
from .invariant import DisturbedSystem, invariant_level, simulate_check, violation_ellipsoid

__version__ = "0.1.0"


def example_system():
    """The two-state LQR-controlled system with a scalar disturbance in [-0.5, 0.5]."""
    from . import io

    text = resources.files(__package__).joinpath("data/lqr_system.json").read_text()
    return io.system_from_doc(io.loads(text))
