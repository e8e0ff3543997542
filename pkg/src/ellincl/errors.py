"""Exception hierarchy shared by all modules."""


class EllinclError(Exception):
    """Base class for every error raised by this package."""


class NotPositiveDefinite(EllinclError, ValueError):
    """A matrix expected to be symmetric positive definite is not."""


class NoConvergence(EllinclError, ArithmeticError):
    """An iterative kernel exhausted its iteration budget."""


class SingularFactor(EllinclError, ArithmeticError):
    """A triangular factor has a (numerically) zero diagonal entry."""


class DimensionMismatch(EllinclError, ValueError):
    pass


class OutOfDomain(EllinclError, ValueError):
    """The dual function was evaluated outside its domain."""


class NotTouching(EllinclError, ValueError):
    """Contact points were requested for a pair whose boundaries do not touch."""


class NoRealRoot(EllinclError, ArithmeticError):
    pass


class ZeroDisturbance(EllinclError, ValueError):
    pass


class NonPositiveLambda(EllinclError, ValueError):
    pass


class NotSymmetric(EllinclError, ValueError):
    pass
