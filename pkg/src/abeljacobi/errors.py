"""Exception hierarchy shared by every module of the package."""


class AbelJacobiError(Exception):
    """Base class for all errors raised by :mod:`abeljacobi`."""


class InputError(AbelJacobiError):
    """Invalid user input (malformed curve, divisor, point or target)."""


class NumericalError(AbelJacobiError):
    """A numerical routine could not deliver a trustworthy answer."""


class VerificationFailure(AbelJacobiError):
    """A computed quantity violates a property the theory guarantees."""


# curve_model
class EvenDegree(InputError):
    pass


class DegreeTooSmall(InputError):
    pass


class LeadingZero(InputError):
    pass


class NearDegenerate(InputError):
    pass


class NotOnCurve(InputError):
    pass


# path_tracking
class EndpointAtInfinity(InputError):
    pass


class NoRouteFound(NumericalError):
    pass


class BranchTooClose(NumericalError):
    pass


class InconsistentStart(InputError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class PathNotClosed(InputError):
    pass


# homology
class AmbiguousCrossing(NumericalError):
    pass


class NotUnimodular(NumericalError):
    pass


# periods / lattice
class SingularA(NumericalError):
    pass


class IllConditionedLattice(NumericalError):
    pass


# abel_jacobi
class NonzeroDegree(InputError):
    pass


class PoleOnPath(NumericalError):
    pass


class SingularJacobianAtBase(NumericalError):
    pass


class LeftChart(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


# elliptic_oracle
class ZeroInput(InputError):
    pass


class WrongGenus(InputError):
    pass


class DimensionMismatch(InputError):
    pass
