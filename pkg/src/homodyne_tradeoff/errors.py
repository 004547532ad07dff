"""Exception hierarchy shared by every module of the package."""


class TradeoffError(Exception):
    """Base class for all package errors."""


class NumericalError(TradeoffError):
    """A numerical routine failed; CLI maps this to exit status 3.

    ``phi`` is filled in by the curve generator when the failure happened
    at a specific beam-splitter angle.
    """

    phi = None


class OrderingOutOfRange(NumericalError, ValueError):
    """An s-ordered function was requested at s >= 1."""


class DegenerateGeometry(NumericalError, ValueError):
    """cos(phi) + g sin(phi) vanishes, so the output rescaling is undefined."""


class DistributionalP(NumericalError):
    """The output P-function is a distribution (delta or worse), not a density."""


class QuadratureFailure(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class OutOfRange(TradeoffError, ValueError):
    """A fidelity value lies outside the reachable range of a trade-off."""


class TruncationInsufficient(NumericalError):
    """Thermal photon-number truncation leaves too much probability in the tail."""


class NoRealRootInRange(NumericalError):
    """The distortion-gain cubic has no real root in the admissible bracket."""


class BracketInvalid(TradeoffError, ValueError):
    """A 1-D search bracket is empty or not finite."""


class RejectionStall(NumericalError):
    """Rejection sampling acceptance collapsed below the allowed floor."""
