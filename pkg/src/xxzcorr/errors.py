"""Domain exceptions shared across the package."""


class XxzCorrError(Exception):
    """Base class for all domain errors raised by this package."""


class NonPositiveTemperature(XxzCorrError):
    """Temperature must be strictly positive (T = 0 is not representable)."""


class RangeUnsupported(XxzCorrError):
    """Parameters fall outside the supported low-temperature range."""


class InvalidState(XxzCorrError):
    """A density matrix or X-state entry set violates its invariants."""


class NotHermitian(XxzCorrError):
    """Eigensolver input is not Hermitian within tolerance."""


class DegenerateOutcome(XxzCorrError):
    """Measurement outcome probability is numerically zero; the conditional
    state is undefined (it contributes zero to averaged entropies)."""


class NoBracket(XxzCorrError):
    """Root bracketing failed: the requested curve is absent in the window."""


class PairNotBorn(XxzCorrError):
    """No interior extremum pair exists where one was required."""


class NearTransition(XxzCorrError):
    """Requested quantity is ill-defined this close to a transition point."""


class NoTransitionFound(XxzCorrError):
    """A path scan contains no branch change to classify."""


class InsufficientPoints(XxzCorrError):
    """Too few samples fall inside the requested fit window."""


class IllConditionedFit(XxzCorrError):
    """Polynomial fit matrix is rank deficient or unusable."""
