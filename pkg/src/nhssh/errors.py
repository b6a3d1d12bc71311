"""Exception hierarchy shared by every module of the package."""


class NHSSHError(Exception):
    """Base class for all package errors."""


class InvalidAmplitudes(NHSSHError, ValueError):
    """A hopping amplitude set violates the positive-product requirement."""


class NotApplicable(NHSSHError, ValueError):
    """The operation is not defined for this model kind."""


class ChainTooShort(NHSSHError, ValueError):
    """Too few unit cells for the requested model."""


class InvalidIndex(NHSSHError, ValueError):
    """Chebyshev index below the supported range."""


class CriticalPoint(NHSSHError, ArithmeticError):
    """Input sits on a phase boundary (a root on the contour)."""


class GaplessFactor(NHSSHError, ArithmeticError):
    """A Bloch factor vanishes on the sampled Brillouin zone."""


class NumericalInconsistency(NHSSHError, ArithmeticError):
    """Two independent numerical routes disagree."""


class SolverError(NHSSHError, ArithmeticError):
    """An eigen- or root-solver failed to meet its accuracy contract."""


class DeflationError(SolverError):
    """Removing a known spurious factor left a large remainder."""


class InvalidRequest(NHSSHError, ValueError):
    """Request parameters are inconsistent with the input data."""


class NotAChiralPair(NHSSHError, ValueError):
    """Two states are not related by E -> -E."""


class ConfigError(NHSSHError, ValueError):
    """An experiment configuration is malformed."""
