"""Exception hierarchy shared by all spincorr modules."""


class SpinCorrError(ValueError):
    """Base class for every error raised by spincorr."""


class SizeError(SpinCorrError):
    """An enumeration guard was exceeded."""


class DimensionError(SpinCorrError):
    """Operands have incompatible sizes or an index is out of range."""


class AffineConstraintError(SpinCorrError):
    """Barycentric weights do not sum to one."""


class ProbabilityError(SpinCorrError):
    """Weights are negative or do not sum to one."""


class SearchError(SpinCorrError):
    """A witness search ran out of candidates."""


class CertificateError(RuntimeError):
    """A solver result failed its own exact re-verification.

    This signals a bug, never a property of the input.
    """
