"""Exception types shared across the laboratory."""


class ZetalabError(Exception):
    """Base class for all errors raised by this package."""


class PoleProximity(ZetalabError):
    """Evaluation point is too close to the pole at s = 1."""


class PrecisionUnreachable(ZetalabError):
    """The term budget cannot certify the requested absolute error."""


class OutOfRange(ZetalabError):
    """Argument outside the supported range of a table or expansion."""


class DomainError(ZetalabError):
    """Argument outside the mathematical domain of the operation."""


class CapacityError(ZetalabError):
    """Requested table or coefficient array exceeds the configured budget."""


class OrderTooLarge(ZetalabError):
    """Kernel order beyond the supported range."""


class QuadratureFailure(ZetalabError):
    """Adaptive quadrature could not certify the requested tolerance."""


class DivergentIntegral(ZetalabError):
    """The requested moment integral diverges."""


class NotFound(ZetalabError):
    """No shift satisfying the target was found within the search budget."""


class DimensionTooLarge(ZetalabError):
    """Lattice dimension beyond the reduction limit."""


class CacheFormatError(ZetalabError):
    """On-disk cache file has an unknown or corrupted header."""
