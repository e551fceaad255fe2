"""
Exception types raised by the fgl-cobord kernel.

Every error derives from FglCobordError and from ValueError, so callers that
only care about "bad input" can keep catching ValueError.
"""


class FglCobordError(ValueError):
    """Base class for kernel errors"""


class ShapeError(FglCobordError):
    """Dimension or length mismatch"""


class TruncationError(FglCobordError):
    """Weight or degree outside the truncation, or mixed truncations"""


class NotNilpotentError(FglCobordError):
    """A series with nonzero constant term was used where a Chern class is required"""


class MorphismError(FglCobordError):
    """Generator images do not kill the stored relations"""


class DepthError(FglCobordError):
    """A Mishchenko cache or psi series is too shallow for the request"""


class IntegralityError(FglCobordError):
    """A rational value was used where an integral certificate is required"""


class RingMismatchError(FglCobordError):
    """Operands live over different coefficient rings"""


class NotComputableError(FglCobordError):
    """The requested quantity is not determined by the implemented calculus"""
