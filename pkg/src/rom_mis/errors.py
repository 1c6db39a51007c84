"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Two objects (or an object and a container) disagree on dimension."""


class OutOfRange(ValueError):
    """A length or coordinate falls outside the declared bounding box."""


class ClassMismatch(ValueError):
    """An object was offered to a checker built for a different size class."""


class ProtocolError(RuntimeError):
    """An online runner received more or fewer arrivals than announced."""


class ScaleDomainError(ValueError):
    """A coordinate lies left of the first breakpoint of a scale."""


class InvariantViolation(AssertionError):
    """A hard correctness check failed (independence, grid caps, ...)."""
