"""Exception types raised by degchain."""


class DegchainError(Exception):
    """Base class for all errors raised by this package."""


class OutOfRangeProbability(DegchainError, ValueError):
    """An attachment probability fell outside [0, 1] or its denominator was non-positive."""


class EmptyRange(DegchainError, ValueError):
    pass


class DegenerateSegment(DegchainError, ValueError):
    """A node in the requested range has initial degree zero."""


class NonPositive(DegchainError, ValueError):
    pass


class Unsupported(DegchainError, NotImplementedError):
    pass


class InsufficientPoints(DegchainError, ValueError):
    pass


class EmptyDistribution(DegchainError, ValueError):
    pass


class InsufficientNodes(DegchainError, ValueError):
    pass


class MismatchedRuns(DegchainError, ValueError):
    pass
