"""Exception hierarchy shared by the library and the CLI."""


class HDGraphonError(Exception):
    """Base class for all errors raised by this package."""


class GraphonError(HDGraphonError, ValueError):
    """A step-graphon document or object is invalid."""


class MalformedGraphonError(GraphonError):
    """The graphon document cannot be parsed into breakpoints and values."""


class BreakpointOrderError(GraphonError):
    """Breakpoints do not run strictly increasing from 0 to 1."""


class AsymmetricValuesError(GraphonError):
    """The value matrix is not symmetric."""


class ValueRangeError(GraphonError):
    """A graphon value lies outside [0, 1]."""


class DisconnectedSkeletonError(HDGraphonError, ValueError):
    """The skeleton graph is disconnected; the limit is not classified."""


class RankDeficientError(HDGraphonError, ValueError):
    """The incidence matrix does not have full row rank."""


class EdgeListError(HDGraphonError, ValueError):
    """An edge-list document is malformed."""


class InvariantViolation(HDGraphonError, AssertionError):
    """An internal consistency check failed."""
