"""Exception hierarchy shared by all modules."""


class TwrelayError(Exception):
    """Base class for every error raised by this package."""


# channel
class OverlapError(TwrelayError, ValueError):
    pass


class MissingEntry(TwrelayError, KeyError):
    pass


class CapacityCapExceeded(TwrelayError):
    pass


class SingularCovariance(TwrelayError, ArithmeticError):
    pass


class ChannelSpecError(TwrelayError, ValueError):
    """Malformed channel document or model parameters."""


# ranking
class UnknownNode(TwrelayError, ValueError):
    pass


class NonCanonicalPath(TwrelayError, ValueError):
    pass


class NoPredecessor(TwrelayError, ValueError):
    pass


class RefUndefinedAtSource(TwrelayError, ValueError):
    pass


class InvalidPairing(TwrelayError, ValueError):
    pass


# region
class PathUniverseTooLarge(TwrelayError, ValueError):
    pass


class IndexOutOfRange(TwrelayError, IndexError):
    pass


class PointOutsideRegion(TwrelayError, ValueError):
    pass


class DegenerateRegion(TwrelayError, ValueError):
    """Raised when a frontier or area is requested for an unbounded region."""


# schedule
class RecursionCycle(TwrelayError, RuntimeError):
    pass


class HorizonTooShort(TwrelayError, ValueError):
    pass
