"""Exception hierarchy shared by all modules."""


class BruhatError(Exception):
    """Base class for every error raised by this package."""


class InvalidSubsetError(BruhatError, ValueError):
    pass


class InvalidRestrictionError(BruhatError, ValueError):
    pass


class InvalidIntervalError(BruhatError, ValueError):
    pass


class UnsupportedDimensionError(BruhatError, ValueError):
    pass


class PreconditionError(BruhatError, ValueError):
    pass


class InconsistentFamilyError(BruhatError, ValueError):
    """A family failed a consistency requirement.

    ``wire`` and ``cycle`` are filled in when the failure was detected as an
    intransitive local sequence.
    """

    def __init__(self, message, wire=None, cycle=None):
        super().__init__(message)
        self.wire = wire
        self.cycle = cycle


class ResourceLimitError(BruhatError, RuntimeError):
    pass


class TheoremViolation(BruhatError, AssertionError):
    """A proven structural property failed on a concrete instance.

    This is never expected to fire; ``witness`` carries the instance.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
