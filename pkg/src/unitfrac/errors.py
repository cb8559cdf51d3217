"""Exception types shared across the package."""


class UnitFracError(Exception):
    """Base class for all errors raised by this package."""


class CoprimalityError(UnitFracError, ValueError):
    pass


class SearchExhausted(UnitFracError):
    """The prime search hit its step cap before finding a prime."""

    def __init__(self, message, steps=None):
        super().__init__(message)
        self.steps = steps


class InternalInvariantViolation(UnitFracError, AssertionError):
    """A construction invariant failed; indicates a bug, not bad input."""


class TooLarge(UnitFracError):
    def __init__(self, size, limit, what="size"):
        super().__init__(f"{what} {size} exceeds limit {limit}")
        self.size = size
        self.limit = limit


class PeriodTooLarge(TooLarge):
    pass


class PartitionError(UnitFracError, ValueError):
    pass


class FormatError(UnitFracError, ValueError):
    """Malformed JSON document."""


class CertificateFailure(UnitFracError):
    def __init__(self, condition, block, detail, checks=()):
        where = f" (block {block})" if block is not None else ""
        super().__init__(f"{condition} failed{where}: {detail}")
        self.condition = condition
        self.block = block
        self.detail = detail
        self.checks = list(checks)


class NotACoverWarning(UserWarning):
    pass
