"""Exception hierarchy shared by all modules."""


class WordMeasureError(Exception):
    """Base class for every error raised by this package."""


class InvalidLetter(WordMeasureError, ValueError):
    pass


class RankMismatch(WordMeasureError, ValueError):
    pass


class TupleArityMismatch(WordMeasureError, ValueError):
    pass


class NotAGroup(WordMeasureError, ValueError):
    pass


class InvalidElement(WordMeasureError, IndexError):
    pass


class UnknownGroup(WordMeasureError, KeyError):
    pass


class TupleNotBasis(WordMeasureError, ValueError):
    pass


class NoEpimorphisms(WordMeasureError):
    pass


class ResourceCapExceeded(WordMeasureError):
    """Raised when an exhaustive computation would exceed a configured cap."""


class GroupTooLarge(ResourceCapExceeded):
    pass


class EnumerationTooLarge(ResourceCapExceeded):
    pass


class QuotientTooLarge(ResourceCapExceeded):
    pass


class RankTooLarge(ResourceCapExceeded):
    pass
