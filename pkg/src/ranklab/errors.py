"""Exception hierarchy shared by every ranklab module."""


class RanklabError(Exception):
    """Base class for all ranklab errors."""


class ParameterViolation(RanklabError, ValueError):
    """Arguments fall outside the domain where an operation is defined."""


class PreconditionViolated(ParameterViolation):
    pass


class NonPrimeCharacteristic(ParameterViolation):
    pass


class UnsupportedOrder(ParameterViolation):
    pass


class DimensionMismatch(ParameterViolation):
    pass


class AmbientMismatch(ParameterViolation):
    pass


class NoSuchConfiguration(ParameterViolation):
    """No pair of subspaces with the requested dimensions and distance exists."""


class NotACodeword(ParameterViolation):
    pass


class ExcludedRegime(ParameterViolation):
    """The requested comparison is in the trivial case excluded by the dominance results."""


class NoValidOutput(ParameterViolation):
    """The channel cannot produce an output with the requested error/erasure counts."""


class BudgetExceeded(RanklabError):
    """An exhaustive enumeration would exceed the configured item budget."""


class AmbiguousRadius(RanklabError):
    """Two codewords lie within the decoding radius; the radius exceeds the unique-decoding bound."""
