"""Exception hierarchy.

Configuration-type problems derive from :class:`ValueError` so callers that
only care about "bad input" can catch that; resource problems (precision,
size caps) derive from :class:`ResourceError`.
"""


class KronHaltonError(Exception):
    """Base class for all library errors."""


class ResourceError(KronHaltonError):
    """A computation ran out of coefficients, precision or size budget."""


class PrecisionExhaustedError(ResourceError):
    """More series coefficients were needed than the backing can supply."""


class CapExceededError(ResourceError):
    """Input size exceeds a configured cap (e.g. exact discrepancy)."""


class FieldMismatchError(KronHaltonError, ValueError):
    pass


class InvalidBaseError(KronHaltonError, ValueError):
    pass


class CoprimalityError(KronHaltonError, ValueError):
    pass


class ZeroSeriesError(KronHaltonError, ValueError):
    pass


class DegreeError(KronHaltonError, ValueError):
    pass


class CardinalityError(KronHaltonError, ValueError):
    pass


class ResolutionError(KronHaltonError, ValueError):
    """A box is finer than the digit precision of the points."""


class RankConditionError(KronHaltonError, ValueError):
    """The stacked-rank condition failed for a supplied block length."""


class OutOfScopeError(KronHaltonError, ValueError):
    """The input lies outside the hypotheses of the experiment (e.g. rational L)."""


class ParseError(KronHaltonError, ValueError):
    pass
