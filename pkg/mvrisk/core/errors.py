"""
Error hierarchy for mvrisk.

Every error carries a stable ``kind`` used by the CLI in its ``error:<kind>:`` prefix.
"""


class MvriskError(ValueError):
    """Base class of all data and usage errors raised by the package."""

    kind: str = "error"


class ParseError(MvriskError):
    """A scenario file row or value could not be parsed."""

    kind = "parse"


class EmptyInputError(MvriskError):
    """A scenario file contained no scenarios."""

    kind = "empty_input"


class DimensionMismatchError(MvriskError):
    """Vectors with different numbers of components were combined."""

    kind = "dimension_mismatch"


class InvalidProbabilityError(MvriskError):
    """A probability is not positive or the probabilities do not sum to one."""

    kind = "invalid_probability"


class InvalidOutcomeError(MvriskError):
    """An outcome component or shift is NaN or infinite."""

    kind = "invalid_outcome"


class InvalidLevelError(MvriskError):
    """A confidence level outside (0, 1) or a non-positive tolerance."""

    kind = "invalid_level"


class InvalidWeightsError(MvriskError):
    """Scalarization weights that are negative or do not sum to one."""

    kind = "invalid_weights"


class SpaceMismatchError(MvriskError):
    """Two scenario sets do not live on the same probability space."""

    kind = "space_mismatch"


class NegativeScaleError(MvriskError):
    """A scenario set was scaled by a negative factor."""

    kind = "negative_scale"


class InfeasibleLevelError(MvriskError):
    """Enumeration produced no efficient point, which indicates a tolerance misuse."""

    kind = "infeasible_level"


class TooLargeError(MvriskError):
    """The subset-scan oracle was asked to handle too many scenarios."""

    kind = "too_large"


class NotUnivariateError(MvriskError):
    """A univariate operation received a multivariate scenario set."""

    kind = "not_univariate"


class EmptyConditionError(MvriskError):
    """A conditional expectation was requested on an event of probability zero."""

    kind = "empty_condition"


class MultiplePlepsError(MvriskError):
    """A single-quantile measure was requested for a set with several efficient points."""

    kind = "multiple_pleps"


class OracleMismatchError(MvriskError):
    """Grid enumeration and the subset-scan oracle disagree."""

    kind = "oracle_mismatch"


class OutputError(MvriskError):
    """An output file could not be written."""

    kind = "io"


class UsageError(MvriskError):
    """The command line could not be interpreted."""

    kind = "usage"
