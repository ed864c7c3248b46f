"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`MukaiError`
and carries a short machine-readable ``kind`` used by the CLI error payload.
"""


class MukaiError(Exception):
    kind = "error"


class DimensionMismatch(MukaiError, ValueError):
    kind = "dimension_mismatch"


class SignatureError(MukaiError, ValueError):
    kind = "signature"


class NotDefined(MukaiError, ValueError):
    kind = "not_defined"


class NotIntegral(MukaiError, ValueError):
    kind = "not_integral"


class NotNegativeDefinite(MukaiError, ValueError):
    kind = "not_negative_definite"


class FormNotDescending(MukaiError, ValueError):
    kind = "form_not_descending"


class HypothesisViolation(MukaiError, ValueError):
    kind = "hypothesis_violation"


class NotADE(MukaiError, ValueError):
    kind = "not_ade"


class NotDefinite(MukaiError, ValueError):
    kind = "not_definite"


class KernelNotOneDimensional(MukaiError, ValueError):
    kind = "kernel_not_one_dimensional"


class WrongNorm(MukaiError, ValueError):
    kind = "wrong_norm"


class OnWall(MukaiError, ValueError):
    kind = "on_wall"


class EndpointOnWall(MukaiError, ValueError):
    kind = "endpoint_on_wall"


class BoxExhausted(MukaiError, RuntimeError):
    kind = "box_exhausted"


class DegenerateDenominator(MukaiError, ValueError):
    kind = "degenerate_denominator"


class IdentityFailure(MukaiError, AssertionError):
    """A lattice identity that must hold failed; signals a bug, not bad data."""

    kind = "identity_failure"


class EnumerationLimit(MukaiError, RuntimeError):
    kind = "enumeration_limit"


class WordTooLong(MukaiError, RuntimeError):
    kind = "word_too_long"


class ValidationError(MukaiError, ValueError):
    kind = "validation"
