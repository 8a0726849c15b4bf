"""Exception hierarchy.  Every domain error carries a machine-readable code."""


class MZetaError(Exception):
    """Base class for domain errors raised by the library."""

    code = "E_DOMAIN"

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail

    def to_json(self):
        return {"error": self.code, "detail": self.detail}


class SpecializePoleError(MZetaError, ZeroDivisionError):
    code = "E_SPECIALIZE_POLE"


class OpaqueClassError(MZetaError):
    code = "E_OPAQUE"


class MissingSymTableError(MZetaError):
    code = "E_MISSING_SYM_TABLE"


class ReconstructionError(MZetaError):
    code = "E_RECONSTRUCT"


class MissingQuotientError(MZetaError):
    code = "E_MISSING_QUOTIENT"


class NotDivisibleError(MZetaError):
    code = "E_NOT_DIVISIBLE"


class PremiseError(MZetaError):
    code = "E_PREMISE"


class SequenceTooShortError(MZetaError, IndexError):
    code = "E_SEQUENCE_TOO_SHORT"


class InvalidArgumentError(MZetaError, ValueError):
    code = "E_INVALID_ARGUMENT"
