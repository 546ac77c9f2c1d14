"""Exception hierarchy.

Two families matter to callers: precondition failures (bad parameters,
unsupported configurations) and verification failures (a computed object
failed an exactness check).  The CLI maps them to exit codes 3 and 4.
"""


class TripadicError(Exception):
    """Base class for all package errors."""


class PreconditionError(TripadicError, ValueError):
    pass


class UnsupportedError(PreconditionError):
    pass


class FactorizationError(PreconditionError):
    """Hecke polynomial does not split at the requested precision."""


class AmbiguityError(PreconditionError):
    pass


class PrecisionError(PreconditionError):
    pass


class VerificationError(TripadicError, ArithmeticError):
    pass


class SpanError(VerificationError):
    """Operator image leaves the declared finite-rank span."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending or []


class OracleFailure(VerificationError):
    pass


class DistributionError(VerificationError):
    pass


class StageError(TripadicError):
    """Wraps an error raised inside a pipeline stage, keeping the stage tag."""

    def __init__(self, stage, error):
        super().__init__(f"[{stage}] {error}")
        self.stage = stage
        self.error = error
