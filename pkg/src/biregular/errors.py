"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class BiregularError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(BiregularError, ValueError):
    """An operation was called on input outside its domain."""


class UncoveredParameters(PreconditionError):
    """The (n, k) pair is outside every class with a constructive proof."""


class BudgetExceeded(BiregularError):
    """An exhaustive search hit its configured budget.

    ``progress`` holds whatever partial count was reached before stopping.
    """

    def __init__(self, message: str, progress: int = 0):
        super().__init__(message)
        self.progress = progress


class LemmaViolation(BiregularError):
    """A construction backed by a proven lemma failed.

    ``artifact`` is a JSON-ready dict with the full state needed to
    reproduce the failure.
    """

    def __init__(self, message: str, artifact: dict | None = None):
        super().__init__(message)
        self.artifact = artifact or {}


class ConstraintBreach(PreconditionError):
    """Inputs to a bound check do not satisfy the bound's hypotheses."""


class CertificateSchemaError(BiregularError, ValueError):
    """A certificate document is structurally malformed."""
