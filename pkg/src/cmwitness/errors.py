"""Package-wide error types.

The CLI maps these onto exit codes: anything that signals bad or
out-of-contract input exits 2, while InternalVerificationError (an
identity the construction is supposed to guarantee failed to check)
exits 3.
"""

from __future__ import annotations


class CmWitnessError(Exception):
    """Base class for all package errors."""


class ZeroInputError(CmWitnessError):
    """An operation that requires a nonzero polynomial received zero."""


class UnsupportedError(CmWitnessError):
    """Input falls in a branch the algorithms do not decide."""


class MalformedSequenceError(CmWitnessError):
    """A certificate sequence does not have the required shape."""


class HypothesisViolationError(CmWitnessError):
    """The standing hypotheses on (f, g) fail; names the predicate."""

    def __init__(self, predicate: str, message: str):
        super().__init__(f"{predicate}: {message}")
        self.predicate = predicate


class WrongCaseError(CmWitnessError):
    """A construction was requested for a case tag it does not apply to."""


class NotClosedError(CmWitnessError):
    """A claimed generating set is not closed under multiplication."""


class BoundTooLargeError(CmWitnessError):
    """A colon-search degree bound exceeds the configured resource guard."""


class WitnessMismatchError(CmWitnessError):
    """A witness fails to re-expand to the element it certifies."""


class LiftInvalidError(CmWitnessError):
    """An integer lift violates the constraints of the construction."""


class MissingCertificateError(CmWitnessError):
    """A non-CM report was requested without its supporting certificate."""


class UnverifiedComplexError(CmWitnessError):
    """A complex was used before its compositions were checked."""


class CaseConflictError(CmWitnessError):
    """Mutually exclusive case conditions were detected simultaneously."""


class InternalVerificationError(CmWitnessError):
    """An identity guaranteed by the theory failed to verify exactly."""
