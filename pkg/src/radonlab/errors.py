"""Exception hierarchy shared by all modules, with the CLI exit-code mapping."""

from __future__ import annotations


class RadonlabError(Exception):
    """Base class for all library errors."""


class InvalidInputError(RadonlabError):
    """Caller supplied malformed or out-of-contract values (CLI exit 2)."""


class SingularFitError(InvalidInputError):
    """Least-squares design matrix is rank deficient."""


class InvariantViolationError(RadonlabError):
    """A computed object violates one of its declared invariants (CLI exit 3)."""


class InconsistentMeasureError(InvariantViolationError):
    """Spectral measure breaks the conjugate/antipodal symmetry closure."""


class DomainError(RadonlabError):
    """Operation evaluated outside its mathematical domain (CLI exit 4)."""


class PreconditionError(DomainError):
    """A stated operation precondition does not hold for these arguments."""


class UnsupportedDimensionError(DomainError):
    """Requested ambient dimension has no deterministic rule."""


class DegenerateMeasureError(DomainError):
    """Sampling from a measure with zero total mass."""


# CLI contract: 0 pass, 1 assertion fail, 2 parse error, 3 invariant violation,
# 4 domain error.
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_DOMAIN = 4


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code contract."""
    if isinstance(exc, DomainError):
        return EXIT_DOMAIN
    if isinstance(exc, InvariantViolationError):
        return EXIT_INVARIANT
    if isinstance(exc, (InvalidInputError, ValueError, KeyError, TypeError, OSError)):
        return EXIT_PARSE
    return EXIT_FAIL
