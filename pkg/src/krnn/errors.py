"""Exception types shared across the toolkit."""


class KrnnError(Exception):
    """Base class for all toolkit errors."""


class InvalidTourError(KrnnError):
    """Vertex sequence is not a permutation of 0..n-1."""


class InvalidSizeError(KrnnError):
    """Instance size outside the legal range (n >= 2)."""


class InvalidInstanceError(KrnnError):
    """Instance data violates a structural invariant (asymmetry, negative weight, ...)."""


class UnsupportedFormatError(KrnnError):
    """TSPLIB file uses an edge weight type or format outside the supported set."""


class TsplibParseError(KrnnError):
    """Malformed TSPLIB input; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InstanceNotFoundError(KrnnError):
    """A named instance file is missing from the data directory."""


class InvalidPrefixError(KrnnError):
    """Prefix contains duplicate or out-of-range vertices."""


class InvalidKError(KrnnError):
    """Requested prefix length k exceeds the instance size."""


class PrefixLimitError(KrnnError):
    """Prefix enumeration would exceed the configured guard limit."""


class SizeRefusedError(KrnnError):
    """Instance too large for an exact oracle's enforced cap."""


class BudgetExceededError(KrnnError):
    """Per-instance time budget ran out before enumeration finished."""


class DegreeViolationError(KrnnError):
    """Spanning tree vertex degree too high for the degree-reduction step."""


class PreconditionError(KrnnError):
    """Operation invoked outside its stated precondition."""


class InvalidOptimumError(KrnnError):
    """Known-optimum value must be positive."""
