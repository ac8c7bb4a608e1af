"""Exception types shared across the package.

Each class maps to a distinct CLI exit code (see cli.EXIT_CODES).
"""


class DeltaGradError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(DeltaGradError):
    """Shapes of dataset, parameters, or vectors do not agree."""


class ParseError(DeltaGradError):
    """Malformed input file; message carries the offending location."""


class CacheFormatError(DeltaGradError):
    """Cache or model file is structurally invalid (magic, version, truncation)."""


class FingerprintMismatchError(CacheFormatError):
    """Cached history does not belong to the supplied dataset."""


class DivergenceError(DeltaGradError):
    """Non-finite loss, gradient, or parameters encountered while iterating."""

    def __init__(self, iteration, message, last_finite=None):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration
        self.last_finite = last_finite


class FactorizationError(DeltaGradError):
    """Cholesky factorization of the curvature middle matrix failed.

    Callers treat the current iteration as an explicit-gradient iteration.
    """


class ChangeSetError(DeltaGradError):
    """Invalid deletion/addition request (bad index, duplicate, already deleted)."""


class PrivacyBoundError(DeltaGradError):
    """The noise-calibration bound is undefined for the given parameters."""
