# Exception hierarchy for GeoSpec
"""
Errors raised by the laboratory.

Every error carries the process exit code the command-line front end maps it
to: 2 configuration, 3 I/O, 4 integrity, 5 numeric failure.
"""

from typing import Optional


class GeospecError(Exception):
    """Base class for all GeoSpec errors."""

    exit_code: int = 5


# Configuration (exit 2)

class ConfigError(GeospecError):
    """Malformed or schema-invalid run configuration."""

    exit_code = 2


class BadParameters(ConfigError):
    """Parameters violate a documented precondition (e.g. p not prime)."""


# I/O (exit 3)

class TableIOError(GeospecError):
    """A geodesic table could not be read or written."""

    exit_code = 3


class TruncatedFile(TableIOError):
    """Table file ended before the declared record count."""


class EnumerationBudgetExceeded(TableIOError):
    """Enumeration would exceed the configured word budget."""

    def __init__(self, message: str, suggested_cutoff: Optional[float] = None):
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff


# Integrity (exit 4)

class IntegrityError(GeospecError):
    exit_code = 4


class VersionError(IntegrityError):
    """Wrong magic bytes or unsupported table format version."""


class DigestMismatch(IntegrityError):
    """Table was produced for a different surface model."""


# Numeric (exit 5)

class NumericError(GeospecError):
    exit_code = 5


class NonHyperbolic(NumericError):
    """|trace| <= 2: the element has no translation length."""


class NotInGroup(NumericError):
    """Quaternion quadruple fails the norm-form membership test."""


class BackingMismatch(NumericError):
    """Exact product requested from a float-backed factor."""


class DimensionMismatch(NumericError):
    """Period vector and homology vector have different lengths."""


class RelatorCheckFailed(NumericError):
    """Evaluated surface relator is not +-identity within tolerance."""


class EmptyWindow(NumericError):
    """No geodesic length falls inside the requested window."""


class WindowBeyondCertifiedRange(NumericError):
    """Window reaches past the table's certified completeness radius."""


class InsufficientRange(NumericError):
    """Certified range too short for the requested estimator."""


class OutsideConvergenceRegion(NumericError):
    """Re s does not exceed the critical exponent estimate plus slack."""


class InconsistentInputs(NumericError):
    """Pressure / stable-norm inputs violate the pressure inequalities."""


class NonArithmeticTable(NumericError):
    """Operation needs a table enumerated from an arithmetic model."""


class NonCertifiedSupport(UserWarning):
    """Test-function support extends past the certified range of the table."""
