"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to distinct
process exit statuses without a lookup table of its own.
"""


class NdlombError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class EmptyAfterFilter(NdlombError):
    """No finite-valued sample remained after dropping missing rows."""

    exit_code = 10


class DimensionMismatch(NdlombError):
    """Coordinate vectors (or grid and samples) disagree in dimension."""

    exit_code = 11


class BadRange(NdlombError):
    """An axis range is empty or a step is not positive."""

    exit_code = 12


class BadInput(NdlombError):
    """A scalar argument is outside its admissible domain."""

    exit_code = 13


class BadN(NdlombError):
    """Sample count too small for the requested statistic."""

    exit_code = 14


class ZeroVariance(NdlombError):
    """All sample values are equal, the PSD normalisation is undefined."""

    exit_code = 15


class DegenerateDenominator(NdlombError):
    """The sampling does not constrain the cosine or sine term at this frequency."""

    exit_code = 16


class SingularSystem(NdlombError):
    """The 2x2 normal equations of the least-squares oracle are singular."""

    exit_code = 17


class AllMissing(NdlombError):
    """A gridded field has no finite value at all."""

    exit_code = 18


class FormatError(NdlombError):
    """A CSV or config file does not follow the documented layout."""

    exit_code = 19


class ZeroResidual(UserWarning):
    """Model residuals vanish; the SNR is reported as +inf and sigma_f as 0."""


class FapUnavailable(UserWarning):
    """FAP cannot be evaluated for this sample count; the column is left empty."""


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        NdlombError,
        EmptyAfterFilter,
        DimensionMismatch,
        BadRange,
        BadInput,
        BadN,
        ZeroVariance,
        DegenerateDenominator,
        SingularSystem,
        AllMissing,
        FormatError,
    )
}
