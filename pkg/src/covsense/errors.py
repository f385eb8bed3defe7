"""Exception types shared across the package."""


class CovsenseError(Exception):
    """Base class for all covsense errors."""


class MalformedBuffer(CovsenseError):
    """Sample buffer has the wrong length or non-finite samples."""


class AllZeroInput(CovsenseError):
    """Every diagonal covariance entry is zero; the ratio statistic is undefined."""


class InvalidPsi(CovsenseError):
    """A caller-supplied psi functional returned a negative value."""


class DomainError(CovsenseError):
    """Argument outside the mathematical domain of a formula."""


class InvalidDesign(CovsenseError):
    """Detection design parameters violate the validity region of the analytic formulas."""


class DegenerateDesign(CovsenseError):
    """Zero correlation strength or SNR: no finite sample count exists."""


class SingularFilter(CovsenseError):
    """Filter Gram matrix is numerically singular; no whitening transform exists."""


class DimensionMismatch(CovsenseError):
    """Matrix dimensions do not agree."""


class InvalidSpec(CovsenseError):
    """Inconsistent experiment or signal specification."""


class ZeroSignal(CovsenseError):
    """Signal has zero power where positive power is required."""
