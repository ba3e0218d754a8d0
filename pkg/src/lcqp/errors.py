"""Exception taxonomy shared across the package.

Kept in one place so the CLI and foreign bindings can map every failure
mode onto a stable name.
"""

__all__ = [
    "LcqpError",
    "DimensionMismatch",
    "NonSymmetricQ",
    "NonFiniteEntry",
    "SchemaError",
    "ZeroPivotError",
    "WrongInertia",
    "OracleTooLarge",
]


class LcqpError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(LcqpError):
    """Matrix or vector shapes are inconsistent with the declared (n, m, p)."""


class NonSymmetricQ(LcqpError):
    """The quadratic cost matrix is not symmetric within tolerance."""


class NonFiniteEntry(LcqpError):
    """Problem data contains NaN or infinite entries."""


class SchemaError(LcqpError):
    """A problem or result file violates the documented schema."""


class ZeroPivotError(LcqpError):
    """LDL factorization hit a pivot below the breakdown threshold."""

    def __init__(self, index):
        super().__init__(f"zero pivot at elimination index {index}")
        self.index = index


class WrongInertia(LcqpError):
    """Factorization succeeded but D has the wrong sign counts."""

    def __init__(self, got, expected):
        super().__init__(f"inertia {got}, expected {expected}")
        self.got = got
        self.expected = expected


class OracleTooLarge(LcqpError):
    """The brute-force oracle was asked to enumerate too many pieces."""
