from __future__ import annotations

__all__ = [
    "IcviError",
    "IcviValueError",
    "IcviDimensionError",
    "IcviRangeError",
    "IcviKeyError",
    "IcviStateError",
    "IcviConfigError",
    "IcviDataError",
    "IcviNumericalError",
    "IcviFileNotFoundError",
    "IcviWarning",
    "IcviHeaderWarning",
]


class IcviError(Exception):
    """streaming-icvi base error"""


class IcviValueError(ValueError, IcviError):
    """streaming-icvi value error"""


class IcviDimensionError(IcviValueError):
    """sample dimension does not match the stream dimension"""


class IcviRangeError(IcviValueError):
    """sample component outside the normalized range [0, 1]"""


class IcviKeyError(KeyError, IcviError):
    """unknown prototype or cluster id"""


class IcviStateError(RuntimeError, IcviError):
    """operation is not valid in the current state"""


class IcviConfigError(IcviValueError):
    """invalid or incompatible experiment configuration"""


class IcviDataError(IcviValueError):
    """malformed input data.

    Args:
        message: error description
        row: zero-based row of the offending cell, if known
        column: zero-based column of the offending cell, if known
    """

    def __init__(
        self, message: str, *, row: int | None = None, column: int | None = None
    ) -> None:
        location = [
            f"{name} {value}"
            for name, value in (("row", row), ("column", column))
            if value is not None
        ]
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class IcviNumericalError(ArithmeticError, IcviError):
    """numerical failure the covariance floor should have prevented"""


class IcviFileNotFoundError(FileNotFoundError, IcviError):
    """streaming-icvi file not found error."""


class IcviWarning(UserWarning):
    """streaming-icvi warning."""


class IcviHeaderWarning(IcviWarning):
    """a header row was detected and skipped while reading a data file."""
