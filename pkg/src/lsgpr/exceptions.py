"""Exception types shared across the package."""


class LsgprError(Exception):
    """Base class for all package-specific errors."""


class SingularMatrixError(LsgprError):
    """Cholesky factorization failed even at the largest jitter level."""

    def __init__(self, message, jitters_tried=()):
        super().__init__(message)
        self.jitters_tried = tuple(jitters_tried)


class NumericalError(LsgprError):
    """A numerical invariant was violated (e.g. variance below tolerance)."""


class ConfigError(LsgprError):
    """Invalid run configuration (unknown key, bad value, missing setting)."""


class DataError(LsgprError):
    """Base class for dataset ingestion problems."""


class DataFileError(DataError):
    """The dataset file is missing, unreadable, or structurally broken."""


class NonNumericCellError(DataError):
    """A CSV cell could not be parsed as a number."""

    def __init__(self, path, row, column):
        super().__init__(f"{path}: non-numeric cell at row {row}, column {column}")
        self.row = row
        self.column = column


class TargetColumnError(DataError):
    """The requested target column does not exist in the file."""
