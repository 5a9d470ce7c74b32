"""Exception types raised by elfsom.

Everything derives from :class:`ElfSomError`.  :class:`DataError` marks
problems with the input data (the CLI maps it to exit status 2).
"""


class ElfSomError(Exception):
    """Base class for all elfsom errors."""


class DataError(ElfSomError, ValueError):
    """The input data violates a format or content rule."""


class RowError(DataError):
    """A CSV data row is invalid.  ``row`` is 1-based, the header is row 1."""

    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


class MissingHeader(DataError):
    def __init__(self, found: str = ""):
        self.found = found
        msg = "missing or malformed header line"
        if found:
            msg += f" (got {found!r})"
        super().__init__(msg)


class MalformedRow(RowError):
    def __init__(self, row: int, n_fields: int, expected: int):
        self.n_fields = n_fields
        super().__init__(row, f"expected {expected} fields, got {n_fields}")


class UnknownPosition(RowError):
    def __init__(self, row: int, token: str):
        self.token = token
        super().__init__(row, f"unknown measurement position {token!r}")


class NonNumericField(RowError):
    def __init__(self, row: int, column: str, token: str):
        self.column = column
        self.token = token
        super().__init__(row, f"column {column!r} is not a finite number: {token!r}")


class NegativeField(RowError):
    def __init__(self, row: int, column: str = "b_total_ut"):
        self.column = column
        super().__init__(row, f"column {column!r} must be >= 0")


class NonPositiveFrequency(RowError):
    def __init__(self, row: int):
        super().__init__(row, "column 'frequency_hz' must be > 0")


class EmptyAdapterId(RowError):
    def __init__(self, row: int):
        super().__init__(row, "column 'adapter_id' is empty")


class EmptyPosition(DataError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"no samples at position {position}")


class GridMismatch(DataError):
    def __init__(self, missing_a, missing_b):
        self.missing_a = tuple(missing_a)
        self.missing_b = tuple(missing_b)
        super().__init__(
            "frequency grids differ: "
            f"{len(self.missing_a)} frequencies only in B, {len(self.missing_b)} only in A"
        )


class EmptyDataset(DataError):
    def __init__(self, what: str = "dataset"):
        super().__init__(f"{what} is empty")


class InvalidRange(ElfSomError, ValueError):
    def __init__(self, dim: int, low: float, high: float):
        super().__init__(f"dimension {dim}: low {low} > high {high}")


class DimensionMismatch(ElfSomError, ValueError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected input of dimension {expected}, got {got}")


class IndexOutOfRange(ElfSomError, IndexError):
    pass


class NotOneDimensional(ElfSomError, ValueError):
    pass


class InvalidConfig(ElfSomError, ValueError):
    pass


class EmptyInput(DataError):
    pass


class NonPositiveK(ElfSomError, ValueError):
    pass


class ModelFormatError(DataError):
    """A trained-model file cannot be parsed."""
