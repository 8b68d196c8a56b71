"""Exception types shared across the package."""


class WellconnError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WellconnError):
    """A malformed input line; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InvalidArgumentError(WellconnError, ValueError):
    """An argument outside its documented domain."""


class SizeLimitError(WellconnError):
    """Input exceeds a hard size limit of an exhaustive routine."""


class UnknownLabelError(WellconnError):
    """A node label that does not exist in the target graph."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class FormatError(WellconnError):
    """Structurally valid input that violates a format rule (e.g. duplicates)."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConsistencyError(WellconnError):
    """Two structures that are required to be consistent are not."""


class DegenerateDistributionError(WellconnError):
    """A sample with no spread where a distribution fit was requested."""


class SampleSizeError(WellconnError):
    """Too few samples for a statistically meaningful fit."""


class RecursionBudgetError(WellconnError):
    """Recursion depth bound exceeded; carries partial diagnostics."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
