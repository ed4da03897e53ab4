"""Exception hierarchy shared across the package."""


class EdiscoError(Exception):
    """Base class for all errors raised by edisco."""


class DomainError(EdiscoError, ValueError):
    """An argument lies outside the domain of the operation."""


class SizeError(DomainError):
    """A brute-force routine was asked to enumerate too large a problem."""


class ScoreError(EdiscoError, ArithmeticError):
    """A test statistic is undefined for the given data."""


class ParseError(EdiscoError, ValueError):
    """Malformed input file.

    ``row`` and ``column`` are 1-based positions in the file when known.
    """

    def __init__(self, message, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.column = column
