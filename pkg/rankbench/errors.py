from typing import Optional, Sequence

__all__ = ['RankbenchError', 'FormatError', 'RowError', 'DomainError', 'UnknownUniversityError', 'UsageError']


class RankbenchError(Exception):
    """
    Base class for all errors raised by rankbench.
    """


class FormatError(RankbenchError, ValueError):
    """
    The input table is malformed as a whole (missing column, empty input).
    """

    def __init__(self, message: str, column: Optional[str] = None):
        super().__init__(message)
        self.column = column


class RowError(FormatError):
    """
    A single data row of the input table is unusable.

    Attributes:
        row: the 1-based physical line number of the record in the input (the header is line 1).
        column: the offending column, if known.
    """

    def __init__(self, message: str, row: int, column: Optional[str] = None):
        super().__init__(f'row {row}: {message}', column)
        self.row = row


class DomainError(RankbenchError, ValueError):
    """
    A precondition of a computation does not hold.
    """


class UnknownUniversityError(RankbenchError, LookupError):
    def __init__(self, name: str, suggestions: Sequence[str] = ()):
        message = f'unknown university {name!r}'
        if suggestions:
            message += '; did you mean: ' + ', '.join(repr(s) for s in suggestions)
        super().__init__(message)
        self.name = name
        self.suggestions = tuple(suggestions)

    def __str__(self):
        return self.args[0]


class UsageError(RankbenchError):
    """
    The command line arguments are invalid or conflicting.
    """
