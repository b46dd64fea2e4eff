"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class BradfordError(Exception):
    """Base class for every error raised by the package."""


class DataError(BradfordError, ValueError):
    """Input data violates a documented precondition."""


class ParseError(DataError):
    """Malformed input file.

    ``offset`` is a byte offset for markup formats, ``line`` a 1-based line
    number for line-oriented formats.
    """

    def __init__(self, message: str, *, offset: int | None = None, line: int | None = None,
                 source: str | None = None):
        self.offset = offset
        self.line = line
        self.source = source
        where = []
        if source:
            where.append(source)
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + message)


class DuplicateIdError(DataError):
    def __init__(self, identifier, message: str | None = None):
        self.identifier = identifier
        super().__init__(message or f"duplicate id {identifier!r}")


class PartitionError(DataError):
    pass


class UndefinedImprovementError(DataError):
    """Reference precision is zero."""


class StatTestError(DataError):
    pass


class NoInformationError(StatTestError):
    """Every paired difference is zero."""


class InsufficientDataError(StatTestError):
    pass


class DegenerateVarianceError(StatTestError):
    pass
