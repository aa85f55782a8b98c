"""Exception hierarchy.

``DataError`` subclasses map to CLI exit code 2, ``ConfigInvalid`` to exit code 1.
"""

from __future__ import annotations


class HotenError(Exception):
    pass


class DataError(HotenError):
    pass


class ConfigInvalid(HotenError):
    pass


class EmptyInput(DataError):
    pass


class MalformedRow(DataError):
    def __init__(self, line: int, reason: str = ""):
        self.line = line
        super().__init__(f"line {line}: malformed row" + (f" ({reason})" if reason else ""))


class UnsortedTimestamps(DataError):
    def __init__(self, node, line: int):
        self.node = node
        self.line = line
        super().__init__(f"line {line}: timestamps for node {node!r} not strictly increasing")


class OutOfGrid(DataError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"point {point} lies outside the grid")


class SeriesTooShort(DataError):
    pass


class ConstantSeries(DataError):
    pass


class NoUsableCandidate(DataError):
    pass


class LengthMismatch(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class AllPlaceholders(DataError):
    pass
