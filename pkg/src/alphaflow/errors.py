"""Exception types raised across the package."""

from __future__ import annotations


class AlphaFlowError(Exception):
    """Base class for all package errors."""


# field construction / arithmetic
class CompositeP(AlphaFlowError, ValueError):
    pass


class EvenP(AlphaFlowError, ValueError):
    pass


class DegreeTooLarge(AlphaFlowError, ValueError):
    pass


class DivisionByZero(AlphaFlowError, ZeroDivisionError):
    pass


class FieldTooLarge(AlphaFlowError, ValueError):
    pass


# graphs
class MalformedLine(AlphaFlowError, ValueError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: cannot parse {line!r}")
        self.lineno = lineno
        self.line = line


class NegativeIndex(AlphaFlowError, ValueError):
    pass


class EmptyGraph(AlphaFlowError, ValueError):
    pass


class UnknownName(AlphaFlowError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class EmptySubset(AlphaFlowError, ValueError):
    pass


class HasLoops(AlphaFlowError, ValueError):
    pass


class Disconnected(AlphaFlowError, ValueError):
    pass


class ZeroWeight(AlphaFlowError, ValueError):
    pass


class EmptyRoots(AlphaFlowError, ValueError):
    pass


# resource guards
class TooLarge(AlphaFlowError, ValueError):
    pass


class SearchSpaceTooLarge(TooLarge):
    pass


# engine faults: these signal bugs, never valid outcomes
class OddRankResidue(AlphaFlowError, ArithmeticError):
    pass


class NonIntegerResult(AlphaFlowError, ArithmeticError):
    pass
