"""
Exception hierarchy for the algebra engine.

Every engine error derives from AlgebraError, which is also a ValueError so
callers that only care about "bad input" can catch the builtin.
"""

from typing import Iterable, Optional


class AlgebraError(ValueError):
    """Base class for all engine errors."""


class RingMismatchError(AlgebraError):
    """Operands live over different variable sets."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"ring mismatch: {left} vs {right}")


class UnknownVariableError(AlgebraError):
    """A variable name is not declared in the active ring."""

    def __init__(self, name: str, ring=None):
        self.name = name
        self.ring = ring
        where = f" in {ring}" if ring is not None else ""
        super().__init__(f"unknown variable {name!r}{where}")


class ZeroPolynomialError(AlgebraError):
    """An operation that needs a nonzero polynomial received zero."""


class DimensionMismatchError(AlgebraError):
    """Vector or matrix dimensions do not agree."""


class NotOnVarietyError(AlgebraError):
    """A point does not satisfy the generators it was evaluated against."""


class InvalidArgumentError(AlgebraError):
    """An argument is outside its documented range."""


class ParseError(AlgebraError):
    """
    Syntax error in an ideal expression.

    Attributes:
        offset: byte offset (UTF-8) of the offending token in the source
        expected: sorted tuple of token descriptions that would have been accepted
    """

    def __init__(self, message: str, offset: int, expected: Optional[Iterable[str]] = None):
        self.message = message
        self.offset = offset
        self.expected = tuple(sorted(set(expected or ())))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f", expected {' or '.join(self.expected)}"
        super().__init__(detail)


class LimitExceededError(AlgebraError):
    """A computation would exceed a configured size limit."""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what} needs {size} but the limit is {limit}")
