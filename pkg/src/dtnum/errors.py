"""Exception hierarchy shared by all modules.

Every error carries a stable machine-readable ``code`` which the CLI
prints on stderr, so scripts can dispatch on failures without parsing
prose messages.
"""

from __future__ import annotations


class NumerationError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "Error"


class DslSyntaxError(NumerationError):
    """Malformed substitution rule text."""

    code = "SyntaxError"


class EmptyImageError(NumerationError):
    code = "EmptyImage"


class UnknownLetterError(NumerationError):
    code = "UnknownLetter"


class NoGrowingLetterError(NumerationError):
    code = "NoGrowingLetter"


class InvalidSeedError(NumerationError):
    code = "InvalidSeed"


class OffsetOutOfRangeError(NumerationError):
    code = "OffsetOutOfRange"


class SideMissingError(NumerationError):
    code = "SideMissing"


class DigitOutOfRangeError(NumerationError):
    code = "DigitOutOfRange"


class NotFixedPointSeedError(NumerationError):
    code = "NotFixedPointSeed"


class CapExceededError(NumerationError):
    code = "CapExceeded"


class NotPositionalSystemError(NumerationError):
    code = "NotPositionalSystem"


class NotLengthUniformError(NumerationError):
    """Image lengths differ across the non-final letters.

    ``witness`` holds ``(letter1, letter2, exponent, length1, length2)``.
    """

    code = "NotLengthUniform"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ShapeMismatchError(NumerationError):
    code = "ShapeMismatch"
