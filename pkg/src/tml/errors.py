"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TmlError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TmlError):
    """Malformed source text; carries a position when one is known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.col}: {self.message}"


class TypingError(TmlError):
    """Ill-typed term or formula, or a bad declaration."""


class TypeMismatch(TmlError):
    """Substitution with a term whose type differs from the variable's."""


class CaptureRisk(TmlError):
    """Substitution whose term contains a variable bound in the target."""


class UnboundVariable(TmlError):
    """Evaluation reached a variable the valuation does not cover."""


class ModelError(TmlError):
    """Structurally invalid model (non-total interpretation, bad sorts, ...)."""


class BoundsTooLarge(TmlError):
    """Countermodel enumeration would exceed the configured ceiling."""


class TooManyAtoms(TmlError):
    """Tautology check over a skeleton with too many distinct letters."""


class SideConditionViolated(TmlError):
    """Axiom-schema instantiation violating one of its side conditions."""
