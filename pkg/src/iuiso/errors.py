"""Exception types shared across the package."""
from __future__ import annotations

from dataclasses import dataclass


class IuisoError(Exception):
    pass


@dataclass
class SourceSpan:
    start: int
    end: int


class ParseError(IuisoError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at {span.start}..{span.end}")
        self.message = message
        self.span = span


class StepBudgetExceeded(IuisoError):
    """A reduction or rewrite loop ran past its budget; signals a bug."""


class SpineCapExceeded(IuisoError):
    """An erasure search hit the component cap for a single spine."""


class InvalidRedex(IuisoError):
    pass


class StrataMismatch(IuisoError):
    pass


class NotFhi(IuisoError):
    pass


class NotDerivable(IuisoError):
    def __init__(self, conjunct_index: int):
        super().__init__(f"no target conjunct covers source conjunct {conjunct_index}")
        self.conjunct_index = conjunct_index


class CheckError(IuisoError):
    def __init__(self, reason: str, path: tuple[int, ...] = ()):
        super().__init__(f"{reason} at premise path {list(path)}")
        self.reason = reason
        self.path = path


class ShapeMismatch(IuisoError):
    pass


class BrokenChain(IuisoError):
    pass


class NotNormal(IuisoError):
    pass


class NotFhp(IuisoError):
    pass


class DecompositionUnsupported(IuisoError):
    pass
