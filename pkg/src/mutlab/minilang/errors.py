"""Exception types shared across the MiniLang front end and runtime."""

from __future__ import annotations


class MiniLangError(Exception):
    """Base class for all MiniLang input errors."""


class ParseError(MiniLangError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class StaticCheckError(MiniLangError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")
        self.message = message
        self.line = line
        self.col = col


class TestCaseError(MiniLangError):
    """A test case does not bind to the program (entry/arity/kind mismatch)."""
