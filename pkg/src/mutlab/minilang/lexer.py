"""Tokenizer for MiniLang source text."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

KEYWORDS = frozenset(
    [
        "fn",
        "let",
        "if",
        "else",
        "while",
        "switch",
        "case",
        "default",
        "return",
        "true",
        "false",
        "int",
        "bool",
        "void",
    ]
)

# Longest first so maximal munch falls out of the scan order.
_SYMBOLS = (
    "->",
    "++",
    "--",
    "<=",
    ">=",
    "==",
    "!=",
    "&&",
    "||",
    "+",
    "-",
    "*",
    "/",
    "%",
    "<",
    ">",
    "=",
    "!",
    "&",
    "|",
    "^",
    "(",
    ")",
    "{",
    "}",
    ",",
    ";",
    ":",
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", keyword text, symbol text, or "eof"
    text: str
    line: int
    col: int
    start: int
    end: int

    @property
    def value(self) -> int:
        return int(self.text)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(source)

    def advance(count: int) -> None:
        nonlocal pos, line, col
        for _ in range(count):
            if source[pos] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1

    while pos < n:
        ch = source[pos]
        if ch in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", pos):
            while pos < n and source[pos] != "\n":
                advance(1)
            continue
        if ch.isdigit():
            start, sline, scol = pos, line, col
            while pos < n and source[pos].isdigit():
                advance(1)
            tokens.append(Token("int", source[start:pos], sline, scol, start, pos))
            continue
        if ch.isalpha() or ch == "_":
            start, sline, scol = pos, line, col
            while pos < n and (source[pos].isalnum() or source[pos] == "_"):
                advance(1)
            text = source[start:pos]
            kind = text if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, sline, scol, start, pos))
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, pos):
                start, sline, scol = pos, line, col
                advance(len(sym))
                tokens.append(Token(sym, sym, sline, scol, start, pos))
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)

    tokens.append(Token("eof", "", line, col, pos, pos))
    return tokens
