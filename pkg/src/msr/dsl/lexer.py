"""Tokenizer for scenario files."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MsrError


class DslError(MsrError):
    """An error tied to a location in the scenario source."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self):
        return f"line {self.line}, col {self.col}: {self.message}"


class ParseError(DslError):
    pass


class SemanticError(DslError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IDENT, OP, NEWLINE, EOF
    text: str
    line: int
    col: int
    end: int  # offset just past the token


OPS = set("+-*/^(),[]=")
MAX_SOURCE = 1_000_000


def tokenize(src: str) -> list[Token]:
    if len(src) > MAX_SOURCE:
        raise ParseError("source too large", 1, 1)
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    depth = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            if depth == 0 and toks and toks[-1].kind != "NEWLINE":
                toks.append(Token("NEWLINE", "\n", line, col, i + 1))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j - i > 200:
                raise ParseError("numeric literal too long", line, col)
            toks.append(Token("NUM", src[i:j], line, col, j))
            col += j - i
            i = j
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and src[j].isascii() and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(Token("IDENT", src[i:j], line, col, j))
            col += j - i
            i = j
            continue
        if ch in OPS:
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth = max(depth - 1, 0)
            toks.append(Token("OP", ch, line, col, i + 1))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    if toks and toks[-1].kind != "NEWLINE":
        toks.append(Token("NEWLINE", "\n", line, col, n))
    toks.append(Token("EOF", "", line, col, n))
    return toks
