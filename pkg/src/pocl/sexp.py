"""Minimal s-expression reader with source positions.

Symbols are case-insensitive: anything starting with ``?`` or ``:`` and every
bare word that names a predicate/keyword is folded to lower case by the
callers in :mod:`pocl.lang`; this module only tokenizes and nests.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(ValueError):
    """Malformed input; ``line``/``col`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class Sym:
    """An atom together with where it was read."""

    text: str
    line: int
    col: int

    def __str__(self) -> str:
        return self.text


class SList(list):
    """A parenthesised list; remembers the position of its opening paren."""

    line: int = 0
    col: int = 0


def _tokens(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            i += 1
            col += 1
        else:
            start, start_col = i, col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            yield text[start:i], line, start_col


def read_all(text: str) -> list:
    """Read every top-level form in ``text``.

    Returns a list whose items are :class:`Sym` or nested :class:`SList`.
    """
    stack: list[SList] = []
    top: list = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            lst = SList()
            lst.line, lst.col = line, col
            stack.append(lst)
        elif tok == ")":
            if not stack:
                raise ParseError("unexpected ')'", line, col)
            done = stack.pop()
            (stack[-1] if stack else top).append(done)
        else:
            (stack[-1] if stack else top).append(Sym(tok, line, col))
    if stack:
        raise ParseError("unclosed '('", stack[-1].line, stack[-1].col)
    return top


def position(form) -> tuple[int | None, int | None]:
    return getattr(form, "line", None), getattr(form, "col", None)
