"""A small regex tokenizer shared by the text formats."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "num", "op", "eof"
    text: str
    line: int
    col: int


_OPS = [":=", "=>", "<=", "!=", "->", "^-1",
        ":", ";", ",", "(", ")", "[", "]", "{", "}", "<", ">", "=", "!", "&", "|",
        "?", "+", ".", "*", "@", "~"]
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<num>\d+)"
    r"|(?P<op>" + "|".join(re.escape(o) for o in sorted(_OPS, key=len, reverse=True)) + ")"
)


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("op", "name") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def name(self, what: str = "identifier") -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail(f"expected {what}")
        self.pos += 1
        return tok.text

    def fail(self, message: str, tok: Token = None):
        tok = tok or self.peek()
        found = tok.text if tok.kind != "eof" else "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.col)
