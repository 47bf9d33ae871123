"""Tokenizer for SL source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import Span

KEYWORDS = frozenset(
    {"let", "in", "type", "fun", "case", "end", "if", "then", "else", "test", "true", "false"}
)

# Longest first: the scanner takes the first alternative that matches.
PUNCTUATION = (
    "??", "->", "=>", "::", "++", "==",
    "(", ")", "[", "]", ",", ":", "=", "|", "+", "-", "*", "/", "<", ">", "?",
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUMBER = re.compile(r"\d+(\.\d+)?")


class LexError(Exception):
    def __init__(self, span: Span, message: str):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


@dataclass(frozen=True)
class Token:
    """A lexeme. `kind` is one of: ident, uident, int, float, string,
    keyword, punct, hole, genhole, eof. For keywords and punctuation the
    text itself identifies the token."""

    kind: str
    text: str
    span: Span
    value: object = None

    def __repr__(self) -> str:
        return f"{self.kind}:{self.text}"


@dataclass(frozen=True)
class Comment:
    text: str
    span: Span


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    return Lexer(source, file).run()[0]


class Lexer:
    def __init__(self, source: str, file: str = "<input>"):
        self.src = source
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.comments: list[Comment] = []

    def _advance(self, n: int) -> None:
        for ch in self.src[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def _span_from(self, line: int, col: int) -> Span:
        # end column is inclusive of the last character
        return Span(self.file, line, col, self.line, max(self.col - 1, 1))

    def _emit(self, kind: str, text: str, value=None) -> None:
        line, col = self.line, self.col
        self._advance(len(text))
        self.tokens.append(Token(kind, text, self._span_from(line, col), value))

    def run(self) -> tuple[list[Token], list[Comment]]:
        src = self.src
        while self.pos < len(src):
            ch = src[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif src.startswith("(*", self.pos):
                self._comment()
            elif ch == '"':
                self._string()
            elif "0" <= ch <= "9":
                m = _NUMBER.match(src, self.pos)
                text = m.group(0)
                if m.group(1):
                    self._emit("float", text, float(text))
                else:
                    self._emit("int", text, int(text))
            elif (ch.isascii() and ch.isalpha()) or ch == "_":
                self._ident()
            else:
                for p in PUNCTUATION:
                    if src.startswith(p, self.pos):
                        kind = {"??": "genhole", "?": "hole"}.get(p, "punct")
                        self._emit(kind, p)
                        break
                else:
                    span = Span(self.file, self.line, self.col, self.line, self.col)
                    raise LexError(span, f"illegal character {ch!r}")
        eof = Span(self.file, self.line, self.col, self.line, self.col)
        self.tokens.append(Token("eof", "", eof))
        return self.tokens, self.comments

    def _ident(self) -> None:
        m = _IDENT.match(self.src, self.pos)
        text = m.group(0)
        # Module-qualified value names such as List.length lex as one token.
        if text[0].isupper():
            end = m.end()
            q = _IDENT.match(self.src, end + 1) if self.src[end:end + 1] == "." else None
            if q and q.group(0)[0].islower():
                self._emit("ident", self.src[self.pos:q.end()])
                return
            self._emit("uident", text)
        elif text == "_":
            self._emit("punct", "_")
        elif text in KEYWORDS:
            self._emit("keyword", text)
        else:
            self._emit("ident", text)

    def _comment(self) -> None:
        line, col, start = self.line, self.col, self.pos
        depth = 0
        while self.pos < len(self.src):
            if self.src.startswith("(*", self.pos):
                depth += 1
                self._advance(2)
            elif self.src.startswith("*)", self.pos):
                depth -= 1
                self._advance(2)
                if depth == 0:
                    body = self.src[start + 2:self.pos - 2].strip()
                    self.comments.append(Comment(body, self._span_from(line, col)))
                    return
            else:
                self._advance(1)
        raise LexError(Span(self.file, line, col, line, col + 1), "unterminated comment")

    def _string(self) -> None:
        line, col = self.line, self.col
        i = self.pos + 1
        out = []
        escapes = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}
        while i < len(self.src):
            ch = self.src[i]
            if ch == '"':
                text = self.src[self.pos:i + 1]
                self._advance(len(text))
                self.tokens.append(Token("string", text, self._span_from(line, col), "".join(out)))
                return
            if ch == "\\" and i + 1 < len(self.src) and self.src[i + 1] in escapes:
                out.append(escapes[self.src[i + 1]])
                i += 2
                continue
            if ch == "\n":
                break
            out.append(ch)
            i += 1
        raise LexError(Span(self.file, line, col, line, col), "unterminated string literal")
