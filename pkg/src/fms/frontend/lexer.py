"""Tokenizer shared by the Full-language parser and the Core reader."""

from __future__ import annotations

import re
from dataclasses import dataclass

from fms.errors import FmsSyntaxError, Loc

SYMBOLS = [
    "<=>", "::", ":=", "=>", "<=", ">=", "~=", "<-", "->", "||", "..",
    "|", "&", "=", "<", ">", "+", "-", "*", "/", "%", "\\",
    "(", ")", "{", "}", "[", "]", ",", ";", ".", "!", "?", "_",
]  # fmt: skip

KEYWORDS = frozenset({"let", "in", "case", "of", "if", "then", "else", "not"})

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
# Core dumps contain generated names such as temp#0.
_CORE_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*(#[0-9]+)?")
_INT = re.compile(r"[0-9]+")
_SPACE = re.compile(r"[ \t\r\n]+")
_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str  # INT | STRING | IDENT | SYM | EOF
    value: object
    loc: Loc

    def is_sym(self, *symbols: str) -> bool:
        return self.kind == "SYM" and self.value in symbols

    def is_kw(self, *words: str) -> bool:
        return self.kind == "IDENT" and self.value in words

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "STRING":
            return f'"{self.value}"'
        return repr(str(self.value))


def tokenize(source: str, filename: str = "<input>", core: bool = False) -> list[Token]:
    ident = _CORE_IDENT if core else _IDENT
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(source)
    while pos < n:
        loc = Loc(filename, line, pos - line_start + 1)
        ch = source[pos]
        m = _SPACE.match(source, pos)
        if m:
            text = m.group()
            nl = text.count("\n")
            if nl:
                line += nl
                line_start = pos + text.rindex("\n") + 1
            pos = m.end()
            continue
        if source.startswith("//", pos):
            end = source.find("\n", pos)
            pos = n if end < 0 else end
            continue
        if ch == '"':
            buf = []
            i = pos + 1
            while True:
                if i >= n or source[i] == "\n":
                    raise FmsSyntaxError("unterminated string literal", loc)
                c = source[i]
                if c == '"':
                    break
                if c == "\\" and i + 1 < n and source[i + 1] in _ESCAPES:
                    buf.append(_ESCAPES[source[i + 1]])
                    i += 2
                    continue
                buf.append(c)
                i += 1
            tokens.append(Token("STRING", "".join(buf), loc))
            pos = i + 1
            continue
        m = _INT.match(source, pos)
        if m:
            tokens.append(Token("INT", int(m.group()), loc))
            pos = m.end()
            continue
        m = ident.match(source, pos)
        if m:
            tokens.append(Token("IDENT", m.group(), loc))
            pos = m.end()
            continue
        for sym in SYMBOLS:
            if source.startswith(sym, pos):
                tokens.append(Token("SYM", sym, loc))
                pos += len(sym)
                break
        else:
            raise FmsSyntaxError(f"unexpected character {ch!r}", loc)
    tokens.append(Token("EOF", None, Loc(filename, line, pos - line_start + 1)))
    return tokens


class TokenStream:
    """Cursor over a token list with the usual expect/accept helpers."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def ahead(self, k: int) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def accept(self, *symbols: str) -> Token | None:
        if self.peek.is_sym(*symbols):
            return self.next()
        return None

    def accept_kw(self, *words: str) -> Token | None:
        if self.peek.is_kw(*words):
            return self.next()
        return None

    def expect(self, symbol: str) -> Token:
        if not self.peek.is_sym(symbol):
            self.error(f"expected {symbol!r}")
        return self.next()

    def expect_kw(self, word: str) -> Token:
        if not self.peek.is_kw(word):
            self.error(f"expected {word!r}")
        return self.next()

    def expect_ident(self) -> Token:
        tok = self.peek
        if tok.kind != "IDENT" or tok.value in KEYWORDS:
            self.error("expected an identifier")
        return self.next()

    def error(self, message: str):
        tok = self.peek
        raise FmsSyntaxError(f"{message}, found {tok.describe()}", tok.loc)
