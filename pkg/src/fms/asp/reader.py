"""Reader for the ASP fragment this package prints.

Used to parse clingo's witness atoms and, in tests, to round-trip printed
programs.
"""

from __future__ import annotations

import json
import re

from fms.asp.syntax import (
    AspProgram,
    Atom,
    BinOp,
    Choice,
    ChoiceElement,
    Comparison,
    Func,
    IntConst,
    Interval,
    Not,
    Rule,
    StrConst,
    Tuple,
    Variable,
)
from fms.errors import JsonParseError

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>:-|\.\.|==|!=|<>|<=|>=|[(){}=<>,;:.+\-*/\\|])
    """,
    re.VERBOSE,
)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise JsonParseError(f"unexpected character {text[pos]!r}", pos)
            if m.lastgroup != "ws":
                self.items.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.items.append(("eof", "", len(text)))
        self.i = 0

    def peek(self, k: int = 0):
        return self.items[min(self.i + k, len(self.items) - 1)]

    def next(self):
        tok = self.items[self.i]
        self.i += 1
        return tok

    def at(self, value: str, k: int = 0) -> bool:
        kind, v, _ = self.peek(k)
        return kind == "sym" and v == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            kind, v, pos = self.peek()
            raise JsonParseError(f"expected {value!r}, found {v or kind!r}", pos)


_ADD = ("+", "-")
_MUL = ("*", "/", "\\")


def _term(t: _Tokens):
    lo = _additive(t)
    if t.accept(".."):
        return Interval(lo, _additive(t))
    return lo


def _additive(t):
    left = _multiplicative(t)
    while t.peek()[0] == "sym" and t.peek()[1] in _ADD:
        op = t.next()[1]
        left = BinOp(op, left, _multiplicative(t))
    return left


def _multiplicative(t):
    left = _unary(t)
    while t.peek()[0] == "sym" and t.peek()[1] in _MUL:
        op = t.next()[1]
        left = BinOp(op, left, _unary(t))
    return left


def _unary(t):
    if t.at("-"):
        t.next()
        inner = _unary(t)
        if isinstance(inner, IntConst):
            return IntConst(-inner.value)
        return BinOp("-", IntConst(0), inner)
    return _simple(t)


def _args(t) -> tuple:
    items = []
    if t.at(")"):
        t.next()
        return ()
    while True:
        items.append(_term(t))
        if t.accept(")"):
            return tuple(items)
        t.expect(",")
        if t.accept(")"):  # trailing comma of a 1-tuple
            return tuple(items) + (None,)


def _simple(t):
    kind, v, pos = t.next()
    if kind == "int":
        return IntConst(int(v))
    if kind == "str":
        return StrConst(json.loads(v))
    if kind == "name":
        if v[0].isupper() or v[0] == "_":
            return Variable(v)
        if t.accept("("):
            return Func(v, _args(t))
        return Func(v)
    if kind == "sym" and v == "(":
        items = _args(t)
        if items and items[-1] is None:
            return Tuple(items[:-1])
        if len(items) == 1:
            return items[0]
        return Tuple(items)
    raise JsonParseError(f"unexpected {v or kind!r}", pos)


def _atom(t) -> Atom:
    kind, v, pos = t.next()
    if kind != "name" or v[0].isupper():
        raise JsonParseError(f"expected a predicate name, found {v or kind!r}", pos)
    if t.accept("("):
        args = _args(t)
        return Atom(v, args)
    return Atom(v)


_CMP = {"=": "=", "==": "=", "!=": "!=", "<>": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


def _literal(t):
    kind, v, _ = t.peek()
    if kind == "name" and v == "not":
        t.next()
        return Not(_atom(t))
    # A predicate atom starts with a lowercase name not followed by a comparison.
    start = t.i
    if kind == "name" and not v[0].isupper():
        atom = _atom(t)
        if not (t.peek()[0] == "sym" and t.peek()[1] in _CMP):
            return atom
        t.i = start
    left = _term(t)
    kind, op, pos = t.next()
    if op not in _CMP:
        raise JsonParseError(f"expected a comparison, found {op!r}", pos)
    return Comparison(_CMP[op], left, _term(t))


def _conjunction(t, stops) -> tuple:
    lits = [_literal(t)]
    while t.at(","):
        t.next()
        lits.append(_literal(t))
        if any(t.at(s) for s in stops):
            break
    return tuple(lits)


def _choice(t) -> Choice:
    t.expect("{")
    elements = []
    while not t.at("}"):
        atom = _atom(t)
        cond = ()
        if t.accept(":"):
            cond = _conjunction(t, (";", "}"))
        elements.append(ChoiceElement(atom, cond))
        if not t.accept(";"):
            break
    t.expect("}")
    bound = None
    if t.at("=") or t.at("=="):
        t.next()
        kind, v, pos = t.next()
        if kind != "int":
            raise JsonParseError("expected a cardinality bound", pos)
        bound = int(v)
    return Choice(tuple(elements), bound)


def _rule(t) -> Rule:
    if t.at(":-"):
        head = None
    elif t.at("{"):
        head = _choice(t)
    else:
        head = _atom(t)
    body = ()
    if t.accept(":-"):
        body = _conjunction(t, (".",))
    t.expect(".")
    return Rule(head, body)


def parse_term(text: str):
    t = _Tokens(text)
    term = _term(t)
    if t.peek()[0] != "eof":
        raise JsonParseError("trailing input after term", t.peek()[2])
    return term


def parse_atom(text: str) -> Atom:
    t = _Tokens(text)
    atom = _atom(t)
    if t.peek()[0] != "eof":
        raise JsonParseError(f"trailing input after atom {text!r}", t.peek()[2])
    return atom


def parse_program(text: str) -> AspProgram:
    t = _Tokens(text)
    prog = AspProgram()
    while t.peek()[0] != "eof":
        prog.add(_rule(t))
    return prog
