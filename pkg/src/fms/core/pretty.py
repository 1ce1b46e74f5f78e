"""Canonical text form of Core terms.

The output re-parses with :func:`fms.core.reader.read_core`.  Constructor
terms print as ``tag[args]`` (``nil[]``, ``s[x]``) so they cannot be confused
with application; tuples print as ``(a, b)`` and booleans as ``true``/``false``.
"""

from __future__ import annotations

import json

from fms.core.ast import (
    BOOL_TAGS,
    PREC_APP,
    PREC_ATOM,
    PREC_MUL,
    PREC_NOT,
    App,
    Builtin,
    Case,
    CtorMatch,
    Herb,
    Inject,
    Lam,
    Let,
    LitMatch,
    OutputExp,
    SetLit,
    Var,
    VarMatch,
    Wildcard,
    builtin_info,
    spine,
    tuple_arity,
)

PREC_OPEN = 0  # lambda, let, case, if-then-else

SURFACE_NAMES = {"forall": "!", "exists": "?"}


def pretty(e) -> str:
    return _Printer().expr(e, PREC_OPEN)


def pretty_pattern(p) -> str:
    return _pattern(p)


def _literal(v) -> str:
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    return str(v)


def _pattern(p) -> str:
    if isinstance(p, Wildcard):
        return "_"
    if isinstance(p, VarMatch):
        return p.name
    if isinstance(p, LitMatch):
        return _literal(p.value) if not (isinstance(p.value, int) and p.value < 0) else f"({p.value})"
    if isinstance(p, CtorMatch):
        if tuple_arity(p.tag) == len(p.subpatterns) and p.subpatterns:
            return "(" + ", ".join(_pattern(s) for s in p.subpatterns) + ")"
        if p.tag in BOOL_TAGS and not p.subpatterns:
            return p.tag
        return p.tag + "[" + ", ".join(_pattern(s) for s in p.subpatterns) + "]"
    raise TypeError(f"not a pattern: {p!r}")


def _tail_is_case(e) -> bool:
    """Whether ``e`` printed unparenthesized ends in a case whose arms would run on."""
    while True:
        if isinstance(e, Case):
            return True
        if isinstance(e, Lam):
            e = e.body
        elif isinstance(e, Let):
            e = e.body
        else:
            head, args = spine(e)
            if isinstance(head, Builtin) and head.symbol == "ite" and len(args) == 3:
                e = args[2]
            else:
                return False


class _Printer:
    def paren(self, text: str, prec: int, ctx: int) -> str:
        return f"({text})" if prec < ctx else text

    def expr(self, e, ctx: int) -> str:
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Inject):
            if isinstance(e.literal, int) and e.literal < 0:
                return self.paren(str(e.literal), PREC_MUL, ctx)
            return _literal(e.literal)
        if isinstance(e, Builtin):
            return SURFACE_NAMES.get(e.symbol, e.symbol)
        if isinstance(e, SetLit):
            return "{" + ", ".join(self.expr(x, PREC_OPEN) for x in e.elements) + "}"
        if isinstance(e, Herb):
            if tuple_arity(e.tag) == len(e.args) and e.args:
                return "(" + ", ".join(self.expr(x, PREC_OPEN) for x in e.args) + ")"
            if e.tag in BOOL_TAGS and not e.args:
                return e.tag
            return e.tag + "[" + ", ".join(self.expr(x, PREC_OPEN) for x in e.args) + "]"
        if isinstance(e, OutputExp):
            return f"outputexp({_literal(e.label)}, {self.expr(e.inner, PREC_OPEN)})"
        if isinstance(e, Lam):
            return self.paren(f"\\{e.param} -> {self.expr(e.body, PREC_OPEN)}", PREC_OPEN, ctx)
        if isinstance(e, Let):
            binds = "; ".join(f"{b.name} := {self.guarded(b.value)}" for b in e.bindings)
            return self.paren(f"let {binds} in {self.expr(e.body, PREC_OPEN)}", PREC_OPEN, ctx)
        if isinstance(e, Case):
            arms = "; ".join(f"{_pattern(p)} -> {self.guarded(b)}" for p, b in e.arms)
            return self.paren(f"case {self.expr(e.scrutinee, PREC_OPEN)} of {arms}", PREC_OPEN, ctx)
        if isinstance(e, App):
            return self.application(e, ctx)
        raise TypeError(f"not a Core expression: {e!r}")

    def guarded(self, e) -> str:
        """Binding values and arm bodies: a trailing case would swallow what follows."""
        text = self.expr(e, PREC_OPEN)
        return f"({text})" if _tail_is_case(e) else text

    def application(self, e, ctx: int) -> str:
        head, args = spine(e)
        if isinstance(head, Builtin):
            info = builtin_info(head.symbol)
            if len(args) == info.arity:
                if info.infix:
                    return self.infix(info, args, ctx)
                if head.symbol == "not":
                    return self.paren(f"not {self.expr(args[0], PREC_NOT)}", PREC_NOT, ctx)
                if head.symbol == "ite":
                    c, t, f = (self.expr(a, PREC_OPEN) for a in args)
                    return self.paren(f"if {c} then {t} else {f}", PREC_OPEN, ctx)
        parts = [self.expr(head, PREC_ATOM)] + [self.expr(a, PREC_ATOM) for a in args]
        return self.paren(" ".join(parts), PREC_APP, ctx)

    def infix(self, info, args, ctx: int) -> str:
        p = info.prec
        if info.assoc == "left":
            lp, rp = p, p + 1
        elif info.assoc == "right":
            lp, rp = p + 1, p
        else:
            lp = rp = p + 1
        text = f"{self.expr(args[0], lp)} {info.infix} {self.expr(args[1], rp)}"
        return self.paren(text, p, ctx)
