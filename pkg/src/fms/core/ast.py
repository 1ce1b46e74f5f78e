"""The ten-construct Core language and its patterns.

All nodes are frozen dataclasses.  Source locations ride along in a ``loc``
field that is excluded from equality and hashing, so structurally equal
terms compare equal wherever they came from.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from fms.errors import Loc

TRUE_TAG = "true"
FALSE_TAG = "false"
BOOL_TAGS = (TRUE_TAG, FALSE_TAG)


def tuple_tag(n: int) -> str:
    return f"tuple{n}"


_TUPLE_TAG = re.compile(r"tuple(\d+)$")


def tuple_arity(tag: str) -> Optional[int]:
    """Arity of a reserved tuple tag, or None for any other tag."""
    m = _TUPLE_TAG.match(tag)
    if m and int(m.group(1)) >= 2:
        return int(m.group(1))
    return None


def _loc():
    return field(default=None, compare=False, repr=False)


# -- builtins -----------------------------------------------------------------


@dataclass(frozen=True)
class BuiltinInfo:
    name: str
    arity: int
    infix: Optional[str] = None  # surface operator, when printed infix
    prec: int = 0  # binding strength of the infix form
    assoc: str = "left"


PREC_EQUIV, PREC_IMPLIES, PREC_OR, PREC_AND, PREC_NOT, PREC_CMP = 1, 2, 3, 4, 5, 6
PREC_ADD, PREC_MUL, PREC_APP, PREC_ATOM = 7, 8, 9, 10

_TABLE = [
    BuiltinInfo("add", 2, "+", PREC_ADD),
    BuiltinInfo("sub", 2, "-", PREC_ADD),
    BuiltinInfo("mul", 2, "*", PREC_MUL),
    BuiltinInfo("div", 2, "/", PREC_MUL),
    BuiltinInfo("mod", 2, "%", PREC_MUL),
    BuiltinInfo("neg", 1),
    BuiltinInfo("eq", 2, "=", PREC_CMP, "none"),
    BuiltinInfo("neq", 2, "~=", PREC_CMP, "none"),
    BuiltinInfo("lt", 2, "<", PREC_CMP, "none"),
    BuiltinInfo("le", 2, "<=", PREC_CMP, "none"),
    BuiltinInfo("gt", 2, ">", PREC_CMP, "none"),
    BuiltinInfo("ge", 2, ">=", PREC_CMP, "none"),
    BuiltinInfo("and", 2, "&", PREC_AND),
    BuiltinInfo("or", 2, "|", PREC_OR),
    BuiltinInfo("not", 1),
    BuiltinInfo("implies", 2, "=>", PREC_IMPLIES, "right"),
    BuiltinInfo("equiv", 2, "<=>", PREC_EQUIV),
    BuiltinInfo("forall", 2),
    BuiltinInfo("exists", 2),
    BuiltinInfo("bind", 2),
    BuiltinInfo("union", 2),
    BuiltinInfo("member", 2),
    BuiltinInfo("card", 1),
    BuiltinInfo("range", 2),
    BuiltinInfo("ite", 3),
    BuiltinInfo("chooseElement", 1),
    BuiltinInfo("chooseSubset", 1),
]
BUILTINS = {b.name: b for b in _TABLE}
INFIX = {b.infix: b for b in _TABLE if b.infix}

ARITHMETIC = frozenset({"add", "sub", "mul", "div", "mod", "neg"})
COMPARISONS = frozenset({"eq", "neq", "lt", "le", "gt", "ge"})
CONNECTIVES = frozenset({"and", "or", "not", "implies", "equiv"})
QUANTIFIERS = frozenset({"forall", "exists"})
NEGATED_COMPARISON = {"eq": "neq", "neq": "eq", "lt": "ge", "ge": "lt", "gt": "le", "le": "gt"}

_CHOOSE_FN = re.compile(r"chooseFunction_(\d+)$")


def choose_function_arity(name: str) -> Optional[int]:
    m = _CHOOSE_FN.match(name)
    return int(m.group(1)) if m else None


def is_choice_marker(name: str) -> bool:
    return name in ("chooseElement", "chooseSubset") or choose_function_arity(name) is not None


def builtin_info(name: str) -> BuiltinInfo:
    if name in BUILTINS:
        return BUILTINS[name]
    n = choose_function_arity(name)
    if n is not None and n >= 1:
        return BuiltinInfo(name, 1)
    raise KeyError(name)


def is_builtin_name(name: str) -> bool:
    try:
        builtin_info(name)
    except KeyError:
        return False
    return True


# -- patterns -----------------------------------------------------------------


@dataclass(frozen=True)
class Wildcard:
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class VarMatch:
    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class CtorMatch:
    tag: str
    subpatterns: tuple = ()
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class LitMatch:
    """Matches one integer or string literal."""

    value: Union[int, str]
    loc: Optional[Loc] = _loc()


Pattern = Union[Wildcard, VarMatch, CtorMatch, LitMatch]


def pattern_vars(p: Pattern) -> list[str]:
    if isinstance(p, VarMatch):
        return [p.name]
    if isinstance(p, CtorMatch):
        return [v for sub in p.subpatterns for v in pattern_vars(sub)]
    return []


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class App:
    fun: "CoreExpr"
    arg: "CoreExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Lam:
    param: str
    body: "CoreExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Binding:
    name: str
    value: "CoreExpr"
    pragma: Optional[str] = field(default=None, compare=False)  # "inline" | "noinline"


@dataclass(frozen=True)
class Let:
    bindings: tuple
    body: "CoreExpr"
    loc: Optional[Loc] = _loc()

    def __post_init__(self):
        names = [b.name for b in self.bindings]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in one let: {names}")


@dataclass(frozen=True)
class Inject:
    literal: Union[int, str]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Case:
    scrutinee: "CoreExpr"
    arms: tuple  # of (Pattern, CoreExpr)
    loc: Optional[Loc] = _loc()

    def __post_init__(self):
        if not self.arms:
            raise ValueError("case needs at least one arm")


@dataclass(frozen=True)
class Builtin:
    symbol: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class SetLit:
    elements: tuple
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Herb:
    tag: str
    args: tuple = ()
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class OutputExp:
    label: str
    inner: "CoreExpr"
    loc: Optional[Loc] = _loc()


CoreExpr = Union[Var, App, Lam, Let, Inject, Case, Builtin, SetLit, Herb, OutputExp]

TRUE = Herb(TRUE_TAG)
FALSE = Herb(FALSE_TAG)


# -- construction helpers -----------------------------------------------------


def app(f: CoreExpr, *args: CoreExpr, loc: Optional[Loc] = None) -> CoreExpr:
    for a in args:
        f = App(f, a, loc)
    return f


def prim(op: str, *args: CoreExpr, loc: Optional[Loc] = None) -> CoreExpr:
    return app(Builtin(op, loc), *args, loc=loc)


def tup(*items: CoreExpr, loc: Optional[Loc] = None) -> Herb:
    return Herb(tuple_tag(len(items)), tuple(items), loc)


def boolean(b: bool) -> Herb:
    return TRUE if b else FALSE


def let(bindings, body: CoreExpr, loc: Optional[Loc] = None) -> Let:
    bs = tuple(b if isinstance(b, Binding) else Binding(*b) for b in bindings)
    return Let(bs, body, loc)


def case(scrutinee: CoreExpr, *arms, loc: Optional[Loc] = None) -> Case:
    return Case(scrutinee, tuple(tuple(a) for a in arms), loc)


def spine(e: CoreExpr) -> tuple[CoreExpr, list[CoreExpr]]:
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fun
    args.reverse()
    return e, args


def builtin_call(e: CoreExpr) -> Optional[tuple[str, list[CoreExpr]]]:
    """``(op, args)`` when ``e`` is a saturated builtin application."""
    head, args = spine(e)
    if isinstance(head, Builtin) and len(args) == builtin_info(head.symbol).arity:
        return head.symbol, args
    return None


def is_literal(e: CoreExpr) -> bool:
    """Injected constants and constructor terms built only from them."""
    if isinstance(e, Inject):
        return True
    if isinstance(e, Herb):
        return all(is_literal(a) for a in e.args)
    return False


def children(e: CoreExpr) -> Iterator[CoreExpr]:
    if isinstance(e, App):
        yield e.fun
        yield e.arg
    elif isinstance(e, Lam):
        yield e.body
    elif isinstance(e, Let):
        for b in e.bindings:
            yield b.value
        yield e.body
    elif isinstance(e, Case):
        yield e.scrutinee
        for _, body in e.arms:
            yield body
    elif isinstance(e, SetLit):
        yield from e.elements
    elif isinstance(e, Herb):
        yield from e.args
    elif isinstance(e, OutputExp):
        yield e.inner


def walk(e: CoreExpr) -> Iterator[CoreExpr]:
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(list(children(node))))


def size(e: CoreExpr) -> int:
    """Node count, the measure used by pass reports and the inlining guard."""
    return sum(1 for _ in walk(e))
