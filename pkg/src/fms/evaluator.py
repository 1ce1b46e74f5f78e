"""Call-by-value reference interpreter for choice-free Core."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional

from fms.core import ast as C
from fms.errors import (
    ChoiceMarkerEncountered,
    DivergentBinding,
    DivisionByZero,
    DynamicTypeError,
    InfiniteSetOperation,
    NonExhaustiveMatch,
)

# -- values -------------------------------------------------------------------


@dataclass(frozen=True)
class VInt:
    value: int


@dataclass(frozen=True)
class VStr:
    value: str


@dataclass(frozen=True)
class VBool:
    value: bool


@dataclass(frozen=True)
class VSet:
    members: frozenset


@dataclass(frozen=True)
class VHerb:
    tag: str
    args: tuple = ()


@dataclass(frozen=True, eq=False)
class VClosure:
    param: str
    body: object
    env: "Env"


@dataclass(frozen=True, eq=False)
class VPrim:
    """A builtin waiting for the rest of its arguments."""

    name: str
    args: tuple = ()


Value = object
TRUE, FALSE = VBool(True), VBool(False)


def is_function(v) -> bool:
    return isinstance(v, (VClosure, VPrim))


def value_key(v):
    """Total order on first-order values, used for deterministic iteration."""
    if isinstance(v, VInt):
        return (0, v.value)
    if isinstance(v, VBool):
        return (1, v.value)
    if isinstance(v, VStr):
        return (2, v.value)
    if isinstance(v, VHerb):
        return (3, len(v.args), v.tag, tuple(value_key(a) for a in v.args))
    if isinstance(v, VSet):
        return (4, tuple(sorted(value_key(m) for m in v.members)))
    raise DynamicTypeError("functions cannot be compared")


def sorted_members(s: VSet) -> list:
    return sorted(s.members, key=value_key)


def format_value(v) -> str:
    if isinstance(v, VInt):
        return str(v.value)
    if isinstance(v, VStr):
        return '"' + v.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, VBool):
        return "true" if v.value else "false"
    if isinstance(v, VHerb):
        if C.tuple_arity(v.tag) == len(v.args):
            return "(" + ", ".join(format_value(a) for a in v.args) + ")"
        if not v.args:
            return v.tag
        return v.tag + "(" + ", ".join(format_value(a) for a in v.args) + ")"
    if isinstance(v, VSet):
        return "{" + ", ".join(format_value(m) for m in sorted_members(v)) + "}"
    return "<function>"


def value_to_core(v) -> C.CoreExpr:
    if isinstance(v, VInt):
        return C.Inject(v.value)
    if isinstance(v, VStr):
        return C.Inject(v.value)
    if isinstance(v, VBool):
        return C.boolean(v.value)
    if isinstance(v, VHerb):
        return C.Herb(v.tag, tuple(value_to_core(a) for a in v.args))
    if isinstance(v, VSet):
        return C.SetLit(tuple(value_to_core(m) for m in sorted_members(v)))
    raise DynamicTypeError("a function value has no literal form")


def _check_comparable(v):
    if is_function(v):
        raise DynamicTypeError("sets and comparisons cannot involve functions")
    if isinstance(v, VHerb):
        for a in v.args:
            _check_comparable(a)


# -- environments -------------------------------------------------------------


class _Thunk:
    __slots__ = ("expr", "env", "state", "value")

    def __init__(self, expr, env):
        self.expr, self.env = expr, env
        self.state = "pending"
        self.value = None


class Env:
    __slots__ = ("vars", "parent")

    def __init__(self, vars: Optional[dict] = None, parent: Optional["Env"] = None):
        self.vars = vars if vars is not None else {}
        self.parent = parent

    def lookup(self, name):
        env = self
        while env is not None:
            if name in env.vars:
                return env.vars[name]
            env = env.parent
        raise KeyError(name)

    def extend(self, vars: dict) -> "Env":
        return Env(vars, self)


# -- evaluation ---------------------------------------------------------------


def _int(v, op):
    if not isinstance(v, VInt):
        raise DynamicTypeError(f"{op} expects integers")
    return v.value


def _bool(v, op):
    if not isinstance(v, VBool):
        raise DynamicTypeError(f"{op} expects booleans")
    return v.value


def _set(v, op):
    if not isinstance(v, VSet):
        raise InfiniteSetOperation(f"{op} needs a finite set")
    return v


def c_div(a: int, b: int) -> int:
    """Integer division truncating toward zero, as the ASP solver computes it."""
    if b == 0:
        raise DivisionByZero("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def c_mod(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero("modulo by zero")
    return a - b * c_div(a, b)


_LAZY = {"ite", "and", "or", "implies"}


@dataclass
class Evaluator:
    output: list = field(default_factory=list)

    def eval(self, e, env: Env):
        if isinstance(e, C.Inject):
            return VInt(e.literal) if isinstance(e.literal, int) else VStr(e.literal)
        if isinstance(e, C.Var):
            try:
                v = env.lookup(e.name)
            except KeyError:
                raise DynamicTypeError(f"unbound identifier {e.name!r}", e.loc) from None
            return self.force(v, e.loc)
        if isinstance(e, C.Lam):
            return VClosure(e.param, e.body, env)
        if isinstance(e, C.App):
            head, args = C.spine(e)
            if isinstance(head, C.Builtin) and head.symbol in _LAZY and len(args) == C.builtin_info(head.symbol).arity:
                return self.lazy_builtin(head.symbol, args, env, e.loc)
            f = self.eval(e.fun, env)
            a = self.eval(e.arg, env)
            return self.apply(f, a, e.loc)
        if isinstance(e, C.Let):
            frame = {}
            inner = env.extend(frame)
            for b in e.bindings:
                frame[b.name] = _Thunk(b.value, inner)
            for b in e.bindings:
                self.force(frame[b.name], e.loc)
            return self.eval(e.body, inner)
        if isinstance(e, C.Case):
            v = self.eval(e.scrutinee, env)
            for pat, body in e.arms:
                binds = match(pat, v)
                if binds is not None:
                    return self.eval(body, env.extend(binds) if binds else env)
            raise NonExhaustiveMatch(f"no case arm matches {format_value(v)}", e.loc)
        if isinstance(e, C.Builtin):
            if C.is_choice_marker(e.symbol):
                raise ChoiceMarkerEncountered(f"{e.symbol} can only be solved, not evaluated", e.loc)
            return VPrim(e.symbol)
        if isinstance(e, C.SetLit):
            vals = [self.eval(x, env) for x in e.elements]
            for v in vals:
                _check_comparable(v)
            return VSet(frozenset(vals))
        if isinstance(e, C.Herb):
            if e.tag in C.BOOL_TAGS and not e.args:
                return VBool(e.tag == C.TRUE_TAG)
            return VHerb(e.tag, tuple(self.eval(a, env) for a in e.args))
        if isinstance(e, C.OutputExp):
            v = self.eval(e.inner, env)
            self.output.append((e.label, v))
            return v
        raise DynamicTypeError(f"not a Core expression: {e!r}")

    def force(self, v, loc=None):
        if not isinstance(v, _Thunk):
            return v
        if v.state == "done":
            return v.value
        if v.state == "running":
            raise DivergentBinding("a definition depends on its own value", getattr(v.expr, "loc", None) or loc)
        v.state = "running"
        v.value = self.eval(v.expr, v.env)
        v.state = "done"
        v.expr = v.env = None
        return v.value

    def lazy_builtin(self, op, args, env, loc):
        if op == "ite":
            cond = _bool(self.eval(args[0], env), "if")
            return self.eval(args[1] if cond else args[2], env)
        c = _bool(self.eval(args[0], env), op)
        if op == "and":
            return VBool(_bool(self.eval(args[1], env), op)) if c else FALSE
        if op == "or":
            return TRUE if c else VBool(_bool(self.eval(args[1], env), op))
        # implies
        return VBool(_bool(self.eval(args[1], env), op)) if c else TRUE

    def apply(self, f, a, loc=None):
        if isinstance(f, VClosure):
            return self.eval(f.body, f.env.extend({f.param: a}))
        if isinstance(f, VPrim):
            args = f.args + (a,)
            if len(args) == C.builtin_info(f.name).arity:
                return self.primitive(f.name, args, loc)
            return VPrim(f.name, args)
        raise DynamicTypeError(f"cannot apply {format_value(f)} as a function", loc)

    def primitive(self, op, args, loc):
        try:
            return self._primitive(op, args)
        except (DynamicTypeError, DivisionByZero, InfiniteSetOperation) as err:
            if err.loc is None:
                err.loc = loc
            raise

    def _primitive(self, op, args):
        if op in ("add", "sub", "mul", "div", "mod"):
            a, b = _int(args[0], op), _int(args[1], op)
            if op == "add":
                return VInt(a + b)
            if op == "sub":
                return VInt(a - b)
            if op == "mul":
                return VInt(a * b)
            if op == "div":
                return VInt(c_div(a, b))
            return VInt(c_mod(a, b))
        if op == "neg":
            return VInt(-_int(args[0], op))
        if op in ("eq", "neq"):
            _check_comparable(args[0])
            _check_comparable(args[1])
            return VBool((args[0] == args[1]) == (op == "eq"))
        if op in ("lt", "le", "gt", "ge"):
            a, b = _int(args[0], op), _int(args[1], op)
            return VBool({"lt": a < b, "le": a <= b, "gt": a > b, "ge": a >= b}[op])
        if op in ("and", "or", "implies", "equiv"):
            a, b = _bool(args[0], op), _bool(args[1], op)
            return VBool({"and": a and b, "or": a or b, "implies": (not a) or b, "equiv": a == b}[op])
        if op == "not":
            return VBool(not _bool(args[0], op))
        if op == "ite":
            return args[1] if _bool(args[0], "if") else args[2]
        if op in ("forall", "exists"):
            s = _set(args[0], op)
            results = [_bool(self.apply(args[1], m), op) for m in sorted_members(s)]
            return VBool(all(results) if op == "forall" else any(results))
        if op == "bind":
            s = _set(args[0], op)
            out = set()
            for m in sorted_members(s):
                out |= _set(self.apply(args[1], m), op).members
            return VSet(frozenset(out))
        if op == "union":
            return VSet(_set(args[0], op).members | _set(args[1], op).members)
        if op == "member":
            _check_comparable(args[0])
            return VBool(args[0] in _set(args[1], op).members)
        if op == "card":
            return VInt(len(_set(args[0], op).members))
        if op == "range":
            lo, hi = _int(args[0], op), _int(args[1], op)
            return VSet(frozenset(VInt(i) for i in range(lo, hi + 1)))
        raise DynamicTypeError(f"unknown builtin {op!r}")


def match(p, v) -> Optional[dict]:
    if isinstance(p, C.Wildcard):
        return {}
    if isinstance(p, C.VarMatch):
        return {p.name: v}
    if isinstance(p, C.LitMatch):
        if isinstance(p.value, str):
            return {} if isinstance(v, VStr) and v.value == p.value else None
        return {} if isinstance(v, VInt) and v.value == p.value else None
    if isinstance(v, VBool):
        if not p.subpatterns and p.tag == (C.TRUE_TAG if v.value else C.FALSE_TAG):
            return {}
        return None
    if not isinstance(v, VHerb) or v.tag != p.tag or len(v.args) != len(p.subpatterns):
        return None
    out = {}
    for sub, a in zip(p.subpatterns, v.args):
        m = match(sub, a)
        if m is None:
            return None
        out.update(m)
    return out


def _deep_recursion():
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)


def eval(e, env=None):  # noqa: A001 - mirrors the operation name
    """Evaluate ``e`` under ``env`` (a mapping or an Env); output records are dropped."""
    _deep_recursion()
    if not isinstance(env, Env):
        env = Env(dict(env or {}))
    return Evaluator().eval(e, env)


def eval_closed(e) -> tuple[object, list]:
    _deep_recursion()
    ev = Evaluator()
    v = ev.eval(e, Env())
    return v, ev.output
