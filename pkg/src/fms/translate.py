"""Translation of optimized Core into an answer-set program.

Every Core expression is translated relative to a scope: the tuple of
enclosing quantified variables (the context key) plus the body literals that
bind them.  Non-boolean expressions become a list of alternatives
``(term, literals)``, meaning the expression denotes ``term`` whenever the
literals hold.  Boolean expressions become conditions in disjunctive normal
form.  Sets, functions and booleans that need a name get one (``s_i``,
``l_i``, ``b_i``), tupled with the context key when it is not empty.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

from fms.asp.syntax import (
    ANCHOR,
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
    rename_literal,
    term_vars,
)
from fms.core import ast as C
from fms.core.names import NameSupply
from fms.core.ops import free_vars, map_children
from fms.errors import TranslationError, UnsupportedResidual
from fms.graph import tarjan_scc

TRUE = Func("true")
FALSE = Func("false")

_GENERATED = re.compile(r"[slbv]\d+$")
_PLAIN = re.compile(r"[a-z][A-Za-z0-9_]*$")
_RESERVED = {"true", "false", "not"}


def mangle(tag: str) -> str:
    """ASP function name for a constructor tag; generated names never clash."""
    if _PLAIN.match(tag) and not _GENERATED.match(tag) and not tag.startswith("c_") and tag not in _RESERVED:
        return tag
    return "c_" + tag


def unmangle(name: str) -> str:
    return name[2:] if name.startswith("c_") else name


@dataclass(frozen=True)
class Scope:
    ctx: tuple = ()  # context key variables
    lits: tuple = ()  # literals binding ctx and derived variables

    def plus(self, lits) -> "Scope":
        return Scope(self.ctx, self.lits + tuple(lits)) if lits else self

    def bind(self, var: Variable, lits) -> "Scope":
        return Scope(self.ctx + (var,), self.lits + tuple(lits))


@dataclass(frozen=True)
class SymbolDescriptor:
    kind: str  # set | function | boolean | scalar
    asp_name: str
    source: str
    arity: int = 0


def _dedupe(lits) -> tuple:
    return tuple(dict.fromkeys(lits))


def _is_const(t) -> bool:
    return isinstance(t, (IntConst, StrConst)) or (isinstance(t, Func) and not term_vars(t) and _no_arith(t))


def _no_arith(t) -> bool:
    if isinstance(t, (BinOp, Interval)):
        return False
    if isinstance(t, Func):
        return all(_no_arith(a) for a in t.args)
    if isinstance(t, Tuple):
        return all(_no_arith(a) for a in t.items)
    return True


def _ground_value(t) -> bool:
    return not term_vars(t) and _no_arith(t)


_ARITH = {"add": "+", "sub": "-", "mul": "*", "div": "/", "mod": "\\"}
_CMP = {"eq": "=", "neq": "!=", "lt": "<", "le": "<=", "gt": ">", "ge": ">="}
_SET_BUILTINS = {"range", "bind", "union"}
_BOOL_BUILTINS = set(_CMP) | {"and", "or", "not", "implies", "equiv", "forall", "exists", "member"}

_VALUE, _COND, _NCOND, _ELEMS = "value", "cond", "ncond", "elements"


class Translator:
    """Holds the translation context: name supplies, symbol table, rules."""

    def __init__(self):
        self.names = NameSupply()
        self.rules: list[Rule] = []
        self.kinds: dict[str, str] = {}
        self.symbols: list[SymbolDescriptor] = []
        self._core = NameSupply("%")

    # -- bookkeeping --------------------------------------------------------

    def emit(self, head, body=()):
        rule = _merge_functional(Rule(head, _dedupe(body)))
        self.rules.append(rule)
        return rule

    def var(self) -> Variable:
        return Variable(self.names.fresh("X"))

    def name(self, kind: str, sc: Scope):
        prefix = {"set": "s", "function": "l", "boolean": "b", "scalar": "v"}[kind]
        n = self.names.fresh(prefix)
        self.kinds[n] = kind
        return Func(n) if not sc.ctx else Tuple((Func(n),) + sc.ctx)

    def kind_of(self, t) -> Optional[str]:
        if isinstance(t, Func) and not t.args:
            return self.kinds.get(t.name)
        if isinstance(t, Tuple) and t.items and isinstance(t.items[0], Func):
            return self.kinds.get(t.items[0].name)
        return None

    def core_name(self) -> str:
        return self._core.fresh("%q")

    # -- entry ----------------------------------------------------------------

    def translate(self, e) -> AspProgram:
        self.emit(ANCHOR.head, ANCHOR.body)
        dnf = self.cond(e, Scope(), {})
        if len(dnf) == 1 and len(dnf[0]) == 1 and isinstance(dnf[0][0], Atom) and dnf[0][0].pred == "bool":
            top = dnf[0][0].args[0]
        else:
            top = self.name("boolean", Scope())
            for d in dnf:
                self.emit(Atom("bool", (top,)), d)
        self.emit(Atom("result", (top,)))
        prog = AspProgram(list(dict.fromkeys(self.rules)))
        prog.symbols = list(self.symbols)
        return prog

    # -- the four modes ---------------------------------------------------------

    def value(self, e, sc, env) -> list:
        return self._run(e, sc, env, _VALUE)

    def cond(self, e, sc, env) -> list:
        return self._run(e, sc, env, _COND)

    def ncond(self, e, sc, env) -> list:
        return self._run(e, sc, env, _NCOND)

    def elements(self, e, sc, env) -> list:
        return self._run(e, sc, env, _ELEMS)

    @staticmethod
    def _prefix(mode, item, lits):
        if not lits:
            return item
        if mode in (_COND, _NCOND):
            return _dedupe(tuple(lits) + item)
        term, rest = item
        return term, _dedupe(tuple(lits) + rest)

    def _run(self, e, sc, env, mode):
        out = self._structural(e, sc, env, mode)
        if out is not None:
            return out
        if mode == _VALUE:
            return self._value(e, sc, env)
        if mode == _ELEMS:
            return self._elements(e, sc, env)
        return self._cond(e, sc, env, mode == _NCOND)

    def _structural(self, e, sc, env, mode):
        """Let, case, beta-redexes, conditionals and output markers, in any mode."""
        if isinstance(e, C.Let):
            env = self.let_bindings(e.bindings, sc, env)
            return self._run(e.body, sc, env, mode)
        if isinstance(e, C.Case):
            return self.case(e, sc, env, mode)
        if isinstance(e, C.OutputExp):
            alts = self.value(e.inner, sc, env)
            self.record_output(e.label, alts, sc)
            return self._from_alts(alts, sc, mode)
        if isinstance(e, C.App) and isinstance(e.fun, C.Lam):
            out = []
            for t, l in self.value(e.arg, sc, env):
                inner = dict(env)
                inner[e.fun.param] = [(t, ())]
                for item in self._run(e.fun.body, sc.plus(l), inner, mode):
                    out.append(self._prefix(mode, item, l))
            return out
        call = C.builtin_call(e)
        if call is not None and call[0] == "ite":
            c, a, b = call[1]
            out = []
            for d in self.cond(c, sc, env):
                out += [self._prefix(mode, item, d) for item in self._run(a, sc.plus(d), env, mode)]
            for d in self.ncond(c, sc, env):
                out += [self._prefix(mode, item, d) for item in self._run(b, sc.plus(d), env, mode)]
            return out
        return None

    def _from_alts(self, alts, sc, mode):
        if mode == _VALUE:
            return alts
        if mode == _ELEMS:
            return self._members_of(alts)
        want = FALSE if mode == _NCOND else TRUE
        other = TRUE if mode == _NCOND else FALSE
        out = []
        for t, l in alts:
            if t == want:
                out.append(l)
            elif t == other or (_is_const(t) and t not in (TRUE, FALSE)):
                continue
            else:
                out.append(_dedupe(l + (Comparison("=", t, want),)))
        return out

    def _members_of(self, alts):
        out = []
        for t, l in alts:
            y = self.var()
            out.append((y, _dedupe(l + (Atom("member", (t, y)),))))
        return out

    # -- values ----------------------------------------------------------------

    def _value(self, e, sc, env) -> list:
        if isinstance(e, C.Inject):
            return [(IntConst(e.literal) if isinstance(e.literal, int) else StrConst(e.literal), ())]
        if isinstance(e, C.Var):
            if e.name not in env:
                raise TranslationError(f"unbound identifier {e.name!r}", e.loc)
            return env[e.name]
        if isinstance(e, C.Herb):
            return self.herb(e, sc, env)
        if isinstance(e, C.Lam):
            f = self.name("function", sc)
            self.define_lambda(f, e, sc, env)
            return [(f, ())]
        if isinstance(e, C.SetLit):
            return [(self.named_set(e, sc, env), ())]
        if isinstance(e, C.Builtin):
            return self.eta(e, [], sc, env)
        if isinstance(e, C.App):
            head, args = C.spine(e)
            if isinstance(head, C.Builtin):
                info = C.builtin_info(head.symbol)
                if len(args) < info.arity:
                    return self.eta(head, args, sc, env)
                if len(args) == info.arity:
                    return self.builtin_value(head.symbol, args, e, sc, env)
            return self.apply(self.value(e.fun, sc, env), self.value(e.arg, sc, env), sc)
        raise TranslationError(f"cannot translate {type(e).__name__}", getattr(e, "loc", None))

    def herb(self, e, sc, env) -> list:
        if e.tag in C.BOOL_TAGS and not e.args:
            return [(TRUE if e.tag == C.TRUE_TAG else FALSE, ())]
        out = []
        for combo in itertools.product(*(self.value(a, sc, env) for a in e.args)):
            terms = tuple(t for t, _ in combo)
            lits = _dedupe(tuple(x for _, l in combo for x in l))
            if C.tuple_arity(e.tag) == len(e.args):
                out.append((Tuple(terms), lits))
            else:
                out.append((Func(mangle(e.tag), terms), lits))
        return out

    def eta(self, head, args, sc, env) -> list:
        if C.is_choice_marker(head.symbol):
            raise UnsupportedResidual(f"{head.symbol} used as a value", head.loc)
        arity = C.builtin_info(head.symbol).arity
        params = [self.core_name() for _ in range(arity - len(args))]
        body = C.app(head, *args, *(C.Var(p) for p in params))
        for p in reversed(params):
            body = C.Lam(p, body)
        return self.value(body, sc, env)

    def apply(self, funs, args, sc) -> list:
        """Relational application: lamInter lookup plus a relevant-domain rule."""
        out = []
        for f, lf in funs:
            for a, la in args:
                if _is_const(f) and self.kind_of(f) not in (None, "function") and not isinstance(f, Tuple):
                    raise TranslationError(f"cannot apply {f} as a function")
                y = self.var()
                lits = _dedupe(lf + la)
                self.emit(Atom("lamDom", (f, a)), sc.lits + lits)
                out.append((y, _dedupe(lits + (Atom("lamInter", (f, a, y)),))))
        return out

    def define_lambda(self, f, lam: C.Lam, sc, env):
        x = self.var()
        inner = Scope(sc.ctx + (x,), sc.lits + (Atom("lamDom", (f, x)),))
        body_env = dict(env)
        body_env[lam.param] = [(x, ())]
        for t, l in self.value(lam.body, inner, body_env):
            self.emit(Atom("lamInter", (f, x, t)), inner.lits + l)

    # -- sets ----------------------------------------------------------------------

    def named_set(self, e, sc, env):
        s = self.name("set", sc)
        self.fill_set(s, e, sc, env)
        return s

    def fill_set(self, s, e, sc, env):
        for t, l in self.elements(e, sc, env):
            self.emit(Atom("member", (s, t)), sc.lits + l)

    def single_set(self, e, sc, env):
        """One set term and its literals, naming a union of alternatives if needed."""
        alts = self.value(e, sc, env)
        if len(alts) == 1:
            return alts[0]
        s = self.name("set", sc)
        for t, l in alts:
            y = self.var()
            self.emit(Atom("member", (s, y)), sc.lits + l + (Atom("member", (t, y)),))
        return s, ()

    def _elements(self, e, sc, env) -> list:
        if isinstance(e, C.SetLit):
            out = []
            for x in e.elements:
                out += self.value(x, sc, env)
            return out
        call = C.builtin_call(e)
        if call is not None:
            op, args = call
            if op == "range":
                out = []
                for (a, la), (b, lb) in itertools.product(self.value(args[0], sc, env), self.value(args[1], sc, env)):
                    x = self.var()
                    out.append((x, _dedupe(la + lb + (Comparison("=", x, Interval(a, b)),))))
                return out
            if op == "union":
                return self.elements(args[0], sc, env) + self.elements(args[1], sc, env)
            if op == "bind":
                s, ls = self.single_set(args[0], sc, env)
                x = self.var()
                member = ls + (Atom("member", (s, x)),)
                inner = sc.bind(x, member)
                out = []
                for t, l in self.elements(self.applied(args[1], x, env), inner, env):
                    out.append((t, _dedupe(member + l)))
                return out
        return self._members_of(self.value(e, sc, env))

    def applied(self, fn, x: Variable, env):
        """Core for ``fn x`` where x is an ASP variable; registers x in env."""
        name = self.core_name()
        env[name] = [(x, ())]
        return C.App(fn, C.Var(name))

    # -- builtins --------------------------------------------------------------------

    def builtin_value(self, op, args, e, sc, env) -> list:
        if op in _ARITH or op == "neg":
            if op == "neg":
                return [(BinOp("-", IntConst(0), t), l) for t, l in self.value(args[0], sc, env)]
            out = []
            for (a, la), (b, lb) in itertools.product(self.value(args[0], sc, env), self.value(args[1], sc, env)):
                out.append((BinOp(_ARITH[op], a, b), _dedupe(la + lb)))
            return out
        if op in _BOOL_BUILTINS:
            return self.bool_value(e, sc, env)
        if op in _SET_BUILTINS:
            return [(self.named_set(e, sc, env), ())]
        if op == "card":
            raise UnsupportedResidual("set cardinality has no first-order encoding here", e.loc)
        if C.is_choice_marker(op):
            return self.choice(op, args[0], e, sc, env)
        raise UnsupportedResidual(f"builtin {op} cannot be translated", e.loc)

    def bool_value(self, e, sc, env) -> list:
        pos = self.cond(e, sc, env)
        neg = self.ncond(e, sc, env)
        if len(pos) <= 1 and len(neg) <= 1 and all(len(d) <= 1 for d in pos + neg):
            return [(TRUE, d) for d in pos] + [(FALSE, d) for d in neg]
        b = self.name_bool(pos, sc)
        return [(TRUE, (b,)), (FALSE, (Not(b.atom if isinstance(b, Not) else b),))]

    def name_bool(self, dnf, sc) -> Atom:
        b = self.name("boolean", sc)
        for d in dnf:
            self.emit(Atom("bool", (b,)), sc.lits + d)
        return Atom("bool", (b,))

    def negate(self, dnf, sc) -> list:
        if not dnf:
            return [()]
        if dnf == [()]:
            return []
        if len(dnf) == 1 and len(dnf[0]) == 1:
            lit = dnf[0][0]
            if isinstance(lit, Not):
                return [(lit.atom,)]
            if isinstance(lit, Comparison):
                return [(lit.negated(),)]
        return [(Not(self.name_bool(dnf, sc)),)]

    def _cond(self, e, sc, env, negated: bool) -> list:
        if isinstance(e, C.Herb) and e.tag in C.BOOL_TAGS and not e.args:
            return [()] if (e.tag == C.TRUE_TAG) != negated else []
        call = C.builtin_call(e)
        if call is None or call[0] not in _BOOL_BUILTINS:
            return self._from_alts(self.value(e, sc, env), sc, _NCOND if negated else _COND)
        op, args = call
        if op in _CMP:
            out = []
            for (a, la), (b, lb) in itertools.product(self.value(args[0], sc, env), self.value(args[1], sc, env)):
                self.check_comparable(a, b, e)
                cmp = Comparison(_CMP[op], a, b)
                if negated:
                    cmp = cmp.negated()
                if _ground_value(a) and _ground_value(b):
                    from fms.asp.solver import _compare

                    if _compare(cmp.op, a, b):
                        out.append(_dedupe(la + lb))
                    continue
                out.append(_dedupe(la + lb + (cmp,)))
            return out
        if op == "not":
            return self._run(args[0], sc, env, _COND if negated else _NCOND)
        if op in ("and", "or", "implies", "equiv"):
            a, b = args
            if op == "equiv":
                ca, na = self.cond(a, sc, env), self.ncond(a, sc, env)
                cb, nb = self.cond(b, sc, env), self.ncond(b, sc, env)
                if negated:
                    return _conj(ca, nb) + _conj(na, cb)
                return _conj(ca, cb) + _conj(na, nb)
            if op == "and":
                if negated:
                    return self.ncond(a, sc, env) + self.ncond(b, sc, env)
                return _conj(self.cond(a, sc, env), self.cond(b, sc, env))
            if op == "or":
                if negated:
                    return _conj(self.ncond(a, sc, env), self.ncond(b, sc, env))
                return self.cond(a, sc, env) + self.cond(b, sc, env)
            if negated:  # not (a => b) is a & not b
                return _conj(self.cond(a, sc, env), self.ncond(b, sc, env))
            return self.ncond(a, sc, env) + self.cond(b, sc, env)
        if op == "member":
            s, ls = self.single_set(args[1], sc, env)
            out = []
            for t, l in self.value(args[0], sc, env):
                atom = Atom("member", (s, t))
                out.append(_dedupe(ls + l + ((Not(atom),) if negated else (atom,))))
            return out
        if op == "forall":
            return self.forall(args[0], args[1], sc, env, negated)
        if op == "exists":
            return self.exists(args[0], args[1], sc, env, negated)
        raise UnsupportedResidual(f"builtin {op} cannot be translated", e.loc)

    def check_comparable(self, a, b, e):
        for t in (a, b):
            if self.kind_of(t) in ("set", "function"):
                raise UnsupportedResidual("equality on sets or functions is not first-order", e.loc)

    def forall(self, s_expr, pred, sc, env, negated):
        s, ls = self.single_set(s_expr, sc, env)
        x = self.var()
        member = ls + (Atom("member", (s, x)),)
        inner = sc.bind(x, member)
        local = dict(env)
        body = self.cond(self.applied(pred, x, local), inner, local)
        if body == [()]:
            return [] if negated else [()]
        if body:
            b = self.name_bool(body, inner)
            violation = self.name("boolean", sc)
            self.emit(Atom("bool", (violation,)), inner.lits + (Not(b),))
        else:
            violation = self.name("boolean", sc)
            self.emit(Atom("bool", (violation,)), inner.lits)
        v = Atom("bool", (violation,))
        return [(v,)] if negated else [(Not(v),)]

    def exists(self, s_expr, pred, sc, env, negated):
        s, ls = self.single_set(s_expr, sc, env)
        x = self.var()
        member = ls + (Atom("member", (s, x)),)
        inner = sc.bind(x, member)
        local = dict(env)
        body = self.cond(self.applied(pred, x, local), inner, local)
        witnesses = [_dedupe(member + d) for d in body]
        if not negated:
            return witnesses
        if not witnesses:
            return [()]
        return [(Not(self.name_bool(witnesses, sc)),)]

    # -- choice ----------------------------------------------------------------------

    def choice(self, op, s_expr, e, sc, env) -> list:
        if sc.ctx:
            raise UnsupportedResidual(f"{op} under a quantifier or lambda cannot be searched", e.loc)
        s, ls = self.single_set(s_expr, sc, env)
        body = sc.lits + ls
        y = self.var()
        if op == "chooseElement":
            v = self.name("scalar", sc)
            self.emit(Choice((ChoiceElement(Atom("val", (v, y)), (Atom("member", (s, y)),)),), 1), body)
            r = self.var()
            return [(r, (Atom("val", (v, r)),))]
        if op == "chooseSubset":
            t = self.name("set", sc)
            self.emit(Choice((ChoiceElement(Atom("member", (t, y))),)), body + (Atom("member", (s, y)),))
            return [(t, ())]
        n = C.choose_function_arity(op)
        f = self.name("function", sc)
        closure = f
        xs = []
        for k in range(n):
            x = self.var()
            xs.append(x)
            dom = Atom("lamDom", (closure, x))
            if k == n - 1:
                elem = ChoiceElement(Atom("lamInter", (closure, x, y)), (Atom("member", (s, y)),))
                self.emit(Choice((elem,), 1), body + (dom,))
            else:
                nxt = Tuple((f,) + tuple(xs))
                self.emit(Atom("lamInter", (closure, x, nxt)), body + (dom,))
                closure = nxt
        return [(f, ())]

    # -- let and case ------------------------------------------------------------------

    def let_bindings(self, bindings, sc, env) -> dict:
        """Translate bindings one strongly connected group at a time, dependencies first."""
        env = dict(env)
        by_name = {b.name: b for b in bindings}
        edges = {b.name: [n for n in by_name if n in free_vars(b.value)] for b in bindings}
        for comp in tarjan_scc(list(by_name), edges):
            group = [by_name[n] for n in comp]
            if len(group) == 1 and group[0].name not in edges[group[0].name]:
                env[group[0].name] = self.value(group[0].value, sc, env)
            else:
                self.recursive_group(group, sc, env)
        return env

    def recursive_group(self, bindings, sc, env):
        plans = []
        for b in bindings:
            value, labels = b.value, []
            while isinstance(value, C.OutputExp):
                labels.append(value.label)
                value = value.inner
            if isinstance(value, C.Lam):
                term = self.name("function", sc)
            elif isinstance(value, C.SetLit) or (C.builtin_call(value) or ("",))[0] in _SET_BUILTINS:
                term = self.name("set", sc)
            else:
                raise UnsupportedResidual(f"recursive definition of {b.name!r} is neither a function nor a set", value.loc)
            env[b.name] = [(term, ())]
            plans.append((term, value, labels))
        for term, value, labels in plans:
            if isinstance(value, C.Lam):
                self.define_lambda(term, value, sc, env)
            else:
                self.fill_set(term, value, sc, env)
            for label in labels:
                self.record_output(label, [(term, ())], sc)

    def case(self, e: C.Case, sc, env, mode) -> list:
        out = []
        for t, l in self.value(e.scrutinee, sc, env):
            excluded = ()
            for i, (pat, body) in enumerate(e.arms):
                m = self.match(pat, t)
                if m is not None:
                    lits, binds = m
                    guard = _dedupe(l + excluded + lits)
                    inner = dict(env)
                    inner.update({k: [(v, ())] for k, v in binds.items()})
                    for item in self._run(body, sc.plus(guard), inner, mode):
                        out.append(self._prefix(mode, item, guard))
                    if not lits:
                        break  # irrefutable here: later arms are unreachable
                    if i + 1 < len(e.arms):
                        excluded = excluded + self.exclude(lits, sc.plus(l))
        return out

    def exclude(self, lits, sc) -> tuple:
        if len(lits) == 1 and isinstance(lits[0], Comparison) and not (lits[0].vars() - _scope_vars(sc)):
            return (lits[0].negated(),)
        return (Not(self.name_bool([tuple(lits)], sc)),)

    def match(self, p, t):
        """(literals, bindings) under which ``t`` matches ``p``; None if it never can."""
        if isinstance(p, C.Wildcard):
            return (), {}
        if isinstance(p, C.VarMatch):
            return (), {p.name: t}
        if isinstance(p, C.LitMatch):
            lit = IntConst(p.value) if isinstance(p.value, int) else StrConst(p.value)
            if _ground_value(t):
                return ((), {}) if t == lit else None
            return (Comparison("=", t, lit),), {}
        # constructor pattern
        if C.tuple_arity(p.tag) == len(p.subpatterns):
            shape = lambda items: Tuple(tuple(items))  # noqa: E731
            if isinstance(t, Tuple):
                if len(t.items) != len(p.subpatterns):
                    return None
                parts = t.items
            elif isinstance(t, Variable):
                parts = None
            else:
                return None
        else:
            name = "true" if p.tag == C.TRUE_TAG else "false" if p.tag == C.FALSE_TAG else mangle(p.tag)
            shape = lambda items: Func(name, tuple(items))  # noqa: E731
            if isinstance(t, Func):
                if t.name != name or len(t.args) != len(p.subpatterns):
                    return None
                parts = t.args
            elif isinstance(t, Variable):
                parts = None
            else:
                return None
        lits, binds = [], {}
        if parts is None:
            if not p.subpatterns:
                return (Comparison("=", t, shape(())),), {}
            parts = [self.var() for _ in p.subpatterns]
            lits.append(Comparison("=", shape(parts), t))
        for sub, part in zip(p.subpatterns, parts):
            m = self.match(sub, part)
            if m is None:
                return None
            lits += m[0]
            binds.update(m[1])
        return tuple(lits), binds

    # -- output ------------------------------------------------------------------------

    def record_output(self, label, alts, sc):
        if sc.ctx:
            return  # output inside a function body has no single value to report
        if len(alts) == 1 and not alts[0][1] and self.kind_of(alts[0][0]) in ("set", "function"):
            term = alts[0][0]
            self.symbols.append(SymbolDescriptor(self.kind_of(term), str(term), label))
            self.emit(Atom("out", (StrConst(label), term)), sc.lits)
            return
        if len(alts) == 1 and len(alts[0][1]) == 1:
            t, (lit,) = alts[0]
            if isinstance(lit, Atom) and lit.pred == "val" and lit.args[1] == t and isinstance(t, Variable):
                self.symbols.append(SymbolDescriptor("scalar", str(lit.args[0]), label))
                self.emit(Atom("out", (StrConst(label), lit.args[0])), sc.lits)
                return
        v = self.name("scalar", sc)
        for t, l in alts:
            self.emit(Atom("val", (v, t)), sc.lits + l)
        self.symbols.append(SymbolDescriptor("scalar", str(v), label))
        self.emit(Atom("out", (StrConst(label), v)), sc.lits)


_FUNCTIONAL = {"lamInter": 2, "val": 1}  # predicate -> arity of its key


def _merge_functional(rule: Rule) -> Rule:
    """Unify result variables of repeated lookups such as two lamInter(f,a,Y).

    lamInter and val hold exactly one value per key in every answer set, so
    the merge keeps the rule's meaning and spares the grounder a product.
    """
    while True:
        seen = {}
        mapping = None
        for lit in rule.body:
            if isinstance(lit, Atom) and _FUNCTIONAL.get(lit.pred) == len(lit.args) - 1:
                key = (lit.pred, lit.args[:-1])
                res = lit.args[-1]
                if key in seen and isinstance(res, Variable) and isinstance(seen[key], Variable) and res != seen[key]:
                    mapping = {res.name: seen[key].name}
                    break
                seen.setdefault(key, res)
        if mapping is None:
            return rule
        head = rule.head
        if isinstance(head, Atom):
            head = rename_literal(head, mapping)
        elif isinstance(head, Choice):
            head = Choice(
                tuple(
                    ChoiceElement(rename_literal(el.atom, mapping), tuple(rename_literal(c, mapping) for c in el.condition))
                    for el in head.elements
                ),
                head.bound,
            )
        rule = Rule(head, _dedupe(tuple(rename_literal(b, mapping) for b in rule.body)))


def _scope_vars(sc: Scope) -> set:
    out = {v.name for v in sc.ctx}
    for lit in sc.lits:
        out |= lit.vars()
    return out


def _conj(a: list, b: list) -> list:
    return [_dedupe(x + y) for x in a for y in b]


# -- public operations --------------------------------------------------------------


def defunctionalize(e):
    """Name every lambda that sits directly inside a set literal.

    ``{\\x -> b, ...}`` becomes ``let fn#0 := \\x -> b in {fn#0, ...}``, so
    function-valued set members are named function symbols.
    """
    supply = NameSupply("#")

    def go(e):
        e = map_children(e, go)
        if not isinstance(e, C.SetLit) or not any(isinstance(x, C.Lam) for x in e.elements):
            return e
        taken = free_vars(e)
        bindings, elements = [], []
        for x in e.elements:
            if isinstance(x, C.Lam):
                name = supply.fresh("fn")
                while name in taken:
                    name = supply.fresh("fn")
                bindings.append(C.Binding(name, x))
                elements.append(C.Var(name, x.loc))
            else:
                elements.append(x)
        return C.Let(tuple(bindings), C.SetLit(tuple(elements), e.loc), e.loc)

    return go(e)


def translate(e) -> AspProgram:
    """Translate a closed, type-checked, optimized Core expression."""
    return Translator().translate(defunctionalize(e))


def derive_relevant_domain(e) -> list:
    """(function name, lamDom rule) for every application site of a function."""
    prog = translate(e)
    out = []
    for r in prog.rules:
        if isinstance(r.head, Atom) and r.head.pred == "lamDom":
            f = r.head.args[0]
            key = f.items[0] if isinstance(f, Tuple) else f
            out.append((str(key), r))
    return out
