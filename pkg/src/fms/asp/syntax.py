"""ASP terms, literals, rules and the program printer."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from fms.errors import UnsafeRule

# -- terms --------------------------------------------------------------------


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class IntConst:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class StrConst:
    value: str

    def __str__(self):
        return json.dumps(self.value, ensure_ascii=False)


@dataclass(frozen=True)
class Func:
    """A function term; with no arguments it is a symbolic constant."""

    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Tuple:
    items: tuple

    def __str__(self):
        inner = ",".join(str(a) for a in self.items)
        return f"({inner},)" if len(self.items) == 1 else f"({inner})"


@dataclass(frozen=True)
class BinOp:
    """Integer arithmetic: + - * / (truncating) and \\ (modulo)."""

    op: str
    left: "AspTerm"
    right: "AspTerm"

    def __str__(self):
        def side(t):
            return f"({t})" if isinstance(t, (BinOp, Interval)) else str(t)

        return f"{side(self.left)}{self.op}{side(self.right)}"


@dataclass(frozen=True)
class Interval:
    lo: "AspTerm"
    hi: "AspTerm"

    def __str__(self):
        def side(t):
            return f"({t})" if isinstance(t, (BinOp, Interval)) else str(t)

        return f"{side(self.lo)}..{side(self.hi)}"


AspTerm = Union[Variable, IntConst, StrConst, Func, Tuple, BinOp, Interval]


def const(name: str) -> Func:
    return Func(name)


def term_vars(t) -> set[str]:
    if isinstance(t, Variable):
        return {t.name}
    if isinstance(t, (Func,)):
        return set().union(*(term_vars(a) for a in t.args)) if t.args else set()
    if isinstance(t, Tuple):
        return set().union(*(term_vars(a) for a in t.items)) if t.items else set()
    if isinstance(t, BinOp):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Interval):
        return term_vars(t.lo) | term_vars(t.hi)
    return set()


def is_ground(t) -> bool:
    return not term_vars(t)


def has_arith(t) -> bool:
    if isinstance(t, (BinOp, Interval)):
        return True
    if isinstance(t, Func):
        return any(has_arith(a) for a in t.args)
    if isinstance(t, Tuple):
        return any(has_arith(a) for a in t.items)
    return False


def binding_vars(t) -> set[str]:
    """Variables a positive occurrence of ``t`` can bind (not those under arithmetic)."""
    if isinstance(t, Variable):
        return {t.name}
    if isinstance(t, Func):
        return set().union(*(binding_vars(a) for a in t.args)) if t.args else set()
    if isinstance(t, Tuple):
        return set().union(*(binding_vars(a) for a in t.items)) if t.items else set()
    return set()


def rename_term(t, mapping: dict):
    if isinstance(t, Variable):
        return Variable(mapping.get(t.name, t.name))
    if isinstance(t, Func):
        return Func(t.name, tuple(rename_term(a, mapping) for a in t.args))
    if isinstance(t, Tuple):
        return Tuple(tuple(rename_term(a, mapping) for a in t.items))
    if isinstance(t, BinOp):
        return BinOp(t.op, rename_term(t.left, mapping), rename_term(t.right, mapping))
    if isinstance(t, Interval):
        return Interval(rename_term(t.lo, mapping), rename_term(t.hi, mapping))
    return t


# -- literals -----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"

    def vars(self) -> set[str]:
        return set().union(*(term_vars(a) for a in self.args)) if self.args else set()


@dataclass(frozen=True)
class Not:
    atom: Atom

    def __str__(self):
        return f"not {self.atom}"

    def vars(self) -> set[str]:
        return self.atom.vars()


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")
NEGATE_OP = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


@dataclass(frozen=True)
class Comparison:
    op: str
    left: AspTerm
    right: AspTerm

    def __str__(self):
        return f"{self.left}{self.op}{self.right}"

    def vars(self) -> set[str]:
        return term_vars(self.left) | term_vars(self.right)

    def negated(self) -> "Comparison":
        return Comparison(NEGATE_OP[self.op], self.left, self.right)


Literal = Union[Atom, Not, Comparison]


def rename_literal(lit, mapping: dict):
    if isinstance(lit, Atom):
        return Atom(lit.pred, tuple(rename_term(a, mapping) for a in lit.args))
    if isinstance(lit, Not):
        return Not(rename_literal(lit.atom, mapping))
    return Comparison(lit.op, rename_term(lit.left, mapping), rename_term(lit.right, mapping))


# -- rules --------------------------------------------------------------------


@dataclass(frozen=True)
class ChoiceElement:
    atom: Atom
    condition: tuple = ()

    def __str__(self):
        if not self.condition:
            return str(self.atom)
        return f"{self.atom}:{','.join(str(c) for c in self.condition)}"


@dataclass(frozen=True)
class Choice:
    elements: tuple
    bound: Optional[int] = None  # exact cardinality, or None for unbounded

    def __str__(self):
        inner = ";".join(str(e) for e in self.elements)
        return "{" + inner + "}" + (f"={self.bound}" if self.bound is not None else "")


@dataclass(frozen=True)
class Rule:
    head: Union[Atom, Choice, None]
    body: tuple = ()

    def __str__(self):
        head = "" if self.head is None else str(self.head)
        if not self.body:
            return f"{head}."
        return f"{head}:-{','.join(str(b) for b in self.body)}."

    @property
    def is_fact(self) -> bool:
        return isinstance(self.head, Atom) and not self.body

    @property
    def is_choice(self) -> bool:
        return isinstance(self.head, Choice)

    @property
    def is_constraint(self) -> bool:
        return self.head is None


def _lit_binds(lit) -> set[str]:
    """Variables made safe by a body literal."""
    if isinstance(lit, Atom):
        return set().union(*(binding_vars(a) for a in lit.args)) if lit.args else set()
    return set()


def safe_vars(body) -> set[str]:
    """Variables bound by the body, following the grounder's rules.

    Positive atoms bind variables outside arithmetic; ``X = t`` binds X once
    t is bound, and ``(A,B) = t`` binds A, B the same way; intervals bind too.
    """
    bound: set[str] = set()
    for lit in body:
        bound |= _lit_binds(lit)
    changed = True
    while changed:
        changed = False
        for lit in body:
            if isinstance(lit, Comparison) and lit.op == "=":
                for pat, src in ((lit.left, lit.right), (lit.right, lit.left)):
                    if term_vars(src) <= bound:
                        new = binding_vars(pat) - bound
                        if new:
                            bound |= new
                            changed = True
    return bound


def rule_vars(rule: Rule) -> set[str]:
    out: set[str] = set()
    for lit in rule.body:
        out |= lit.vars()
    if isinstance(rule.head, Atom):
        out |= rule.head.vars()
    return out


def check_safety(rule: Rule):
    """Raise UnsafeRule when some variable is not bound by the body."""
    bound = safe_vars(rule.body)
    needed = rule_vars(rule)
    if isinstance(rule.head, Choice):
        for el in rule.head.elements:
            local = safe_vars(rule.body + el.condition)
            missing = (el.atom.vars() | set().union(*(c.vars() for c in el.condition))) - local
            if missing:
                raise UnsafeRule(f"unsafe variable {sorted(missing)[0]} in {rule}")
    missing = needed - bound
    if missing:
        raise UnsafeRule(f"unsafe variable {sorted(missing)[0]} in {rule}")


# -- programs -----------------------------------------------------------------


def is_anchor(rule: Rule) -> bool:
    """The integrity constraint ``:- not bool(X), result(X).``"""
    if rule.head is not None or len(rule.body) != 2:
        return False
    neg, pos = rule.body
    return (
        isinstance(neg, Not)
        and neg.atom.pred == "bool"
        and isinstance(pos, Atom)
        and pos.pred == "result"
        and neg.atom.args == pos.args
        and isinstance(pos.args[0], Variable)
    )


@dataclass
class AspProgram:
    rules: list = field(default_factory=list)
    symbols: list = field(default_factory=list)  # output descriptors from the translator

    def add(self, rule: Rule):
        self.rules.append(rule)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def ordered(self) -> list:
        facts = [r for r in self.rules if r.is_fact]
        choices = [r for r in self.rules if r.is_choice]
        anchors = [r for r in self.rules if is_anchor(r)]
        rest = [r for r in self.rules if not (r.is_fact or r.is_choice or is_anchor(r))]
        return facts + choices + rest + anchors


def print_program(p: AspProgram) -> str:
    for r in p.rules:
        check_safety(r)
    return "".join(f"{r}\n" for r in p.ordered())


ANCHOR = Rule(None, (Not(Atom("bool", (Variable("X"),))), Atom("result", (Variable("X"),))))
