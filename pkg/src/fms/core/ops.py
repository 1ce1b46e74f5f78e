"""Scope-aware operations on Core terms."""

from __future__ import annotations

from dataclasses import replace
from typing import Optional

from fms.core.ast import (
    App,
    Binding,
    Builtin,
    Case,
    CoreExpr,
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
    children,
    is_choice_marker,
    pattern_vars,
    spine,
    walk,
)
from fms.core.names import NameSupply, base_name, fresh_name


def free_vars(e: CoreExpr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Lam):
        return free_vars(e.body) - {e.param}
    if isinstance(e, Let):
        out = free_vars(e.body)
        for b in e.bindings:
            out |= free_vars(b.value)
        return out - {b.name for b in e.bindings}
    if isinstance(e, Case):
        out = free_vars(e.scrutinee)
        for pat, body in e.arms:
            out |= free_vars(body) - set(pattern_vars(pat))
        return out
    out: set[str] = set()
    for c in children(e):
        out |= free_vars(c)
    return out


def all_names(e: CoreExpr) -> set[str]:
    """Every identifier mentioned anywhere, bound or free."""
    names = set()
    for node in walk(e):
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Lam):
            names.add(node.param)
        elif isinstance(node, Let):
            names.update(b.name for b in node.bindings)
        elif isinstance(node, Case):
            for pat, _ in node.arms:
                names.update(pattern_vars(pat))
    return names


def _rename_pattern(p, mapping: dict[str, str]):
    if isinstance(p, VarMatch) and p.name in mapping:
        return VarMatch(mapping[p.name], p.loc)
    if isinstance(p, CtorMatch):
        return CtorMatch(p.tag, tuple(_rename_pattern(s, mapping) for s in p.subpatterns), p.loc)
    return p


def substitute(e: CoreExpr, name: str, value: CoreExpr, supply: Optional[NameSupply] = None) -> CoreExpr:
    """Replace free ``name`` in ``e`` by ``value``, renaming binders that would capture."""
    fv_value = free_vars(value)

    def fresh(old: str, scope: CoreExpr) -> str:
        avoid = fv_value | all_names(scope) | {name}
        if supply is not None:
            while True:
                new = supply.fresh(base_name(old))
                if new not in avoid:
                    return new
        return fresh_name(old, avoid)

    def go(e: CoreExpr) -> CoreExpr:
        if isinstance(e, Var):
            return value if e.name == name else e
        if isinstance(e, Lam):
            if e.param == name or name not in free_vars(e.body):
                return e
            if e.param in fv_value:
                new = fresh(e.param, e)
                e = Lam(new, substitute(e.body, e.param, Var(new)), e.loc)
            return Lam(e.param, go(e.body), e.loc)
        if isinstance(e, Let):
            bound = {b.name for b in e.bindings}
            if name in bound or name not in free_vars(e):
                return e
            clash = bound & fv_value
            if clash:
                mapping = {old: fresh(old, e) for old in sorted(clash)}
                e = rename_let(e, mapping)
            return Let(
                tuple(Binding(b.name, go(b.value), b.pragma) for b in e.bindings),
                go(e.body),
                e.loc,
            )
        if isinstance(e, Case):
            arms = []
            for pat, body in e.arms:
                pv = set(pattern_vars(pat))
                if name in pv or name not in free_vars(body):
                    arms.append((pat, body))
                    continue
                clash = pv & fv_value
                if clash:
                    mapping = {old: fresh(old, body) for old in sorted(clash)}
                    pat = _rename_pattern(pat, mapping)
                    for old, new in mapping.items():
                        body = substitute(body, old, Var(new))
                arms.append((pat, go(body)))
            return Case(go(e.scrutinee), tuple(arms), e.loc)
        return map_children(e, go)

    return go(e)


def rename_let(e: Let, mapping: dict[str, str]) -> Let:
    bindings = []
    for b in e.bindings:
        v = b.value
        for old, new in mapping.items():
            v = substitute(v, old, Var(new))
        bindings.append(Binding(mapping.get(b.name, b.name), v, b.pragma))
    body = e.body
    for old, new in mapping.items():
        body = substitute(body, old, Var(new))
    return Let(tuple(bindings), body, e.loc)


def map_children(e: CoreExpr, f) -> CoreExpr:
    """Rebuild ``e`` with ``f`` applied to each direct child (binders untouched)."""
    if isinstance(e, App):
        return App(f(e.fun), f(e.arg), e.loc)
    if isinstance(e, Lam):
        return Lam(e.param, f(e.body), e.loc)
    if isinstance(e, Let):
        return Let(tuple(Binding(b.name, f(b.value), b.pragma) for b in e.bindings), f(e.body), e.loc)
    if isinstance(e, Case):
        return Case(f(e.scrutinee), tuple((p, f(b)) for p, b in e.arms), e.loc)
    if isinstance(e, SetLit):
        return SetLit(tuple(f(x) for x in e.elements), e.loc)
    if isinstance(e, Herb):
        return Herb(e.tag, tuple(f(x) for x in e.args), e.loc)
    if isinstance(e, OutputExp):
        return OutputExp(e.label, f(e.inner), e.loc)
    return e


def alpha_equal(a: CoreExpr, b: CoreExpr) -> bool:
    counter = [0]

    def bind(env: dict, name: str, idx: int) -> dict:
        env = dict(env)
        env[name] = idx
        return env

    def pat_eq(p, q, ea, eb):
        if type(p) is not type(q):
            return None
        if isinstance(p, Wildcard):
            return ea, eb
        if isinstance(p, LitMatch):
            return (ea, eb) if type(p.value) is type(q.value) and p.value == q.value else None
        if isinstance(p, VarMatch):
            counter[0] += 1
            return bind(ea, p.name, counter[0]), bind(eb, q.name, counter[0])
        if p.tag != q.tag or len(p.subpatterns) != len(q.subpatterns):
            return None
        for sp, sq in zip(p.subpatterns, q.subpatterns):
            r = pat_eq(sp, sq, ea, eb)
            if r is None:
                return None
            ea, eb = r
        return ea, eb

    def eq(x, y, ea, eb) -> bool:
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            ix, iy = ea.get(x.name), eb.get(y.name)
            if ix is None and iy is None:
                return x.name == y.name
            return ix == iy
        if isinstance(x, App):
            return eq(x.fun, y.fun, ea, eb) and eq(x.arg, y.arg, ea, eb)
        if isinstance(x, Lam):
            counter[0] += 1
            return eq(x.body, y.body, bind(ea, x.param, counter[0]), bind(eb, y.param, counter[0]))
        if isinstance(x, Let):
            if len(x.bindings) != len(y.bindings):
                return False
            for bx, by in zip(x.bindings, y.bindings):
                counter[0] += 1
                ea, eb = bind(ea, bx.name, counter[0]), bind(eb, by.name, counter[0])
            return all(eq(bx.value, by.value, ea, eb) for bx, by in zip(x.bindings, y.bindings)) and eq(
                x.body, y.body, ea, eb
            )
        if isinstance(x, Inject):
            return type(x.literal) is type(y.literal) and x.literal == y.literal
        if isinstance(x, Case):
            if len(x.arms) != len(y.arms) or not eq(x.scrutinee, y.scrutinee, ea, eb):
                return False
            for (px, bx), (py, by) in zip(x.arms, y.arms):
                r = pat_eq(px, py, ea, eb)
                if r is None or not eq(bx, by, *r):
                    return False
            return True
        if isinstance(x, Builtin):
            return x.symbol == y.symbol
        if isinstance(x, SetLit):
            return len(x.elements) == len(y.elements) and all(
                eq(p, q, ea, eb) for p, q in zip(x.elements, y.elements)
            )
        if isinstance(x, Herb):
            return x.tag == y.tag and len(x.args) == len(y.args) and all(
                eq(p, q, ea, eb) for p, q in zip(x.args, y.args)
            )
        if isinstance(x, OutputExp):
            return x.label == y.label and eq(x.inner, y.inner, ea, eb)
        raise TypeError(f"not a Core expression: {x!r}")

    return eq(a, b, {}, {})


def strip_locations(e: CoreExpr) -> CoreExpr:
    e = map_children(e, strip_locations)
    return replace(e, loc=None) if hasattr(e, "loc") else e


# -- occurrence analysis used by the optimizer --------------------------------

_LAZY_ARGS = {"ite": {1, 2}, "and": {1}, "or": {1}, "implies": {1}}


def occurrences(e: CoreExpr, name: str) -> list[tuple[bool, bool]]:
    """One ``(under_lambda, strict)`` pair per free occurrence of ``name``.

    A position is strict when it is evaluated whenever ``e`` is: not inside a
    lambda, a case arm, a lazy branch of if-then-else, or the short-circuited
    operand of a connective.
    """
    out: list[tuple[bool, bool]] = []

    def go(e, under_lam, strict):
        if isinstance(e, Var):
            if e.name == name:
                out.append((under_lam, strict))
            return
        if isinstance(e, Lam):
            if e.param != name:
                go(e.body, True, False)
            return
        if isinstance(e, Let):
            if name in {b.name for b in e.bindings}:
                return
            for b in e.bindings:
                go(b.value, under_lam, strict)
            go(e.body, under_lam, strict)
            return
        if isinstance(e, Case):
            go(e.scrutinee, under_lam, strict)
            for pat, body in e.arms:
                if name not in pattern_vars(pat):
                    go(body, under_lam, False)
            return
        if isinstance(e, App):
            head, args = spine(e)
            lazy = set()
            if isinstance(head, Builtin) and len(args) <= builtin_info(head.symbol).arity:
                lazy = _LAZY_ARGS.get(head.symbol, set())
            go(head, under_lam, strict)
            for i, a in enumerate(args):
                go(a, under_lam, strict and i not in lazy)
            return
        for c in children(e):
            go(c, under_lam, strict)

    go(e, False, True)
    return out


def has_eager_output(e: CoreExpr) -> bool:
    """True if evaluating ``e`` may record output.

    A lambda value records nothing until applied.  Below the top, lambdas
    may be applied on the spot (``bind s (\\x -> ...)``, beta redexes), so
    any output there counts.
    """
    if isinstance(e, Lam):
        return False
    return any(isinstance(n, OutputExp) for n in walk(e))


def has_choice(e: CoreExpr) -> bool:
    return any(isinstance(n, Builtin) and is_choice_marker(n.symbol) for n in walk(e))


def is_pinned(e: CoreExpr) -> bool:
    """Terms that may not be duplicated, dropped, or moved to a lazy position."""
    return has_eager_output(e) or has_choice(e)
