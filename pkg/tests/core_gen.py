"""Hypothesis strategy for closed, well-typed, fully defined Core terms.

Terms are generated by type (Int, Bool, Set Int, Int -> Int) so they check by
construction.  Division and modulo only take non-zero literal divisors, cases
always end in a catch-all arm, and range bounds are small literals, so every
term evaluates without error and quickly.
"""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from fms.core import ast as C

INT, BOOL, SET, FUN = "int", "bool", "set", "fun"
MAX_DEPTH = 6


class _Names:
    def __init__(self):
        self.counter = itertools.count()

    def fresh(self, base="v"):
        return f"{base}{next(self.counter)}"


def _leaf(draw, ty, env):
    vars_ = [n for n, t in env if t == ty]
    if vars_ and draw(st.booleans()):
        return C.Var(draw(st.sampled_from(vars_)))
    if ty == INT:
        return C.Inject(draw(st.integers(-5, 9)))
    if ty == BOOL:
        return draw(st.sampled_from([C.TRUE, C.FALSE]))
    if ty == SET:
        items = draw(st.lists(st.integers(-3, 5), max_size=3))
        return C.SetLit(tuple(C.Inject(i) for i in items))
    x = "p" + str(draw(st.integers(0, 10**6)))
    return C.Lam(x, C.prim("add", C.Var(x), C.Inject(draw(st.integers(-3, 3)))))


def _gen(draw, ty, depth, env, names):
    if depth <= 0 or draw(st.integers(0, 4)) == 0:
        return _leaf(draw, ty, env)
    d = depth - 1

    def sub(t, extra=()):
        return _gen(draw, t, d, env + list(extra), names)

    # constructs that work at every type
    generic = draw(st.integers(0, 9))
    if generic == 0:
        return C.prim("ite", sub(BOOL), sub(ty), sub(ty))
    if generic == 1:
        n = names.fresh()
        bty = draw(st.sampled_from([INT, BOOL, SET, FUN]))
        value = sub(bty)
        return C.Let((C.Binding(n, value),), _gen(draw, ty, d, env + [(n, bty)], names))
    if generic == 2:
        x = names.fresh("x")
        return C.App(C.Lam(x, _gen(draw, ty, d, env + [(x, INT)], names)), sub(INT))
    if generic == 3 and ty != FUN:
        return C.OutputExp(draw(st.sampled_from(["a", "b"])), sub(ty))
    if generic == 4:
        a, b = names.fresh("a"), names.fresh("b")
        scrut = C.tup(sub(INT), sub(INT))
        body = _gen(draw, ty, d, env + [(a, INT), (b, INT)], names)
        pat = C.CtorMatch("tuple2", (C.VarMatch(a), C.VarMatch(b)))
        return C.Case(scrut, ((pat, body),))
    if generic == 5:
        k = draw(st.integers(-2, 3))
        x = names.fresh("y")
        return C.Case(
            sub(INT),
            ((C.LitMatch(k), sub(ty)), (C.VarMatch(x), _gen(draw, ty, d, env + [(x, INT)], names))),
        )

    if ty == INT:
        op = draw(st.sampled_from(["add", "sub", "mul", "div", "mod", "neg", "apply"]))
        if op == "neg":
            return C.prim("neg", sub(INT))
        if op in ("div", "mod"):
            return C.prim(op, sub(INT), C.Inject(draw(st.sampled_from([1, 2, 3, -2]))))
        if op == "apply":
            return C.App(sub(FUN), sub(INT))
        return C.prim(op, sub(INT), sub(INT))
    if ty == BOOL:
        op = draw(st.sampled_from(["cmp", "and", "or", "not", "implies", "equiv", "forall", "exists", "member"]))
        if op == "cmp":
            return C.prim(draw(st.sampled_from(sorted(C.COMPARISONS))), sub(INT), sub(INT))
        if op == "not":
            return C.prim("not", sub(BOOL))
        if op in ("forall", "exists"):
            x = names.fresh("q")
            return C.prim(op, sub(SET), C.Lam(x, _gen(draw, BOOL, d, env + [(x, INT)], names)))
        if op == "member":
            return C.prim("member", sub(INT), sub(SET))
        return C.prim(op, sub(BOOL), sub(BOOL))
    if ty == SET:
        op = draw(st.sampled_from(["lit", "range", "union", "bind"]))
        if op == "lit":
            return C.SetLit(tuple(sub(INT) for _ in range(draw(st.integers(0, 3)))))
        if op == "range":
            lo = draw(st.integers(-3, 4))
            return C.prim("range", C.Inject(lo), C.Inject(lo + draw(st.integers(-1, 4))))
        if op == "union":
            return C.prim("union", sub(SET), sub(SET))
        x = names.fresh("e")
        return C.prim("bind", sub(SET), C.Lam(x, C.SetLit((_gen(draw, INT, d, env + [(x, INT)], names),))))
    x = names.fresh("f")
    return C.Lam(x, _gen(draw, INT, d, env + [(x, INT)], names))


@st.composite
def closed_terms(draw, max_depth=MAX_DEPTH):
    ty = draw(st.sampled_from([INT, BOOL, SET]))
    return _gen(draw, ty, max_depth, [], _Names())
