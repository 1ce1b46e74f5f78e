"""Reader for the text produced by :func:`fms.core.pretty.pretty`.

Identifiers resolve lexically: a bound name is a variable, an unbound builtin
name (``add``, ``!``, ``chooseElement``...) is a Builtin, anything else is a
free variable.
"""

from __future__ import annotations

from fms.core import ast as C
from fms.errors import FmsSyntaxError
from fms.frontend.lexer import KEYWORDS, TokenStream, tokenize

_BINARY_LEVELS = [
    ({"<=>": "equiv"}, "left"),
    ({"=>": "implies"}, "right"),
    ({"|": "or"}, "left"),
    ({"&": "and"}, "left"),
    None,  # not
    ({"=": "eq", "~=": "neq", "<": "lt", "<=": "le", ">": "gt", ">=": "ge"}, "none"),
    ({"+": "add", "-": "sub"}, "left"),
    ({"*": "mul", "/": "div", "%": "mod"}, "left"),
]


def read_core(text: str, filename: str = "<core>") -> C.CoreExpr:
    r = _Reader(tokenize(text, filename, core=True))
    e = r.expr(frozenset())
    if r.ts.peek.kind != "EOF":
        r.ts.error("unexpected token after expression")
    return e


class _Reader:
    def __init__(self, tokens):
        self.ts = TokenStream(tokens)

    def expr(self, bound):
        ts = self.ts
        tok = ts.peek
        if ts.accept("\\"):
            name = ts.expect_ident().value
            ts.expect("->")
            return C.Lam(name, self.expr(bound | {name}), tok.loc)
        if ts.accept_kw("let"):
            pairs = []
            while True:
                name = ts.expect_ident().value
                ts.expect(":=")
                pairs.append((name, ts.pos))
                self.skip_value()
                if not ts.accept(";"):
                    break
            ts.expect_kw("in")
            end = ts.pos
            inner = bound | {n for n, _ in pairs}
            bindings = []
            for name, start in pairs:
                ts.pos = start
                bindings.append(C.Binding(name, self.expr(inner)))
            ts.pos = end
            return C.Let(tuple(bindings), self.expr(inner), tok.loc)
        if ts.accept_kw("if"):
            c = self.expr(bound)
            ts.expect_kw("then")
            t = self.expr(bound)
            ts.expect_kw("else")
            f = self.expr(bound)
            return C.prim("ite", c, t, f, loc=tok.loc)
        if ts.accept_kw("case"):
            scrut = self.expr(bound)
            ts.expect_kw("of")
            arms = [self.arm(bound)]
            while ts.peek.is_sym(";"):
                saved = ts.pos
                ts.next()
                try:
                    arms.append(self.arm(bound))
                except FmsSyntaxError:
                    ts.pos = saved
                    break
            return C.Case(scrut, tuple(arms), tok.loc)
        return self.level(0, bound)

    def skip_value(self):
        """Parse (and discard) a binding value to find where it ends."""
        self.expr(frozenset())

    def arm(self, bound):
        pat = self.pattern()
        self.ts.expect("->")
        return pat, self.expr(bound | set(C.pattern_vars(pat)))

    def level(self, i, bound):
        if i == len(_BINARY_LEVELS):
            return self.unary(bound)
        spec = _BINARY_LEVELS[i]
        if spec is None:
            tok = self.ts.peek
            if self.ts.accept_kw("not"):
                return C.prim("not", self.level(i, bound), loc=tok.loc)
            return self.level(i + 1, bound)
        ops, assoc = spec
        left = self.level(i + 1, bound)
        while self.ts.peek.kind == "SYM" and self.ts.peek.value in ops:
            tok = self.ts.next()
            if assoc == "right":
                return C.prim(ops[tok.value], left, self.level(i, bound), loc=tok.loc)
            left = C.prim(ops[tok.value], left, self.level(i + 1, bound), loc=tok.loc)
            if assoc == "none":
                break
        return left

    def starts_open(self):
        tok = self.ts.peek
        return tok.is_sym("\\") or tok.is_kw("let", "if", "case")

    def unary(self, bound):
        tok = self.ts.peek
        if self.starts_open():
            return self.expr(bound)
        if self.ts.accept("-"):
            operand = self.unary(bound)
            if isinstance(operand, C.Inject) and isinstance(operand.literal, int):
                return C.Inject(-operand.literal, tok.loc)
            return C.prim("neg", operand, loc=tok.loc)
        head = self.atom(bound)
        while self.starts_atom():
            head = C.App(head, self.atom(bound), tok.loc)
        return head

    def starts_atom(self):
        tok = self.ts.peek
        if tok.kind in ("INT", "STRING"):
            return True
        if tok.kind == "IDENT":
            return tok.value not in KEYWORDS
        return tok.is_sym("(", "{", "!", "?")

    def atom(self, bound):
        ts = self.ts
        tok = ts.next()
        if tok.kind in ("INT", "STRING"):
            return C.Inject(tok.value, tok.loc)
        if tok.is_sym("!"):
            return C.Builtin("forall", tok.loc)
        if tok.is_sym("?"):
            return C.Builtin("exists", tok.loc)
        if tok.kind == "IDENT" and tok.value not in KEYWORDS:
            name = tok.value
            if name in ("outputexp", "OutputExp") and ts.peek.is_sym("(") and name not in bound:
                ts.next()
                label = ts.next()
                if label.kind != "STRING":
                    raise FmsSyntaxError("expected an output label", label.loc)
                ts.expect(",")
                inner = self.expr(bound)
                ts.expect(")")
                return C.OutputExp(label.value, inner, tok.loc)
            if ts.accept("["):
                args = []
                if not ts.peek.is_sym("]"):
                    args.append(self.expr(bound))
                    while ts.accept(","):
                        args.append(self.expr(bound))
                ts.expect("]")
                return C.Herb(name, tuple(args), tok.loc)
            if name in bound:
                return C.Var(name, tok.loc)
            if name in C.BOOL_TAGS:
                return C.Herb(name, (), tok.loc)
            if C.is_builtin_name(name):
                return C.Builtin(name, tok.loc)
            return C.Var(name, tok.loc)
        if tok.is_sym("("):
            items = [self.expr(bound)]
            while ts.accept(","):
                items.append(self.expr(bound))
            ts.expect(")")
            return items[0] if len(items) == 1 else C.tup(*items, loc=tok.loc)
        if tok.is_sym("{"):
            items = []
            if not ts.peek.is_sym("}"):
                items.append(self.expr(bound))
                while ts.accept(","):
                    items.append(self.expr(bound))
            ts.expect("}")
            return C.SetLit(tuple(items), tok.loc)
        raise FmsSyntaxError(f"unexpected {tok.describe()}", tok.loc)

    def pattern(self):
        ts = self.ts
        tok = ts.next()
        if tok.is_sym("_"):
            return C.Wildcard(tok.loc)
        if tok.kind in ("INT", "STRING"):
            return C.LitMatch(tok.value, tok.loc)
        if tok.kind == "IDENT" and tok.value not in KEYWORDS:
            if ts.accept("["):
                subs = []
                if not ts.peek.is_sym("]"):
                    subs.append(self.pattern())
                    while ts.accept(","):
                        subs.append(self.pattern())
                ts.expect("]")
                return C.CtorMatch(tok.value, tuple(subs), tok.loc)
            if tok.value in C.BOOL_TAGS:
                return C.CtorMatch(tok.value, (), tok.loc)
            return C.VarMatch(tok.value, tok.loc)
        if tok.is_sym("("):
            if ts.accept("-"):
                n = ts.next()
                if n.kind != "INT":
                    raise FmsSyntaxError("expected an integer", n.loc)
                ts.expect(")")
                return C.LitMatch(-n.value, tok.loc)
            subs = [self.pattern()]
            while ts.accept(","):
                subs.append(self.pattern())
            ts.expect(")")
            return subs[0] if len(subs) == 1 else C.CtorMatch(C.tuple_tag(len(subs)), tuple(subs), tok.loc)
        raise FmsSyntaxError(f"expected a pattern, found {tok.describe()}", tok.loc)
