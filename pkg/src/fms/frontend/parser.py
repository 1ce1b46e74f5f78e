"""Recursive-descent parser for the Full language.

Precedence, loosest first: ``<=>``, ``=>`` (right), ``|``, ``&``, ``not``,
comparisons (non-associative), ``+ -``, ``* / %``, unary minus, application.
Lambda, let, if and case extend as far right as possible and may appear as
the last operand of any operator or application.
"""

from __future__ import annotations

from fms.errors import FmsSyntaxError
from fms.frontend import ast as A
from fms.frontend.lexer import KEYWORDS, TokenStream, tokenize

# Identifiers that name builtins rather than user symbols.
BUILTIN_WORDS = {
    "and": "and",
    "or": "or",
    "bind": "bind",
    "union": "union",
    "member": "member",
    "card": "card",
    "true": "true",
    "false": "false",
}

_CMP = {"=": "eq", "~=": "neq", "<": "lt", "<=": "le", ">": "gt", ">=": "ge"}
_ADD = {"+": "add", "-": "sub"}
_MUL = {"*": "mul", "/": "div", "%": "mod"}

# Tokens after which a dangling ';' in a case is a harmless terminator.
_CLOSERS = {".", ")", "}", "]", ",", "||"}
_CLOSER_WORDS = {"in", "then", "else", "of"}


def parse(source: str, filename: str = "<input>") -> A.FullAst:
    return Parser(tokenize(source, filename)).program()


def parse_expression(source: str, filename: str = "<input>") -> A.FullExpr:
    p = Parser(tokenize(source, filename))
    e = p.expr()
    if p.ts.peek.kind != "EOF":
        p.ts.error("unexpected token after expression")
    return e


class _Backtrack(Exception):
    pass


class _Committed(Exception):
    def __init__(self, err: FmsSyntaxError):
        self.err = err


class Parser:
    def __init__(self, tokens):
        self.ts = TokenStream(tokens)

    # -- statements -----------------------------------------------------------

    def program(self) -> A.FullAst:
        stmts = []
        while self.ts.peek.kind != "EOF":
            stmts.append(self.statement())
        return A.FullAst(tuple(stmts))

    def statement(self):
        ts = self.ts
        tok = ts.peek
        if tok.is_kw("inline", "noinline") and ts.ahead(1).kind == "IDENT" and ts.ahead(2).is_sym("."):
            ts.next()
            name = ts.next().value
            ts.expect(".")
            return A.Directive(tok.value, name, tok.loc)
        if tok.kind == "IDENT" and (ts.ahead(1).is_sym("::") or (ts.ahead(1).is_sym("/") and ts.ahead(3).is_sym("::"))):
            return self.declaration()
        try:
            d = self.attempt(self.definition)
        except _Committed as c:
            raise c.err from None
        if d is not None:
            return d
        e = self.expr()
        ts.expect(".")
        return A.Constraint(e, tok.loc)

    def attempt(self, fn):
        """Run ``fn``; on a syntax error rewind and return None."""
        saved = self.ts.pos
        try:
            return fn()
        except (FmsSyntaxError, _Backtrack):
            self.ts.pos = saved
            return None

    def declaration(self) -> A.Declaration:
        ts = self.ts
        name_tok = ts.expect_ident()
        arity, explicit = 0, False
        if ts.accept("/"):
            tok = ts.next()
            if tok.kind != "INT":
                raise FmsSyntaxError(f"expected an arity, found {tok.describe()}", tok.loc)
            arity, explicit = tok.value, True
        ts.expect("::")
        word = ts.peek
        if ts.accept_kw("element"):
            ts.expect_kw("of")
            kind = A.ElementOf(self.expr())
        elif ts.accept_kw("subset"):
            ts.expect_kw("of")
            kind = A.SubsetOf(self.expr())
        elif ts.accept_kw("function"):
            ts.expect_kw("to")
            kind = A.FunctionTo(self.expr())
        elif ts.accept_kw("constructor"):
            kind = A.Constructor()
        elif ts.accept_kw("proposition"):
            kind = A.Proposition()
        elif ts.accept_kw("predicate"):
            kind = A.Predicate()
        else:
            raise FmsSyntaxError(f"unknown declaration kind {word.describe()}", word.loc)
        ts.expect(".")
        return A.Declaration(name_tok.value, arity, kind, explicit, name_tok.loc)

    def definition(self) -> A.Definition:
        head = self.head()
        self.ts.expect(":=")
        # Past ':=' the statement is a definition; errors are no longer backtracked.
        try:
            body = self.expr()
            self.ts.expect(".")
        except FmsSyntaxError as err:
            raise _Committed(err) from None
        return A.Definition(head, body, head.loc)

    def head(self):
        ts = self.ts
        tok = ts.peek
        if tok.is_sym("("):
            return A.PatHead(self.atomic_pattern(), tok.loc)
        name = ts.expect_ident()
        if name.value in BUILTIN_WORDS:
            raise _Backtrack()
        params = []
        while not ts.peek.is_sym(":="):
            params.append(self.atomic_pattern())
        return A.FunHead(name.value, tuple(params), name.loc)

    # -- patterns -------------------------------------------------------------

    def pattern(self) -> A.FullPattern:
        """Full pattern: a constructor may take arguments without brackets."""
        ts = self.ts
        tok = ts.peek
        if tok.kind == "IDENT" and tok.value not in KEYWORDS and not ts.ahead(1).is_sym("["):
            if self._starts_atomic_pattern(ts.ahead(1)):
                ts.next()
                args = []
                while self._starts_atomic_pattern(ts.peek):
                    args.append(self.atomic_pattern())
                return A.PCtor(tok.value, tuple(args), tok.loc)
        return self.atomic_pattern()

    def _starts_atomic_pattern(self, tok) -> bool:
        if tok.kind in ("INT", "STRING"):
            return True
        if tok.kind == "IDENT":
            return tok.value not in KEYWORDS
        return tok.is_sym("_", "(")

    def atomic_pattern(self) -> A.FullPattern:
        ts = self.ts
        tok = ts.next()
        if tok.is_sym("_"):
            return A.PWild(tok.loc)
        if tok.kind in ("INT", "STRING"):
            return A.PLit(tok.value, tok.loc)
        if tok.is_sym("-") and ts.peek.kind == "INT":
            return A.PLit(-ts.next().value, tok.loc)
        if tok.kind == "IDENT" and tok.value not in KEYWORDS:
            if ts.accept("["):
                args = []
                if not ts.peek.is_sym("]"):
                    args.append(self.pattern())
                    while ts.accept(","):
                        args.append(self.pattern())
                ts.expect("]")
                return A.PCtor(tok.value, tuple(args), tok.loc)
            return A.PVar(tok.value, tok.loc)
        if tok.is_sym("("):
            items = [self.pattern()]
            while ts.accept(","):
                items.append(self.pattern())
            ts.expect(")")
            return items[0] if len(items) == 1 else A.PTuple(tuple(items), tok.loc)
        raise FmsSyntaxError(f"expected a pattern, found {tok.describe()}", tok.loc)

    # -- expressions ----------------------------------------------------------

    def starts_open(self) -> bool:
        tok = self.ts.peek
        return tok.is_sym("\\") or tok.is_kw("let", "if", "case")

    def expr(self) -> A.FullExpr:
        ts = self.ts
        tok = ts.peek
        if ts.accept("\\"):
            params = [self.atomic_pattern()]
            while not ts.peek.is_sym("->"):
                params.append(self.atomic_pattern())
            ts.expect("->")
            return A.ELam(tuple(params), self.expr(), tok.loc)
        if ts.accept_kw("let"):
            defs = [self.let_definition()]
            while ts.accept(";"):
                if ts.peek.is_kw("in"):
                    break
                defs.append(self.let_definition())
            ts.expect_kw("in")
            return A.ELet(tuple(defs), self.expr(), tok.loc)
        if ts.accept_kw("if"):
            c = self.expr()
            ts.expect_kw("then")
            t = self.expr()
            ts.expect_kw("else")
            return A.EIf(c, t, self.expr(), tok.loc)
        if ts.accept_kw("case"):
            scrut = self.expr()
            ts.expect_kw("of")
            arms = [self.arm()]
            while ts.peek.is_sym(";"):
                after = ts.ahead(1)
                if after.kind == "EOF" or after.is_sym(*_CLOSERS) or after.is_kw(*_CLOSER_WORDS):
                    ts.next()
                    break
                saved = ts.pos
                ts.next()
                arm = self.attempt(self.arm)
                if arm is None:
                    ts.pos = saved
                    break
                arms.append(arm)
            return A.ECase(scrut, tuple(arms), tok.loc)
        return self.equiv()

    def arm(self):
        pat = self.pattern()
        self.ts.expect("->")
        return pat, self.expr()

    def let_definition(self) -> A.Definition:
        head = self.head()
        self.ts.expect(":=")
        return A.Definition(head, self.expr(), head.loc)

    def binary(self, sub, ops: dict, assoc: str = "left"):
        left = sub()
        while True:
            tok = self.ts.peek
            if tok.kind != "SYM" or tok.value not in ops:
                return left
            self.ts.next()
            if assoc == "right":
                return A.EBinOp(ops[tok.value], left, self.binary(sub, ops, assoc), tok.loc)
            right = sub()
            left = A.EBinOp(ops[tok.value], left, right, tok.loc)
            if assoc == "none":
                nxt = self.ts.peek
                if nxt.kind == "SYM" and nxt.value in ops:
                    raise FmsSyntaxError("comparison operators do not chain", nxt.loc)
                return left

    def equiv(self):
        return self.binary(self.implies, {"<=>": "equiv"})

    def implies(self):
        return self.binary(self.disj, {"=>": "implies"}, "right")

    def disj(self):
        return self.binary(self.conj, {"|": "or"})

    def conj(self):
        return self.binary(self.negation, {"&": "and"})

    def negation(self):
        tok = self.ts.peek
        if self.ts.accept_kw("not"):
            return A.ENot(self.negation(), tok.loc)
        return self.comparison()

    def comparison(self):
        return self.binary(self.additive, _CMP, "none")

    def additive(self):
        return self.binary(self.multiplicative, _ADD)

    def multiplicative(self):
        return self.binary(self.unary, _MUL)

    def unary(self):
        tok = self.ts.peek
        if self.starts_open():
            return self.expr()
        if self.ts.accept("-"):
            operand = self.unary()
            if isinstance(operand, A.ELit) and isinstance(operand.value, int):
                return A.ELit(-operand.value, tok.loc)
            return A.ENeg(operand, tok.loc)
        if self.ts.accept_kw("not"):
            return A.ENot(self.unary(), tok.loc)
        return self.application()

    def starts_atom(self) -> bool:
        tok = self.ts.peek
        if tok.kind in ("INT", "STRING"):
            return True
        if tok.kind == "IDENT":
            return tok.value not in KEYWORDS
        return tok.is_sym("(", "{", "!", "?")

    def application(self):
        tok = self.ts.peek
        fun = self.atom()
        args = []
        while self.starts_atom():
            args.append(self.atom())
        if self.ts.peek.is_sym("\\") and not isinstance(fun, A.ELit):
            args.append(self.expr())  # trailing lambda
        return A.EApp(fun, tuple(args), tok.loc) if args else fun

    def atom(self):
        ts = self.ts
        tok = ts.next()
        if tok.kind in ("INT", "STRING"):
            return A.ELit(tok.value, tok.loc)
        if tok.kind == "IDENT" and tok.value not in KEYWORDS:
            if tok.value in BUILTIN_WORDS:
                return A.EBuiltin(BUILTIN_WORDS[tok.value], tok.loc)
            return A.EVar(tok.value, tok.loc)
        if tok.is_sym("!"):
            return A.EBuiltin("forall", tok.loc)
        if tok.is_sym("?"):
            return A.EBuiltin("exists", tok.loc)
        if tok.is_sym("("):
            items = [self.expr()]
            while ts.accept(","):
                items.append(self.expr())
            ts.expect(")")
            return items[0] if len(items) == 1 else A.ETuple(tuple(items), tok.loc)
        if tok.is_sym("{"):
            return self.set_expr(tok)
        raise FmsSyntaxError(f"unexpected {tok.describe()}", tok.loc)

    def set_expr(self, open_tok):
        ts = self.ts
        if ts.accept("}"):
            return A.ESet((), open_tok.loc)
        first = self.expr()
        if ts.accept(".."):
            hi = self.expr()
            ts.expect("}")
            return A.ERange(first, hi, open_tok.loc)
        if ts.accept("||"):
            quals = []
            if not ts.peek.is_sym("}"):
                quals.append(self.qualifier())
                while ts.accept(","):
                    quals.append(self.qualifier())
            ts.expect("}")
            return A.EComp(first, tuple(quals), open_tok.loc)
        items = [first]
        while ts.accept(","):
            items.append(self.expr())
        ts.expect("}")
        return A.ESet(tuple(items), open_tok.loc)

    def qualifier(self):
        tok = self.ts.peek

        def generator():
            pat = self.pattern()
            self.ts.expect("<-")
            return pat

        pat = self.attempt(generator)
        if pat is not None:
            return A.Generator(pat, self.expr(), tok.loc)
        return A.Guard(self.expr(), tok.loc)

