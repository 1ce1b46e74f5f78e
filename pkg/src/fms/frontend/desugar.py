"""Desugaring of the Full language into one closed Core expression."""

from __future__ import annotations

from typing import Optional

from fms.core import ast as C
from fms.core.names import GEN_MARK, NameSupply
from fms.core.ops import free_vars
from fms.errors import DesugarError, ScopeError
from fms.frontend import ast as A
from fms.frontend.parser import parse

BOOL_SET = C.SetLit((C.TRUE, C.FALSE))


class Desugarer:
    """Holds the constructor table and fresh-name supply for one compilation.

    ``track_outputs`` wraps each top-level user symbol in an OutputExp; it may
    be False (no tracking) or a collection of the names to track.
    """

    def __init__(self, supply: Optional[NameSupply] = None, track_outputs=True):
        self.supply = supply or NameSupply(GEN_MARK)
        self.constructors: dict[str, int] = {}
        self.track_outputs = track_outputs

    # -- statements -----------------------------------------------------------

    def desugar(self, ast: A.FullAst) -> C.CoreExpr:
        for st in ast.statements:
            if isinstance(st, A.Declaration) and isinstance(st.kind, A.Constructor):
                self.register_constructor(st)

        pragmas: dict[str, str] = {}
        for st in ast.statements:
            if isinstance(st, A.Directive):
                pragmas[st.name] = st.kind

        bindings: list[C.Binding] = []
        seen: dict[str, object] = {}

        def claim(name, loc):
            if name in seen:
                raise DesugarError(f"{name!r} is defined more than once", loc)
            if name in self.constructors:
                raise DesugarError(f"{name!r} is already declared as a constructor", loc)
            seen[name] = loc

        user_names = []
        defs = [s for s in ast.statements if isinstance(s, A.Definition)]
        groups = self.group_definitions(defs)

        # Walk statements in source order so bindings keep that order.
        emitted_groups = set()
        for st in ast.statements:
            if isinstance(st, A.Declaration) and not isinstance(st.kind, A.Constructor):
                claim(st.name, st.loc)
                name, value = self.desugar_decl(st)
                bindings.append(C.Binding(name, value))
                user_names.append(name)
            elif isinstance(st, A.Definition):
                if isinstance(st.head, A.FunHead):
                    key = st.head.name
                    if key in emitted_groups:
                        continue
                    emitted_groups.add(key)
                    claim(key, st.loc)
                    bindings.append(C.Binding(key, self.function(groups[key], frozenset())))
                    user_names.append(key)
                else:
                    pat_binds = self.pattern_definition(st, frozenset())
                    for b in pat_binds[1:]:
                        claim(b.name, st.loc)
                        user_names.append(b.name)
                    bindings.extend(pat_binds)

        for name, kind in pragmas.items():
            if name not in seen:
                raise ScopeError(name, next(s.loc for s in ast.statements if isinstance(s, A.Directive) and s.name == name))

        wrapped = []
        for b in bindings:
            value = b.value
            if b.name in user_names and self.tracks(b.name):
                value = C.OutputExp(b.name, value, getattr(value, "loc", None))
            wrapped.append(C.Binding(b.name, value, pragmas.get(b.name)))

        constraints = [self.expr(c.expr, frozenset()) for c in ast.statements if isinstance(c, A.Constraint)]
        body = constraints[0] if constraints else C.TRUE
        for c in constraints[1:]:
            body = C.prim("and", body, c, loc=c.loc)
        result = C.Let(tuple(wrapped), body) if wrapped else body
        self.check_scope(result)
        return result

    def tracks(self, name: str) -> bool:
        if self.track_outputs is True:
            return True
        if not self.track_outputs:
            return False
        return name in self.track_outputs

    def register_constructor(self, d: A.Declaration):
        if d.name in self.constructors or d.name in C.BOOL_TAGS or C.tuple_arity(d.name):
            raise DesugarError(f"constructor {d.name!r} is declared more than once", d.loc)
        self.constructors[d.name] = d.arity

    def desugar_decl(self, d: A.Declaration) -> Optional[tuple[str, C.CoreExpr]]:
        """Binding for a declaration; constructors only extend the table (None)."""
        kind, loc = d.kind, d.loc
        if isinstance(kind, A.Constructor):
            self.register_constructor(d)
            return None
        if isinstance(kind, A.Proposition) or (isinstance(kind, A.Predicate) and d.arity == 0):
            return d.name, C.prim("chooseElement", BOOL_SET, loc=loc)
        if isinstance(kind, A.Predicate):
            return d.name, C.prim(f"chooseFunction_{d.arity}", BOOL_SET, loc=loc)
        if isinstance(kind, A.ElementOf):
            self.expect_arity(d, 0)
            return d.name, C.prim("chooseElement", self.expr(kind.set, frozenset()), loc=loc)
        if isinstance(kind, A.SubsetOf):
            self.expect_arity(d, 0)
            return d.name, C.prim("chooseSubset", self.expr(kind.set, frozenset()), loc=loc)
        if isinstance(kind, A.FunctionTo):
            if d.arity < 1:
                raise DesugarError(f"function {d.name!r} needs an arity of at least 1", loc)
            return d.name, C.prim(f"chooseFunction_{d.arity}", self.expr(kind.codomain, frozenset()), loc=loc)
        raise DesugarError(f"unknown declaration kind {kind!r}", loc)

    @staticmethod
    def expect_arity(d, n):
        if d.explicit_arity and d.arity != n:
            raise DesugarError(f"{d.name!r} is declared with arity {d.arity} but must have arity {n}", d.loc)

    def group_definitions(self, defs) -> dict[str, list[A.Definition]]:
        groups: dict[str, list[A.Definition]] = {}
        for d in defs:
            if isinstance(d.head, A.FunHead):
                groups.setdefault(d.head.name, []).append(d)
        for name, clauses in groups.items():
            arities = {len(c.head.params) for c in clauses}
            if len(arities) > 1:
                raise DesugarError(f"clauses of {name!r} have different numbers of arguments", clauses[1].loc)
            if len(clauses) > 1 and arities == {0}:
                raise DesugarError(f"{name!r} is defined more than once", clauses[1].loc)
        return groups

    def function(self, clauses: list[A.Definition], scope: frozenset) -> C.CoreExpr:
        """One binding value from the clauses of a (possibly nullary) function."""
        first = clauses[0]
        n = len(first.head.params)
        loc = first.loc
        if n == 0:
            return self.expr(first.body, scope)
        if len(clauses) == 1 and all(isinstance(p, A.PVar) and p.name not in self.constructors for p in first.head.params):
            return self.lambdas([p.name for p in first.head.params], first.body, scope, loc)
        params = [self.supply.fresh("y") for _ in range(n)]
        inner = scope | set(params)
        arms = []
        for cl in clauses:
            pats = [self.pattern(p) for p in cl.head.params]
            pat = pats[0] if n == 1 else C.CtorMatch(C.tuple_tag(n), tuple(pats), cl.loc)
            self.check_linear(pat, cl.loc)
            arms.append((pat, self.expr(cl.body, inner | set(C.pattern_vars(pat)))))
        scrut = C.Var(params[0], loc) if n == 1 else C.tup(*(C.Var(p, loc) for p in params), loc=loc)
        body = C.Case(scrut, tuple(arms), loc)
        for p in reversed(params):
            body = C.Lam(p, body, loc)
        return body

    def lambdas(self, names, body, scope, loc) -> C.CoreExpr:
        out = self.expr(body, scope | set(names))
        for name in reversed(names):
            out = C.Lam(name, out, loc)
        return out

    def pattern_definition(self, d: A.Definition, scope: frozenset) -> list[C.Binding]:
        """``(a, b) := e`` becomes a temporary plus one projecting case per name."""
        pat = self.pattern(d.head.pattern)
        self.check_linear(pat, d.loc)
        names = C.pattern_vars(pat)
        if not names:
            raise DesugarError("a destructuring definition must bind at least one name", d.loc)
        temp = self.supply.fresh("temp")
        out = [C.Binding(temp, self.expr(d.body, scope))]
        for name in names:
            projected = _keep_only(pat, name)
            out.append(C.Binding(name, C.Case(C.Var(temp, d.loc), ((projected, C.Var(name, d.loc)),), d.loc)))
        return out

    @staticmethod
    def check_linear(pat, loc):
        names = C.pattern_vars(pat)
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise DesugarError(f"variable {sorted(dup)[0]!r} is bound twice in one pattern", loc)

    # -- patterns -------------------------------------------------------------

    def pattern(self, p: A.FullPattern) -> C.Pattern:
        if isinstance(p, A.PWild):
            return C.Wildcard(p.loc)
        if isinstance(p, A.PLit):
            return C.LitMatch(p.value, p.loc)
        if isinstance(p, A.PTuple):
            return C.CtorMatch(C.tuple_tag(len(p.items)), tuple(self.pattern(q) for q in p.items), p.loc)
        if isinstance(p, A.PVar):
            if p.name in C.BOOL_TAGS or self.constructors.get(p.name) == 0:
                return C.CtorMatch(p.name, (), p.loc)
            if p.name in self.constructors:
                raise DesugarError(
                    f"constructor {p.name!r} expects {self.constructors[p.name]} arguments, got 0", p.loc
                )
            return C.VarMatch(p.name, p.loc)
        if isinstance(p, A.PCtor):
            if p.name in C.BOOL_TAGS and not p.args:
                return C.CtorMatch(p.name, (), p.loc)
            if p.name not in self.constructors:
                raise DesugarError(f"{p.name!r} is not a declared constructor", p.loc)
            if self.constructors[p.name] != len(p.args):
                raise DesugarError(
                    f"constructor {p.name!r} expects {self.constructors[p.name]} arguments, got {len(p.args)}", p.loc
                )
            return C.CtorMatch(p.name, tuple(self.pattern(q) for q in p.args), p.loc)
        raise DesugarError(f"not a pattern: {p!r}")

    # -- expressions ----------------------------------------------------------

    def expr(self, e: A.FullExpr, scope: frozenset) -> C.CoreExpr:
        loc = e.loc
        if isinstance(e, A.ELit):
            return C.Inject(e.value, loc)
        if isinstance(e, A.EVar):
            if e.name not in scope and e.name in self.constructors:
                return self.constructor(e.name, [], loc)
            return C.Var(e.name, loc)
        if isinstance(e, A.EBuiltin):
            if e.name in C.BOOL_TAGS:
                return C.Herb(e.name, (), loc)
            return C.Builtin(e.name, loc)
        if isinstance(e, A.EApp):
            args = [self.expr(a, scope) for a in e.args]
            if isinstance(e.fun, A.EVar) and e.fun.name not in scope and e.fun.name in self.constructors:
                return self.constructor(e.fun.name, args, loc)
            return C.app(self.expr(e.fun, scope), *args, loc=loc)
        if isinstance(e, A.EBinOp):
            return C.prim(e.op, self.expr(e.left, scope), self.expr(e.right, scope), loc=loc)
        if isinstance(e, A.ENot):
            return C.prim("not", self.expr(e.operand, scope), loc=loc)
        if isinstance(e, A.ENeg):
            return C.prim("sub", C.Inject(0, loc), self.expr(e.operand, scope), loc=loc)
        if isinstance(e, A.EIf):
            return C.prim("ite", self.expr(e.cond, scope), self.expr(e.then, scope), self.expr(e.orelse, scope), loc=loc)
        if isinstance(e, A.ETuple):
            return C.tup(*(self.expr(x, scope) for x in e.items), loc=loc)
        if isinstance(e, A.ESet):
            return C.SetLit(tuple(self.expr(x, scope) for x in e.elements), loc)
        if isinstance(e, A.ERange):
            return C.prim("range", self.expr(e.lo, scope), self.expr(e.hi, scope), loc=loc)
        if isinstance(e, A.ECase):
            arms = []
            for p, body in e.arms:
                pat = self.pattern(p)
                self.check_linear(pat, p.loc)
                arms.append((pat, self.expr(body, scope | set(C.pattern_vars(pat)))))
            return C.Case(self.expr(e.scrutinee, scope), tuple(arms), loc)
        if isinstance(e, A.ELam):
            return self.lambda_(list(e.params), e.body, scope, loc)
        if isinstance(e, A.ELet):
            return self.let(e, scope)
        if isinstance(e, A.EComp):
            return self.comprehension(e.head, list(e.qualifiers), scope, loc)
        raise DesugarError(f"cannot desugar {e!r}", loc)

    def constructor(self, name: str, args: list, loc) -> C.CoreExpr:
        arity = self.constructors[name]
        if len(args) > arity:
            raise DesugarError(f"constructor {name!r} expects {arity} arguments, got {len(args)}", loc)
        missing = [self.supply.fresh("c") for _ in range(arity - len(args))]
        out = C.Herb(name, tuple(args) + tuple(C.Var(m, loc) for m in missing), loc)
        for m in reversed(missing):
            out = C.Lam(m, out, loc)
        return out

    def lambda_(self, params, body, scope, loc) -> C.CoreExpr:
        if not params:
            return self.expr(body, scope)
        p = params[0]
        pat = self.pattern(p)
        if isinstance(pat, C.VarMatch):
            return C.Lam(pat.name, self.lambda_(params[1:], body, scope | {pat.name}, loc), loc)
        self.check_linear(pat, loc)
        fresh = self.supply.fresh("y")
        inner = self.lambda_(params[1:], body, scope | {fresh} | set(C.pattern_vars(pat)), loc)
        return C.Lam(fresh, C.Case(C.Var(fresh, loc), ((pat, inner),), loc), loc)

    def let(self, e: A.ELet, scope: frozenset) -> C.CoreExpr:
        defs = list(e.definitions)
        groups = self.group_definitions(defs)
        names = set(groups)
        pattern_defs = [d for d in defs if isinstance(d.head, A.PatHead)]
        for d in pattern_defs:
            names |= set(C.pattern_vars(self.pattern(d.head.pattern)))
        inner = scope | names
        bindings, done = [], set()
        for d in defs:
            if isinstance(d.head, A.FunHead):
                if d.head.name in done:
                    continue
                done.add(d.head.name)
                bindings.append(C.Binding(d.head.name, self.function(groups[d.head.name], inner)))
            else:
                bindings.extend(self.pattern_definition(d, inner))
        bound = [b.name for b in bindings]
        if len(set(bound)) != len(bound):
            dup = next(n for n in bound if bound.count(n) > 1)
            raise DesugarError(f"{dup!r} is defined more than once", e.loc)
        return C.Let(tuple(bindings), self.expr(e.body, inner), e.loc)

    def comprehension(self, head, quals, scope, loc) -> C.CoreExpr:
        if not quals:
            return C.SetLit((self.expr(head, scope),), loc)
        q, rest = quals[0], quals[1:]
        if isinstance(q, A.Guard):
            return C.prim(
                "ite", self.expr(q.cond, scope), self.comprehension(head, rest, scope, loc), C.SetLit((), q.loc), loc=q.loc
            )
        pat = self.pattern(q.pattern)
        source = self.expr(q.source, scope)
        if isinstance(pat, C.VarMatch):
            fn = C.Lam(pat.name, self.comprehension(head, rest, scope | {pat.name}, loc), q.loc)
        else:
            self.check_linear(pat, q.loc)
            fresh = self.supply.fresh("y")
            inner = self.comprehension(head, rest, scope | {fresh} | set(C.pattern_vars(pat)), loc)
            arms = [(pat, inner)]
            if _refutable(pat):
                arms.append((C.Wildcard(q.loc), C.SetLit((), q.loc)))
            fn = C.Lam(fresh, C.Case(C.Var(fresh, q.loc), tuple(arms), q.loc), q.loc)
        return C.prim("bind", source, fn, loc=q.loc)

    # -- scope ----------------------------------------------------------------

    def check_scope(self, e: C.CoreExpr):
        free = free_vars(e)
        if not free:
            return
        name, loc = _first_free(e, free)
        raise ScopeError(name, loc)


def _keep_only(p, name):
    """Copy of pattern ``p`` where every variable except ``name`` is a wildcard."""
    if isinstance(p, C.VarMatch):
        return p if p.name == name else C.Wildcard(p.loc)
    if isinstance(p, C.CtorMatch):
        return C.CtorMatch(p.tag, tuple(_keep_only(s, name) for s in p.subpatterns), p.loc)
    return p


def _refutable(p) -> bool:
    if isinstance(p, (C.VarMatch, C.Wildcard)):
        return False
    if isinstance(p, C.CtorMatch) and C.tuple_arity(p.tag):
        return any(_refutable(s) for s in p.subpatterns)
    return True


def _first_free(e, free):
    """Leftmost-innermost free occurrence, for error reporting in source order."""
    best = None
    stack = [(e, frozenset())]
    while stack:
        node, bound = stack.pop()
        if isinstance(node, C.Var) and node.name in free and node.name not in bound:
            key = (node.loc.line, node.loc.col) if node.loc else (10**9, 0)
            if best is None or key < best[0]:
                best = (key, node)
            continue
        if isinstance(node, C.Lam):
            stack.append((node.body, bound | {node.param}))
        elif isinstance(node, C.Let):
            inner = bound | {b.name for b in node.bindings}
            stack.extend((b.value, inner) for b in node.bindings)
            stack.append((node.body, inner))
        elif isinstance(node, C.Case):
            stack.append((node.scrutinee, bound))
            stack.extend((body, bound | set(C.pattern_vars(p))) for p, body in node.arms)
        else:
            stack.extend((c, bound) for c in C.children(node))
    node = best[1]
    return node.name, node.loc


def desugar(ast: A.FullAst, **kwargs) -> C.CoreExpr:
    return Desugarer(**kwargs).desugar(ast)


def desugar_decl(d: A.Declaration, desugarer: Optional[Desugarer] = None):
    return (desugarer or Desugarer()).desugar_decl(d)


def desugar_source(source: str, filename: str = "<input>", **kwargs) -> C.CoreExpr:
    return desugar(parse(source, filename), **kwargs)
