"""Hindley-Milner inference (algorithm W) over Core."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from fms.core import ast as C
from fms.core.ops import free_vars, has_choice
from fms.errors import FmsTypeError
from fms.graph import tarjan_scc

log = logging.getLogger(__name__)


# -- types --------------------------------------------------------------------


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TCon:
    name: str  # Int | String | Bool | Data


@dataclass(frozen=True)
class TSet:
    elem: "TypeTerm"


@dataclass(frozen=True)
class TFun:
    arg: "TypeTerm"
    result: "TypeTerm"


@dataclass(frozen=True)
class TTuple:
    components: tuple


TypeTerm = object

TInt = TCon("Int")
TString = TCon("String")
TBool = TCon("Bool")
TData = TCon("Data")


@dataclass(frozen=True)
class TypeScheme:
    quantified: frozenset
    body: TypeTerm

    def __str__(self):
        return show_scheme(self)


def fun(*ts):
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = TFun(t, out)
    return out


def type_vars(t) -> list[str]:
    """Type variables in order of first appearance."""
    out: list[str] = []

    def go(t):
        if isinstance(t, TVar):
            if t.name not in out:
                out.append(t.name)
        elif isinstance(t, TSet):
            go(t.elem)
        elif isinstance(t, TFun):
            go(t.arg)
            go(t.result)
        elif isinstance(t, TTuple):
            for c in t.components:
                go(c)

    go(t)
    return out


def show_type(t, names: Optional[dict] = None, prec: int = 0) -> str:
    names = names or {}
    if isinstance(t, TVar):
        return names.get(t.name, t.name)
    if isinstance(t, TCon):
        return t.name
    if isinstance(t, TSet):
        s = f"Set {show_type(t.elem, names, 2)}"
        return f"({s})" if prec >= 2 else s
    if isinstance(t, TTuple):
        return "(" + ", ".join(show_type(c, names) for c in t.components) + ")"
    if isinstance(t, TFun):
        s = f"{show_type(t.arg, names, 1)} -> {show_type(t.result, names, 0)}"
        return f"({s})" if prec >= 1 else s
    raise TypeError(t)


def _letters():
    i = 0
    while True:
        q, r = divmod(i, 26)
        yield chr(ord("a") + r) + (str(q) if q else "")
        i += 1


def show_scheme(s: TypeScheme) -> str:
    order = [v for v in type_vars(s.body) if v in s.quantified]
    names = dict(zip(order, _letters()))
    body = show_type(s.body, names)
    if not order:
        return body
    return "∀" + " ".join(names[v] for v in order) + ". " + body


def _alpha_key(s: TypeScheme):
    """Canonical form used to compare schemes up to renaming of bound variables."""
    order = [v for v in type_vars(s.body) if v in s.quantified]
    return show_type(s.body, {v: f"'{i}" for i, v in enumerate(order)})


def schemes_equivalent(a: TypeScheme, b: TypeScheme) -> bool:
    return _alpha_key(a) == _alpha_key(b)


# -- builtin table ------------------------------------------------------------


def _builtin_scheme(name: str) -> TypeScheme:
    a, b = TVar("a"), TVar("b")
    table = {
        "add": fun(TInt, TInt, TInt),
        "sub": fun(TInt, TInt, TInt),
        "mul": fun(TInt, TInt, TInt),
        "div": fun(TInt, TInt, TInt),
        "mod": fun(TInt, TInt, TInt),
        "neg": fun(TInt, TInt),
        "eq": fun(a, a, TBool),
        "neq": fun(a, a, TBool),
        "lt": fun(TInt, TInt, TBool),
        "le": fun(TInt, TInt, TBool),
        "gt": fun(TInt, TInt, TBool),
        "ge": fun(TInt, TInt, TBool),
        "and": fun(TBool, TBool, TBool),
        "or": fun(TBool, TBool, TBool),
        "implies": fun(TBool, TBool, TBool),
        "equiv": fun(TBool, TBool, TBool),
        "not": fun(TBool, TBool),
        "forall": fun(TSet(a), fun(a, TBool), TBool),
        "exists": fun(TSet(a), fun(a, TBool), TBool),
        "bind": fun(TSet(a), fun(a, TSet(b)), TSet(b)),
        "union": fun(TSet(a), TSet(a), TSet(a)),
        "member": fun(a, TSet(a), TBool),
        "card": fun(TSet(a), TInt),
        "range": fun(TInt, TInt, TSet(TInt)),
        "ite": fun(TBool, a, a, a),
        "chooseElement": fun(TSet(a), a),
        "chooseSubset": fun(TSet(a), TSet(a)),
    }
    if name in table:
        t = table[name]
    else:
        n = C.choose_function_arity(name)
        if n is None or n < 1:
            raise KeyError(name)
        args = [TVar(f"a{i}") for i in range(n)]
        t = fun(TSet(b), *args, b)
    return TypeScheme(frozenset(type_vars(t)), t)


BUILTIN_SCHEMES = {name: _builtin_scheme(name) for name in C.BUILTINS}


def builtin_scheme(name: str) -> TypeScheme:
    if name in BUILTIN_SCHEMES:
        return BUILTIN_SCHEMES[name]
    return _builtin_scheme(name)


# -- inference ----------------------------------------------------------------


class Inferencer:
    def __init__(self):
        self.subst: dict[str, TypeTerm] = {}
        self.counter = 0
        self.ctor_args: dict[str, list] = {}
        self.top_schemes: dict[str, TypeScheme] = {}

    def fresh(self) -> TVar:
        self.counter += 1
        return TVar(f"t{self.counter}")

    def resolve(self, t):
        while isinstance(t, TVar) and t.name in self.subst:
            t = self.subst[t.name]
        return t

    def apply(self, t):
        t = self.resolve(t)
        if isinstance(t, TSet):
            return TSet(self.apply(t.elem))
        if isinstance(t, TFun):
            return TFun(self.apply(t.arg), self.apply(t.result))
        if isinstance(t, TTuple):
            return TTuple(tuple(self.apply(c) for c in t.components))
        return t

    def occurs(self, name, t) -> bool:
        t = self.resolve(t)
        if isinstance(t, TVar):
            return t.name == name
        if isinstance(t, TSet):
            return self.occurs(name, t.elem)
        if isinstance(t, TFun):
            return self.occurs(name, t.arg) or self.occurs(name, t.result)
        if isinstance(t, TTuple):
            return any(self.occurs(name, c) for c in t.components)
        return False

    def unify(self, a, b, loc=None):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self.occurs(a.name, b):
                raise FmsTypeError(
                    f"infinite type: {show_type(self.apply(a))} occurs in {show_type(self.apply(b))}", loc
                )
            self.subst[a.name] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, loc)
            return
        if isinstance(a, TSet) and isinstance(b, TSet):
            self.unify(a.elem, b.elem, loc)
            return
        if isinstance(a, TFun) and isinstance(b, TFun):
            self.unify(a.arg, b.arg, loc)
            self.unify(a.result, b.result, loc)
            return
        if isinstance(a, TTuple) and isinstance(b, TTuple) and len(a.components) == len(b.components):
            for x, y in zip(a.components, b.components):
                self.unify(x, y, loc)
            return
        raise FmsTypeError(f"cannot unify {show_type(self.apply(a))} with {show_type(self.apply(b))}", loc)

    def instantiate(self, s: TypeScheme):
        mapping = {v: self.fresh() for v in s.quantified}

        def go(t):
            if isinstance(t, TVar):
                return mapping.get(t.name, t)
            if isinstance(t, TSet):
                return TSet(go(t.elem))
            if isinstance(t, TFun):
                return TFun(go(t.arg), go(t.result))
            if isinstance(t, TTuple):
                return TTuple(tuple(go(c) for c in t.components))
            return t

        return go(s.body)

    def env_ftv(self, env) -> set:
        out = set()
        for s in env.values():
            body = self.apply(s.body)
            out.update(v for v in type_vars(body) if v not in s.quantified)
        return out

    def generalize(self, env, t) -> TypeScheme:
        t = self.apply(t)
        fixed = self.env_ftv(env) | self.ctor_ftv()
        return TypeScheme(frozenset(v for v in type_vars(t) if v not in fixed), t)

    def ctor_ftv(self) -> set:
        out = set()
        for args in self.ctor_args.values():
            for a in args:
                out.update(type_vars(self.apply(a)))
        return out

    # -- constructors -----------------------------------------------------------

    def herb_type(self, tag: str, n: int, loc):
        """(argument types, result type) for a constructor tag used with n arguments."""
        if C.tuple_arity(tag) == n:
            args = [self.fresh() for _ in range(n)]
            return args, TTuple(tuple(args))
        if tag in C.BOOL_TAGS:
            if n:
                raise FmsTypeError(f"{tag} takes no arguments", loc)
            return [], TBool
        if tag not in self.ctor_args:
            self.ctor_args[tag] = [self.fresh() for _ in range(n)]
        args = self.ctor_args[tag]
        if len(args) != n:
            raise FmsTypeError(f"constructor {tag!r} used with {n} arguments, elsewhere with {len(args)}", loc)
        return args, TData

    def pattern(self, p, env: dict, loc) -> TypeTerm:
        if isinstance(p, C.Wildcard):
            return self.fresh()
        if isinstance(p, C.VarMatch):
            t = self.fresh()
            env[p.name] = TypeScheme(frozenset(), t)
            return t
        if isinstance(p, C.LitMatch):
            return TString if isinstance(p.value, str) else TInt
        args, result = self.herb_type(p.tag, len(p.subpatterns), p.loc or loc)
        for sub, t in zip(p.subpatterns, args):
            self.unify(self.pattern(sub, env, loc), t, p.loc or loc)
        return result

    # -- expressions ------------------------------------------------------------

    def infer(self, e, env: dict, loc=None, top: bool = False) -> TypeTerm:
        loc = getattr(e, "loc", None) or loc
        if isinstance(e, C.Var):
            if e.name not in env:
                raise FmsTypeError(f"unbound identifier {e.name!r}", loc)
            return self.instantiate(env[e.name])
        if isinstance(e, C.Inject):
            return TString if isinstance(e.literal, str) else TInt
        if isinstance(e, C.Builtin):
            try:
                return self.instantiate(builtin_scheme(e.symbol))
            except KeyError:
                raise FmsTypeError(f"unknown builtin {e.symbol!r}", loc) from None
        if isinstance(e, C.App):
            ft = self.infer(e.fun, env, loc)
            at = self.infer(e.arg, env, loc)
            rt = self.fresh()
            self.unify(ft, TFun(at, rt), getattr(e.arg, "loc", None) or loc)
            return rt
        if isinstance(e, C.Lam):
            pt = self.fresh()
            inner = dict(env)
            inner[e.param] = TypeScheme(frozenset(), pt)
            return TFun(pt, self.infer(e.body, inner, loc))
        if isinstance(e, C.Let):
            inner = self.let_bindings(e, env, loc, top)
            return self.infer(e.body, inner, loc, top)
        if isinstance(e, C.Case):
            st = self.infer(e.scrutinee, env, loc)
            rt = self.fresh()
            for pat, body in e.arms:
                inner = dict(env)
                self.unify(self.pattern(pat, inner, loc), st, getattr(pat, "loc", None) or loc)
                self.unify(self.infer(body, inner, loc), rt, getattr(body, "loc", None) or loc)
            return rt
        if isinstance(e, C.SetLit):
            et = self.fresh()
            for x in e.elements:
                self.unify(self.infer(x, env, loc), et, getattr(x, "loc", None) or loc)
            return TSet(et)
        if isinstance(e, C.Herb):
            args, result = self.herb_type(e.tag, len(e.args), loc)
            for x, t in zip(e.args, args):
                self.unify(self.infer(x, env, loc), t, getattr(x, "loc", None) or loc)
            return result
        if isinstance(e, C.OutputExp):
            return self.infer(e.inner, env, loc)
        raise FmsTypeError(f"not a Core expression: {e!r}", loc)

    def let_bindings(self, e: C.Let, env: dict, loc, top: bool) -> dict:
        names = [b.name for b in e.bindings]
        values = {b.name: b.value for b in e.bindings}
        deps = {n: [m for m in names if m in free_vars(values[n])] for n in names}
        inner = dict(env)
        for group in tarjan_scc(names, deps):
            group = [n for n in names if n in group]  # source order within a group
            mono = {n: self.fresh() for n in group}
            scoped = dict(inner)
            for n in group:
                scoped[n] = TypeScheme(frozenset(), mono[n])
            for n in group:
                v = values[n]
                self.unify(self.infer(v, scoped, loc), mono[n], getattr(v, "loc", None) or loc)
            # Searched symbols stand for one unknown value, so they stay monomorphic.
            generalize = not any(has_choice(values[n]) for n in group)
            for n in group:
                if generalize:
                    inner[n] = self.generalize(inner, mono[n])
                else:
                    inner[n] = TypeScheme(frozenset(), mono[n])
                if top:
                    self.top_schemes[n] = inner[n]
        return inner

    def default_constructors(self):
        for args in self.ctor_args.values():
            for a in args:
                for v in type_vars(self.apply(a)):
                    self.subst[v] = TData


def infer(e, env: Optional[dict] = None) -> TypeScheme:
    """Principal type scheme of ``e`` (closed unless ``env`` supplies schemes)."""
    return infer_with_bindings(e, env)[0]


def infer_with_bindings(e, env: Optional[dict] = None) -> tuple[TypeScheme, dict[str, TypeScheme]]:
    """The scheme of ``e`` plus the schemes of its top-level let bindings."""
    inf = Inferencer()
    t = inf.infer(e, dict(env or {}), top=True)
    inf.default_constructors()
    scheme = inf.generalize({}, t)
    tops = {}
    for name, s in inf.top_schemes.items():
        body = inf.apply(s.body)
        tops[name] = TypeScheme(frozenset(v for v in type_vars(body) if v in s.quantified), body)
    return scheme, tops


def check_preservation(before, after) -> bool:
    """True iff ``after`` still type-checks; inference errors are logged."""
    try:
        infer(after)
    except FmsTypeError as err:
        log.error("type preservation failed: %s", err)
        return False
    return True
