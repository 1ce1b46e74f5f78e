"""The four rewriting passes over Core.

Each pass is a pure function ``pass(e, stats=None) -> e``; when ``stats`` is
given its ``rewrites`` counter is bumped once per rewrite performed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fms.core import ast as C
from fms.core.names import fresh_name
from fms.core.ops import free_vars, has_eager_output, is_pinned, map_children, occurrences, substitute
from fms.errors import EvalError
from fms.graph import reachable, tarjan_scc


@dataclass
class Stats:
    rewrites: int = 0

    def bump(self, n: int = 1):
        self.rewrites += n


@dataclass
class BindingGraph:
    nodes: list
    edges: dict = field(default_factory=dict)

    @classmethod
    def of(cls, let: C.Let) -> "BindingGraph":
        names = [b.name for b in let.bindings]
        edges = {}
        for b in let.bindings:
            fv = free_vars(b.value)
            edges[b.name] = [n for n in names if n in fv]
        return cls(names, edges)


def _stats(stats):
    return stats if stats is not None else Stats()


# -- stratification -----------------------------------------------------------


def stratify(e, stats=None):
    """Split every let into nested single-component lets; drop unreachable bindings."""
    stats = _stats(stats)

    def go(e):
        e = map_children(e, go)
        if not isinstance(e, C.Let):
            return e
        graph = BindingGraph.of(e)
        values = {b.name: b for b in e.bindings}
        roots = [n for n in graph.nodes if n in free_vars(e.body)]
        # Bindings that record output must still run even when nothing uses them.
        roots += [b.name for b in e.bindings if has_eager_output(b.value)]
        live = reachable(roots, graph.edges)
        comps = [
            [n for n in graph.nodes if n in comp]
            for comp in tarjan_scc([n for n in graph.nodes if n in live], graph.edges)
        ]
        dropped = len(graph.nodes) - len(live)
        if dropped:
            stats.bump(dropped)
        if len(comps) == 1 and not dropped:
            return e
        if len(comps) > 1:
            stats.bump()
        body = e.body
        for comp in reversed(comps):
            body = C.Let(tuple(values[n] for n in comp), body, e.loc)
        return body

    return go(e)


# -- inlining -----------------------------------------------------------------

INLINE_SIZE_LIMIT = 25


def _is_const(v) -> bool:
    return isinstance(v, C.Inject)


def inline(e, stats=None):
    stats = _stats(stats)

    def go(e):
        e = map_children(e, go)
        if not isinstance(e, C.Let):
            return e
        bindings = list(e.bindings)
        body = e.body
        changed = True
        while changed:
            changed = False
            for i, b in enumerate(bindings):
                if b.pragma == "noinline":
                    continue
                group = {x.name for x in bindings}
                if group & free_vars(b.value):
                    continue  # recursive binding
                others = [x for j, x in enumerate(bindings) if j != i]
                occ = []
                for x in others:
                    occ += occurrences(x.value, b.name)
                occ += occurrences(body, b.name)
                value = b.value
                if isinstance(value, C.OutputExp) and _is_const(value.inner):
                    # Keep the output record, but let uses see the literal.
                    if occ:
                        bindings, body = _replace(bindings, body, b.name, value.inner, keep=i)
                        stats.bump()
                        changed = True
                        break
                    continue
                if not _should_inline(b, value, occ):
                    continue
                bindings, body = _replace(bindings, body, b.name, value, keep=None, drop=i)
                stats.bump()
                changed = True
                break
        if not bindings:
            return body
        return C.Let(tuple(bindings), body, e.loc)

    return go(e)


def _should_inline(b, value, occ) -> bool:
    if is_pinned(value):
        # Output and choice must happen exactly once, at a strict position.
        return len(occ) == 1 and occ[0] == (False, True)
    if _is_const(value) or isinstance(value, C.Var):
        return True
    if b.pragma == "inline":
        return True
    if len(occ) == 0:
        return True
    if len(occ) == 1:
        under_lam, _ = occ[0]
        return not (under_lam and C.size(value) > INLINE_SIZE_LIMIT)
    return False


def _replace(bindings, body, name, value, keep=None, drop=None):
    out = []
    for j, x in enumerate(bindings):
        if j == drop:
            continue
        if j == keep:
            out.append(x)
            continue
        out.append(C.Binding(x.name, substitute(x.value, name, value), x.pragma))
    return out, substitute(body, name, value)


# -- boolean simplification ---------------------------------------------------


def _not(x, loc=None):
    return C.prim("not", x, loc=loc)


def _is_bool(e, value: bool) -> bool:
    return isinstance(e, C.Herb) and not e.args and e.tag == (C.TRUE_TAG if value else C.FALSE_TAG)


def simplify_bool(e, stats=None):
    stats = _stats(stats)

    def go(e):
        e = map_children(e, go)
        while True:
            new = _bool_step(e)
            if new is None:
                return e
            stats.bump()
            e = go(new)

    return go(e)


def _bool_step(e):
    call = C.builtin_call(e)
    if call is None:
        return None
    op, args = call
    loc = e.loc
    if op == "not":
        (x,) = args
        if _is_bool(x, True):
            return C.FALSE
        if _is_bool(x, False):
            return C.TRUE
        inner = C.builtin_call(x)
        if inner is None:
            return None
        iop, iargs = inner
        if iop == "not":
            return iargs[0]
        if iop == "and":
            return C.prim("or", _not(iargs[0], loc), _not(iargs[1], loc), loc=loc)
        if iop == "or":
            return C.prim("and", _not(iargs[0], loc), _not(iargs[1], loc), loc=loc)
        if iop == "implies":
            return C.prim("and", iargs[0], _not(iargs[1], loc), loc=loc)
        if iop in C.NEGATED_COMPARISON:
            return C.prim(C.NEGATED_COMPARISON[iop], *iargs, loc=loc)
        if iop in C.QUANTIFIERS:
            dual = "exists" if iop == "forall" else "forall"
            s, p = iargs
            if isinstance(p, C.Lam):
                body = C.Lam(p.param, _not(p.body, loc), p.loc)
            else:
                v = fresh_name("x", free_vars(p))
                body = C.Lam(v, _not(C.App(p, C.Var(v, loc), loc), loc), loc)
            return C.prim(dual, s, body, loc=loc)
        if iop == "ite":
            c, t, f = iargs
            return C.prim("ite", c, _not(t, loc), _not(f, loc), loc=loc)
        return None
    if op == "and":
        a, b = args
        if _is_bool(b, True):
            return a
        if _is_bool(a, True):
            return b
        if _is_bool(a, False):
            return C.FALSE if not is_pinned(b) else None
        if _is_bool(b, False) and not is_pinned(a):
            return C.FALSE
        return None
    if op == "or":
        a, b = args
        if _is_bool(b, False):
            return a
        if _is_bool(a, False):
            return b
        if _is_bool(a, True):
            return C.TRUE if not is_pinned(b) else None
        if _is_bool(b, True) and not is_pinned(a):
            return C.TRUE
        return None
    if op == "implies":
        a, b = args
        if _is_bool(a, False) and not is_pinned(b):
            return C.TRUE
        if _is_bool(a, True):
            return b
        if _is_bool(b, True) and not is_pinned(a):
            return C.TRUE
        if _is_bool(b, False):
            return _not(a, loc)
        return None
    return None


# -- constant folding and beta reduction --------------------------------------

_FOLDABLE = (C.ARITHMETIC | C.COMPARISONS | C.CONNECTIVES) | {"ite"}


def fold_and_beta(e, stats=None):
    stats = _stats(stats)

    def go(e):
        e = map_children(e, go)
        while True:
            new = _fold_step(e)
            if new is None:
                return e
            stats.bump()
            e = go(new)

    return go(e)


def _literal_value(e):
    from fms.evaluator import Env, Evaluator

    return Evaluator().eval(e, Env())


def _fold_step(e):
    if isinstance(e, C.App):
        if isinstance(e.fun, C.Lam):
            return _beta(e.fun, e.arg)
        call = C.builtin_call(e)
        if call is not None:
            op, args = call
            if op == "ite" and C.is_literal(args[0]) and isinstance(args[0], C.Herb) and args[0].tag in C.BOOL_TAGS:
                return args[1] if args[0].tag == C.TRUE_TAG else args[2]
            if op in _FOLDABLE and op != "ite" and all(C.is_literal(a) for a in args):
                from fms.evaluator import value_to_core

                try:
                    return value_to_core(_literal_value(e))
                except EvalError:
                    return None  # e.g. division by zero stays for runtime
        return None
    if isinstance(e, C.Case):
        return _fold_case(e)
    return None


def _beta(lam: C.Lam, arg):
    occ = occurrences(lam.body, lam.param)
    if is_pinned(arg):
        if len(occ) == 1 and occ[0] == (False, True):
            return substitute(lam.body, lam.param, arg)
        return None
    if C.is_literal(arg) or isinstance(arg, C.Var) or len(occ) <= 1:
        return substitute(lam.body, lam.param, arg)
    return None


class _Unknown(Exception):
    pass


def _static_match(p, e) -> dict | None:
    """Bindings if ``e`` surely matches ``p``, None if it surely does not.

    Raises _Unknown when the outcome depends on runtime values.
    """
    if isinstance(p, C.Wildcard):
        return {}
    if isinstance(p, C.VarMatch):
        return {p.name: e}
    if isinstance(p, C.LitMatch):
        if isinstance(e, C.Inject):
            return {} if type(e.literal) is type(p.value) and e.literal == p.value else None
        if isinstance(e, C.Herb):
            return None
        raise _Unknown
    if isinstance(e, C.Inject):
        return None
    if isinstance(e, C.Herb):
        if e.tag != p.tag or len(e.args) != len(p.subpatterns):
            return None
        out = {}
        for sub, a in zip(p.subpatterns, e.args):
            m = _static_match(sub, a)
            if m is None:
                return None
            out.update(m)
        return out
    raise _Unknown


def _discarded(p, e) -> list:
    """Subterms of ``e`` that land on wildcards of ``p``."""
    if isinstance(p, C.Wildcard):
        return [e]
    if isinstance(p, C.CtorMatch) and isinstance(e, C.Herb):
        return [x for sub, a in zip(p.subpatterns, e.args) for x in _discarded(sub, a)]
    return []


def _fold_case(e: C.Case):
    scrut = e.scrutinee
    if not isinstance(scrut, (C.Inject, C.Herb)):
        return None
    for pat, body in e.arms:
        try:
            binds = _static_match(pat, scrut)
        except _Unknown:
            return None
        if binds is None:
            continue
        if any(is_pinned(x) for x in _discarded(pat, scrut)):
            return None
        names = set(binds)
        if any(names & free_vars(v) for v in binds.values()):
            return None  # a recursive let would capture
        if not binds:
            return body
        return C.Let(tuple(C.Binding(n, v) for n, v in binds.items()), body, e.loc)
    return None
