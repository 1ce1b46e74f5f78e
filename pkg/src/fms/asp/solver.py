"""Built-in desk-scale grounder and answer-set enumerator.

Grounds bottom-up over the atoms that could possibly be derived, guesses one
assignment per choice-rule instance, and computes the perfect model of the
remaining normal rules stratum by stratum.  The choice-free residue must be
stratified at the atom level; anything else is left to clingo.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Optional

from fms.asp.result import SAT, UNKNOWN, UNSAT, AnswerSet, SolveResult
from fms.asp.syntax import (
    AspProgram,
    Atom,
    BinOp,
    Choice,
    Comparison,
    Func,
    IntConst,
    Interval,
    Not,
    Rule,
    StrConst,
    Tuple,
    Variable,
    binding_vars,
    check_safety,
    has_arith,
    term_vars,
)
from fms.errors import GroundingBlowup, UnsafeRule, UnstratifiedResidue
from fms.evaluator import c_div, c_mod
from fms.graph import tarjan_scc

log = logging.getLogger(__name__)

DEFAULT_ATOM_CAP = 200_000


# -- ground terms -------------------------------------------------------------


def term_key(t):
    """clingo's total order: integers, constants, strings, then compound terms."""
    if isinstance(t, IntConst):
        return (0, t.value)
    if isinstance(t, Func) and not t.args:
        return (1, t.name)
    if isinstance(t, StrConst):
        return (2, t.value)
    if isinstance(t, Func):
        return (3, len(t.args), t.name, tuple(term_key(a) for a in t.args))
    if isinstance(t, Tuple):
        return (3, len(t.items), "", tuple(term_key(a) for a in t.items))
    raise TypeError(f"not a ground value: {t}")


class _Undefined(Exception):
    """Arithmetic on non-integers or division by zero; the instance is dropped."""


def _arith(op, a, b, int_range):
    if not (isinstance(a, IntConst) and isinstance(b, IntConst)):
        raise _Undefined
    x, y = a.value, b.value
    try:
        if op == "+":
            r = x + y
        elif op == "-":
            r = x - y
        elif op == "*":
            r = x * y
        elif op == "/":
            r = c_div(x, y)
        elif op == "\\":
            r = c_mod(x, y)
        else:
            raise _Undefined
    except ZeroDivisionError:
        raise _Undefined from None
    except Exception as err:  # DivisionByZero from the evaluator helpers
        if type(err).__name__ == "DivisionByZero":
            raise _Undefined from None
        raise
    if int_range is not None and not (int_range[0] <= r <= int_range[1]):
        raise _Undefined
    return IntConst(r)


def evaluate(t, s: dict, int_range=None):
    """Instantiate ``t`` under substitution ``s`` and fold arithmetic."""
    if isinstance(t, Variable):
        return s[t.name]
    if isinstance(t, (IntConst, StrConst)):
        return t
    if isinstance(t, Func):
        if not t.args:
            return t
        return Func(t.name, tuple(evaluate(a, s, int_range) for a in t.args))
    if isinstance(t, Tuple):
        return Tuple(tuple(evaluate(a, s, int_range) for a in t.items))
    if isinstance(t, BinOp):
        return _arith(t.op, evaluate(t.left, s, int_range), evaluate(t.right, s, int_range), int_range)
    raise _Undefined


def match(pat, value, s: dict, int_range=None) -> Optional[dict]:
    """Extend ``s`` so that ``pat`` instantiates to ``value``, or None."""
    if isinstance(pat, Variable):
        bound = s.get(pat.name)
        if bound is None:
            out = dict(s)
            out[pat.name] = value
            return out
        return s if bound == value else None
    if isinstance(pat, Func):
        if not isinstance(value, Func) or value.name != pat.name or len(value.args) != len(pat.args):
            return None
        for p, v in zip(pat.args, value.args):
            s = match(p, v, s, int_range)
            if s is None:
                return None
        return s
    if isinstance(pat, Tuple):
        if not isinstance(value, Tuple) or len(value.items) != len(pat.items):
            return None
        for p, v in zip(pat.items, value.items):
            s = match(p, v, s, int_range)
            if s is None:
                return None
        return s
    if isinstance(pat, BinOp):
        try:
            return s if evaluate(pat, s, int_range) == value else None
        except (_Undefined, KeyError):
            return None
    return s if pat == value else None


def _compare(op, a, b) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    ka, kb = term_key(a), term_key(b)
    return {"<": ka < kb, "<=": ka <= kb, ">": ka > kb, ">=": ka >= kb}[op]


# -- grounding ----------------------------------------------------------------


@dataclass(frozen=True)
class GroundRule:
    head: Optional[Atom]
    pos: tuple
    neg: tuple


@dataclass(frozen=True)
class GroundChoice:
    elements: tuple  # of (Atom, pos, neg)
    bound: Optional[int]
    pos: tuple
    neg: tuple


class _Index:
    def __init__(self):
        self.atoms: set = set()
        self.by_pred: dict = {}

    def add(self, a: Atom) -> bool:
        if a in self.atoms:
            return False
        self.atoms.add(a)
        self.by_pred.setdefault((a.pred, len(a.args)), []).append(a)
        return True

    def candidates(self, pred, arity):
        return self.by_pred.get((pred, arity), ())


def _bound(t, s) -> bool:
    return term_vars(t) <= s.keys()


def _assignable(t, s) -> bool:
    """Can matching ``t`` bind all of its unbound variables?"""
    if isinstance(t, Interval):
        return False
    return term_vars(t) - s.keys() <= binding_vars(t)


def _solutions(body: tuple, index: _Index, s: dict, int_range):
    """Yield (substitution, positive ground atoms, negative ground atoms)."""

    def go(pending, s, pos, neg):
        if not pending:
            yield s, pos, neg
            return
        pick = None
        # Filters and assignments first, then the most constrained atom.
        for i, lit in enumerate(pending):
            if isinstance(lit, Comparison):
                if _bound(lit.left, s) and _bound(lit.right, s):
                    pick = i
                    break
                if lit.op == "=" and (
                    (_bound(lit.left, s) and _assignable(lit.right, s))
                    or (_bound(lit.right, s) and _assignable(lit.left, s))
                ):
                    pick = i
                    break
            elif isinstance(lit, Not) and lit.vars() <= s.keys():
                pick = i
                break
        if pick is None:
            best = -1
            for i, lit in enumerate(pending):
                if isinstance(lit, Atom):
                    if any(has_arith(a) and not _bound(a, s) for a in lit.args):
                        continue  # arithmetic arguments need their variables first
                    known = sum(1 for a in lit.args if _bound(a, s))
                    if known > best:
                        pick, best = i, known
        if pick is None:
            raise UnsafeRule(f"cannot ground body {', '.join(map(str, pending))}")
        lit = pending[pick]
        rest = pending[:pick] + pending[pick + 1 :]
        if isinstance(lit, Not):
            try:
                g = Atom(lit.atom.pred, tuple(evaluate(a, s, int_range) for a in lit.atom.args))
            except _Undefined:
                return
            if g in index.atoms:
                yield from go(rest, s, pos, neg + (g,))
            else:
                yield from go(rest, s, pos, neg)  # surely false atom: literal holds
            return
        if isinstance(lit, Comparison):
            yield from _comparison(lit, rest, s, pos, neg)
            return
        for cand in index.candidates(lit.pred, len(lit.args)):
            s2 = s
            for p, v in zip(lit.args, cand.args):
                s2 = match(p, v, s2, int_range)
                if s2 is None:
                    break
            if s2 is not None:
                yield from go(rest, s2, pos + (cand,), neg)

    def _comparison(lit, rest, s, pos, neg):
        left_b, right_b = _bound(lit.left, s), _bound(lit.right, s)
        if left_b and right_b and not isinstance(lit.right, Interval) and not isinstance(lit.left, Interval):
            try:
                a, b = evaluate(lit.left, s, int_range), evaluate(lit.right, s, int_range)
            except _Undefined:
                return
            if _compare(lit.op, a, b):
                yield from go(rest, s, pos, neg)
            return
        pat, src = (lit.right, lit.left) if left_b and _assignable(lit.right, s) else (lit.left, lit.right)
        if isinstance(src, Interval):
            try:
                lo, hi = evaluate(src.lo, s, int_range), evaluate(src.hi, s, int_range)
            except _Undefined:
                return
            if not (isinstance(lo, IntConst) and isinstance(hi, IntConst)):
                return
            values = [IntConst(i) for i in range(lo.value, hi.value + 1)]
        else:
            try:
                values = [evaluate(src, s, int_range)]
            except _Undefined:
                return
        for v in values:
            s2 = match(pat, v, s, int_range)
            if s2 is not None:
                yield from go(rest, s2, pos, neg)

    yield from go(tuple(body), s, (), ())


@dataclass
class GroundProgram:
    rules: list
    choices: list
    constraints: list
    atoms: set


def _head_atoms(atom: Atom, s: dict, int_range) -> list:
    """Ground instances of a head atom; an interval argument stands for each of its values."""
    choices = []
    try:
        for a in atom.args:
            if isinstance(a, Interval):
                lo, hi = evaluate(a.lo, s, int_range), evaluate(a.hi, s, int_range)
                if not (isinstance(lo, IntConst) and isinstance(hi, IntConst)):
                    return []
                choices.append([IntConst(i) for i in range(lo.value, hi.value + 1)])
            else:
                choices.append([evaluate(a, s, int_range)])
    except _Undefined:
        return []
    return [Atom(atom.pred, args) for args in itertools.product(*choices)]


def ground(p: AspProgram, atom_cap: int = DEFAULT_ATOM_CAP, int_range=None) -> GroundProgram:
    """Instantiate every rule over the possibly-derivable atoms.

    A fixpoint first collects every atom some rule instance could derive;
    a final pass then emits instances against that complete set, so negative
    literals on underivable atoms can be dropped safely.
    """
    for r in p.rules:
        check_safety(r)
    index = _Index()

    def instances(r):
        for s, pos, neg in list(_solutions(r.body, index, {}, int_range)):
            if r.head is None:
                yield GroundRule(None, pos, neg)
            elif isinstance(r.head, Atom):
                for h in _head_atoms(r.head, s, int_range):
                    yield GroundRule(h, pos, neg)
            else:
                elements = []
                for el in r.head.elements:
                    for s2, cpos, cneg in _solutions(el.condition, index, s, int_range):
                        for h in _head_atoms(el.atom, s2, int_range):
                            elements.append((h, cpos, cneg))
                yield GroundChoice(tuple(dict.fromkeys(elements)), r.head.bound, pos, neg)

    changed = True
    while changed:
        changed = False
        for r in p.rules:
            if r.head is None:
                continue
            for inst in instances(r):
                heads = [inst.head] if isinstance(inst, GroundRule) else [a for a, _, _ in inst.elements]
                for h in heads:
                    changed |= index.add(h)
            if len(index.atoms) > atom_cap:
                raise GroundingBlowup(f"more than {atom_cap} ground atoms")
    rules, choices, constraints = {}, {}, {}
    for r in p.rules:
        for inst in instances(r):
            if isinstance(inst, GroundChoice):
                choices.setdefault(inst, None)
            elif inst.head is None:
                constraints.setdefault(inst, None)
            else:
                rules.setdefault(inst, None)
    return GroundProgram(list(rules), list(choices), list(constraints), set(index.atoms))


# -- solving ------------------------------------------------------------------


def _holds(pos, neg, model) -> bool:
    return all(a in model for a in pos) and not any(a in model for a in neg)


class _Plan:
    """Precomputed strata and the part of the model fixed by the facts."""

    def __init__(self, g: GroundProgram):
        self.g = g
        heads: dict = {}
        for r in g.rules:
            heads.setdefault(r.head, []).append(r)
        self.heads = heads
        choice_atoms = {a for c in g.choices for a, _, _ in c.elements}
        self.choice_atoms = choice_atoms
        # Atom dependency graph of the normal rules.
        nodes = list(dict.fromkeys([r.head for r in g.rules] + sorted(choice_atoms, key=str)))
        edges: dict = {n: [] for n in nodes}
        for r in g.rules:
            edges[r.head].extend(a for a in r.pos + r.neg if a in edges)
        comps = tarjan_scc(nodes, edges)
        comp_of = {a: i for i, comp in enumerate(comps) for a in comp}
        for r in g.rules:
            for a in r.neg:
                if comp_of.get(a) == comp_of[r.head]:
                    cycle = ", ".join(sorted(str(x) for x in comps[comp_of[a]])[:6])
                    raise UnstratifiedResidue(f"recursion through negation among {cycle}; use the clingo backend")
        # Atoms that depend on a guess are recomputed per assignment.
        tainted = set(choice_atoms)
        for comp in comps:
            if any(a in tainted for a in comp) or any(
                b in tainted for a in comp for r in heads.get(a, ()) for b in r.pos + r.neg
            ):
                tainted.update(comp)
        self.tainted = tainted
        self.fixed_strata = [c for c in comps if not (set(c) & tainted)]
        self.open_strata = [[a for a in c if a in heads] for c in comps if set(c) & tainted]
        self.open_strata = [c for c in self.open_strata if c]
        self.fixed = self._evaluate(set(), self.fixed_strata)

    def _evaluate(self, model: set, strata) -> set:
        for comp in strata:
            rules = [r for a in comp for r in self.heads.get(a, ())]
            changed = True
            while changed:
                changed = False
                for r in rules:
                    if r.head not in model and _holds(r.pos, r.neg, model):
                        model.add(r.head)
                        changed = True
        return model

    def known(self, pos, neg):
        """True/False when the literals only mention fixed atoms, else None."""
        if any(a in self.tainted for a in pos + neg):
            return None
        return _holds(pos, neg, self.fixed)

    def model_for(self, chosen: set) -> set:
        return self._evaluate(set(self.fixed) | chosen, self.open_strata)


def _options(plan: _Plan, c: GroundChoice) -> list:
    body = plan.known(c.pos, c.neg)
    if body is False:
        return [()]
    cands = []
    for a, cpos, cneg in c.elements:
        if plan.known(cpos, cneg) is not False:
            cands.append(a)
    cands = list(dict.fromkeys(cands))
    if c.bound is None:
        opts = [combo for k in range(len(cands) + 1) for combo in itertools.combinations(cands, k)]
    else:
        opts = list(itertools.combinations(cands, c.bound)) if c.bound <= len(cands) else []
        if body is None:
            opts.append(())
    return opts


def _accept(plan: _Plan, assignment, model: set) -> bool:
    for c, picked in assignment:
        body = _holds(c.pos, c.neg, model)
        live = {a for a, cpos, cneg in c.elements if _holds(cpos, cneg, model)}
        if picked and (not body or not set(picked) <= live):
            return False
        if body and c.bound is not None and len({a for a in live if a in model}) != c.bound:
            return False
    return all(not _holds(k.pos, k.neg, model) for k in plan.g.constraints)


def solve_builtin(
    p: AspProgram,
    n_models: int = 0,
    atom_cap: int = DEFAULT_ATOM_CAP,
    int_range=None,
    timeout: Optional[float] = None,
) -> SolveResult:
    """Enumerate up to ``n_models`` answer sets (0 means all)."""
    if n_models < 0:
        raise ValueError("n_models must be non-negative")
    start = time.perf_counter()
    g = ground(p, atom_cap, int_range)
    plan = _Plan(g)
    option_lists = [(c, _options(plan, c)) for c in g.choices]
    log.debug(
        "grounded %d rules, %d choices, %d constraints over %d atoms",
        len(g.rules), len(g.choices), len(g.constraints), len(g.atoms),
    )
    found: list = []
    seen: set = set()
    exhausted = True
    for combo in itertools.product(*(opts for _, opts in option_lists)):
        if timeout is not None and time.perf_counter() - start > timeout:
            exhausted = False
            break
        assignment = list(zip((c for c, _ in option_lists), combo))
        chosen = {a for picked in combo for a in picked}
        model = plan.model_for(chosen)
        if not _accept(plan, assignment, model):
            continue
        key = frozenset(model)
        if key in seen:
            continue
        seen.add(key)
        found.append(AnswerSet(key))
        if n_models and len(found) >= n_models:
            exhausted = False
            break
    elapsed = time.perf_counter() - start
    if found:
        status = SAT
    else:
        status = UNSAT if exhausted else UNKNOWN
    return SolveResult(status, found, elapsed, "builtin", exhausted)
