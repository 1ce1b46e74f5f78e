"""Brute-force model enumeration, independent of translation and solving.

Every declaration is replaced by each candidate definition in turn; the
resulting choice-free program is run by the evaluator, and assignments for
which it evaluates to true are the models.  Candidates carry the model value
they stand for, so declared functions compare as graphs over the domain the
test supplies.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from fms.evaluator import VBool, VHerb, VInt, VSet, VStr, eval_closed, is_function, sorted_members
from fms.frontend import desugar_source
from fms.model import FunctionGraph, Herbrand, Scalar, SetOfValues, value_key


@dataclass(frozen=True)
class Candidate:
    text: str  # an FML definition replacing the declaration
    value: object  # the model value it denotes


def fml_literal(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v) if v >= 0 else f"(0 - {-v})"
    if isinstance(v, str):
        return '"' + v + '"'
    if isinstance(v, tuple):
        return "(" + ", ".join(fml_literal(x) for x in v) + ")"
    if isinstance(v, Herbrand):
        return "(" + " ".join([v.tag] + [fml_literal(a) for a in v.args]) + ")" if v.args else v.tag
    raise TypeError(v)


def fml_pattern(v) -> str:
    if isinstance(v, Herbrand):
        return f"{v.tag} [{', '.join(fml_pattern(a) for a in v.args)}]"
    if isinstance(v, tuple):
        return "(" + ", ".join(fml_pattern(x) for x in v) + ")"
    return fml_literal(v)


def elements(name, domain):
    return [Candidate(f"{name} := {fml_literal(v)}.", Scalar(v)) for v in domain]


def subsets(name, domain):
    out = []
    for r in range(len(domain) + 1):
        for combo in itertools.combinations(domain, r):
            items = tuple(sorted(combo, key=value_key))
            text = "{" + ", ".join(fml_literal(v) for v in items) + "}"
            out.append(Candidate(f"{name} := {text}.", SetOfValues(items)))
    return out


def functions(name, domain, codomain):
    """All total maps from ``domain`` to ``codomain`` (unary functions)."""
    out = []
    for image in itertools.product(codomain, repeat=len(domain)):
        arms = "; ".join(f"{fml_pattern(a)} -> {fml_literal(r)}" for a, r in zip(domain, image))
        pairs = tuple(sorted((((a,), r) for a, r in zip(domain, image)), key=lambda p: value_key(p[0][0])))
        out.append(Candidate(f"{name} arg := case arg of {arms};.", FunctionGraph(pairs)))
    return out


def to_model_value(v, top=True):
    """Evaluator value to model value; None for functions."""
    if is_function(v):
        return None
    if isinstance(v, VSet):
        return SetOfValues(tuple(sorted((to_model_value(x, False) for x in sorted_members(v)), key=value_key)))
    if isinstance(v, VInt):
        raw = v.value
    elif isinstance(v, VStr):
        raw = v.value
    elif isinstance(v, VBool):
        raw = v.value
    elif isinstance(v, VHerb):
        args = tuple(to_model_value(a, False) for a in v.args)
        m = re.match(r"tuple(\d+)$", v.tag)
        raw = args if m else Herbrand(v.tag, args)
    else:
        raise TypeError(v)
    return Scalar(raw) if top else raw


_DECL = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)(/\d+)?\s*::")


def enumerate_models(source: str, candidates: dict) -> tuple[set, set]:
    """Return (models, keys): models as frozensets of (name, value) over keys."""
    lines = source.splitlines()
    kept = []
    declared = set()
    for line in lines:
        m = _DECL.match(line)
        if m and "constructor" not in line:
            declared.add(m.group(1))
            continue
        kept.append(line)
    if declared != set(candidates):
        raise ValueError(f"candidates given for {sorted(candidates)}, declarations are {sorted(declared)}")
    base = "\n".join(kept)
    names = sorted(candidates)
    models = set()
    keys = None
    for combo in itertools.product(*(candidates[n] for n in names)):
        text = "\n".join(c.text for c in combo) + "\n" + base
        value, output = eval_closed(desugar_source(text))
        if value != VBool(True):
            continue
        chosen = {n: c.value for n, c in zip(names, combo)}
        model = {}
        for label, v in output:
            if label in chosen:
                model[label] = chosen[label]
            else:
                mv = to_model_value(v)
                if mv is not None:
                    model[label] = mv
        keys = set(model) if keys is None else keys
        models.add(frozenset(model.items()))
    return models, keys or set()


def project(model, keys) -> frozenset:
    """A pipeline FmlModel restricted to ``keys``."""
    d = model.as_dict()
    missing = set(keys) - set(d)
    if missing:
        raise AssertionError(f"model lacks {sorted(missing)}")
    return frozenset((k, d[k]) for k in keys)
