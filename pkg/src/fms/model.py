"""Reinterpretation of answer sets as FML models, and their rendering."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Union

from fms.asp.result import AnswerSet
from fms.asp.syntax import Func, IntConst, StrConst, Tuple
from fms.errors import AmbiguousScalar, DanglingOutput
from fms.translate import unmangle

_SET_NAME = re.compile(r"s\d+$")
_FUN_NAME = re.compile(r"l\d+$")
_VAL_NAME = re.compile(r"v\d+$")

MAX_CURRY_DEPTH = 16


# -- model values ---------------------------------------------------------------


@dataclass(frozen=True)
class Herbrand:
    tag: str
    args: tuple = ()


@dataclass(frozen=True)
class FunctionRef:
    """A function value shown by name; its graph goes to the appendix."""

    name: str


@dataclass(frozen=True)
class Scalar:
    value: object


@dataclass(frozen=True)
class SetOfValues:
    items: tuple


@dataclass(frozen=True)
class FunctionGraph:
    pairs: tuple  # of (args tuple, result)


ModelValue = Union[Scalar, SetOfValues, FunctionGraph]


@dataclass(frozen=True)
class FmlModel:
    entries: tuple  # sorted (name, ModelValue) pairs
    functions: tuple = ()  # appendix: (name, FunctionGraph) pairs

    def __getitem__(self, name):
        for k, v in self.entries:
            if k == name:
                return v
        raise KeyError(name)

    def names(self) -> list:
        return [k for k, _ in self.entries]

    def as_dict(self) -> dict:
        return dict(self.entries)


@dataclass(frozen=True)
class ModelRenderOptions:
    format: str = "human"  # human | json


def value_key(v):
    """Deterministic order on model values."""
    if isinstance(v, bool):
        return (1, v)
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (2, v)
    if isinstance(v, tuple):
        return (3, len(v), "", tuple(value_key(x) for x in v))
    if isinstance(v, Herbrand):
        return (3, len(v.args), v.tag, tuple(value_key(x) for x in v.args))
    if isinstance(v, SetOfValues):
        return (4, tuple(value_key(x) for x in v.items))
    if isinstance(v, FunctionRef):
        return (5, v.name)
    if isinstance(v, FunctionGraph):
        return (6, tuple((value_key(a), value_key(r)) for a, r in v.pairs))
    if isinstance(v, Scalar):
        return value_key(v.value)
    return (7, str(v))


# -- reinterpretation ---------------------------------------------------------


def _head_name(t):
    if isinstance(t, Func) and not t.args:
        return t.name
    if isinstance(t, Tuple) and t.items and isinstance(t.items[0], Func) and not t.items[0].args:
        return t.items[0].name
    return None


class _Reader:
    def __init__(self, a: AnswerSet):
        self.members: dict = {}
        self.inter: dict = {}
        self.vals: dict = {}
        self.outs: list = []
        for atom in a.atoms:
            if atom.pred == "member" and len(atom.args) == 2:
                self.members.setdefault(atom.args[0], []).append(atom.args[1])
            elif atom.pred == "lamInter" and len(atom.args) == 3:
                self.inter.setdefault(atom.args[0], []).append((atom.args[1], atom.args[2]))
            elif atom.pred == "val" and len(atom.args) == 2:
                self.vals.setdefault(atom.args[0], []).append(atom.args[1])
            elif atom.pred == "out" and len(atom.args) == 2:
                self.outs.append(atom.args)
        self.appendix: dict = {}
        self._naming: dict = {}

    def kind(self, t):
        name = _head_name(t)
        if name is None:
            return None
        if _SET_NAME.match(name):
            return "set"
        if _FUN_NAME.match(name):
            return "function"
        if _VAL_NAME.match(name):
            return "scalar"
        return None

    def value(self, t, depth=0):
        kind = self.kind(t)
        if kind == "set":
            return self.set_value(t, depth)
        if kind == "function":
            name = self.ref_name(t)
            if name not in self.appendix:
                self.appendix[name] = None  # guards recursion through self reference
                self.appendix[name] = self.graph(t, depth + 1)
            return FunctionRef(name)
        if kind == "scalar":
            return self.scalar(t, str(t), depth)
        if isinstance(t, IntConst):
            return t.value
        if isinstance(t, StrConst):
            return t.value
        if isinstance(t, Tuple):
            return tuple(self.value(x, depth) for x in t.items)
        if isinstance(t, Func):
            if not t.args and t.name in ("true", "false"):
                return t.name == "true"
            return Herbrand(unmangle(t.name), tuple(self.value(x, depth) for x in t.args))
        raise DanglingOutput(f"cannot interpret term {t}")

    def ref_name(self, t) -> str:
        key = str(t)
        if key not in self._naming:
            self._naming[key] = key
        return self._naming[key]

    def set_value(self, t, depth=0) -> SetOfValues:
        items = [self.value(x, depth + 1) for x in self.members.get(t, [])]
        return SetOfValues(tuple(sorted(set(items), key=value_key)))

    def graph(self, t, depth=0) -> FunctionGraph:
        pairs = []
        for arg, res in self.inter.get(t, []):
            a = self.value(arg, depth)
            if self.kind(res) == "function" and depth < MAX_CURRY_DEPTH and self.inter.get(res) is not None:
                # curried: flatten the partial application into one argument tuple
                for rest, r in self.graph(res, depth + 1).pairs:
                    pairs.append(((a,) + rest, r))
                continue
            pairs.append(((a,), self.value(res, depth)))
        pairs.sort(key=lambda p: (tuple(value_key(x) for x in p[0]), value_key(p[1])))
        return FunctionGraph(tuple(pairs))

    def scalar(self, t, label, depth=0):
        vals = self.vals.get(t, [])
        if len(vals) != 1:
            raise AmbiguousScalar(f"{label} has {len(vals)} values in one answer set")
        return self.value(vals[0], depth)

    def entry(self, label, t) -> ModelValue:
        kind = self.kind(t)
        if kind == "set":
            return self.set_value(t)
        if kind == "function":
            return self.graph(t)
        if kind == "scalar" or t in self.vals:
            if t not in self.vals:
                raise DanglingOutput(f"output {label!r} refers to {t}, which has no value")
            v = self.scalar(t, label)
            if isinstance(v, FunctionRef):
                return self.graph_by_ref(v)
            return v if isinstance(v, SetOfValues) else Scalar(v)
        raise DanglingOutput(f"output {label!r} refers to {t}, which is not a set, function or value")

    def graph_by_ref(self, ref: FunctionRef) -> FunctionGraph:
        return self.appendix.get(ref.name) or FunctionGraph(())


def reinterpret(a: AnswerSet) -> FmlModel:
    r = _Reader(a)
    entries = {}
    for label, t in r.outs:
        if not isinstance(label, StrConst):
            raise DanglingOutput(f"malformed output atom for {t}")
        if label.value in entries:
            raise DanglingOutput(f"output {label.value!r} recorded twice")
        entries[label.value] = r.entry(label.value, t)
    functions = tuple(sorted((k, v) for k, v in r.appendix.items() if v is not None))
    return FmlModel(tuple(sorted(entries.items())), functions)


# -- rendering ------------------------------------------------------------------


def show(v) -> str:
    """Human form: lists in brackets, tuples without spaces, bare strings."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, str)):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ",".join(show(x) for x in v) + ")"
    if isinstance(v, Herbrand):
        if not v.args:
            return v.tag
        return v.tag + "(" + ",".join(show(x) for x in v.args) + ")"
    if isinstance(v, FunctionRef):
        return v.name
    if isinstance(v, Scalar):
        return show(v.value)
    if isinstance(v, SetOfValues):
        return "[" + ", ".join(show(x) for x in v.items) + "]"
    if isinstance(v, FunctionGraph):
        return "[" + ", ".join(show(_pair(a, r)) for a, r in v.pairs) + "]"
    return str(v)


def _pair(args, result):
    return tuple(args) + (result,)


def to_json(v):
    if isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, tuple):
        return {"tuple": [to_json(x) for x in v]}
    if isinstance(v, Herbrand):
        return {"ctor": v.tag, "args": [to_json(x) for x in v.args]}
    if isinstance(v, FunctionRef):
        return {"function_ref": v.name}
    if isinstance(v, Scalar):
        return to_json(v.value)
    if isinstance(v, SetOfValues):
        return {"set": [to_json(x) for x in v.items]}
    if isinstance(v, FunctionGraph):
        return {"function": [[[to_json(a) for a in args], to_json(r)] for args, r in v.pairs]}
    raise TypeError(v)


def render(m: FmlModel, opts: ModelRenderOptions = ModelRenderOptions()) -> str:
    if opts.format == "json":
        doc = {"model": {k: to_json(v) for k, v in m.entries}}
        if m.functions:
            doc["functions"] = {k: to_json(v) for k, v in m.functions}
        return json.dumps(doc, sort_keys=True, ensure_ascii=False)
    if not m.entries:
        text = "{}"
    else:
        text = "{" + ",\n ".join(f"{k}={show(v)}" for k, v in m.entries) + "\n}"
    if m.functions:
        text += "\nfunctions:\n" + "\n".join(f" {k}={show(v)}" for k, v in m.functions)
    return text


def sort_models(models) -> list:
    """Deterministic model order, independent of solver enumeration order."""
    return sorted(models, key=lambda m: render(m, ModelRenderOptions("json")))
