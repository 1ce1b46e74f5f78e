"""Surface syntax of the Full language, as produced by the parser."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from fms.errors import Loc


def _loc():
    return field(default=None, compare=False, repr=False)


# -- patterns -----------------------------------------------------------------


@dataclass(frozen=True)
class PVar:
    """A bare identifier; resolves to a nullary constructor if one is declared."""

    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PWild:
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PLit:
    value: Union[int, str]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PTuple:
    items: tuple
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PCtor:
    name: str
    args: tuple
    loc: Optional[Loc] = _loc()


FullPattern = Union[PVar, PWild, PLit, PTuple, PCtor]


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class EVar:
    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ELit:
    value: Union[int, str]
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class EBuiltin:
    """Builtin referenced by a reserved word or symbol (``!``, ``and``, ``true``...)."""

    name: str
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class EApp:
    fun: "FullExpr"
    args: tuple
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class EBinOp:
    op: str  # builtin name, e.g. "add", "implies"
    left: "FullExpr"
    right: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ENot:
    operand: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ENeg:
    operand: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ELam:
    params: tuple  # of FullPattern
    body: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ELet:
    definitions: tuple  # of Definition
    body: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class EIf:
    cond: "FullExpr"
    then: "FullExpr"
    orelse: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ECase:
    scrutinee: "FullExpr"
    arms: tuple  # of (FullPattern, FullExpr)
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ETuple:
    items: tuple
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ESet:
    elements: tuple
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class ERange:
    lo: "FullExpr"
    hi: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Generator:
    pattern: FullPattern
    source: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Guard:
    cond: "FullExpr"
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class EComp:
    head: "FullExpr"
    qualifiers: tuple  # of Generator | Guard
    loc: Optional[Loc] = _loc()


FullExpr = Union[EVar, ELit, EBuiltin, EApp, EBinOp, ENot, ENeg, ELam, ELet, EIf, ECase, ETuple, ESet, ERange, EComp]


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class ElementOf:
    set: FullExpr


@dataclass(frozen=True)
class SubsetOf:
    set: FullExpr


@dataclass(frozen=True)
class FunctionTo:
    codomain: FullExpr


@dataclass(frozen=True)
class Constructor:
    pass


@dataclass(frozen=True)
class Proposition:
    pass


@dataclass(frozen=True)
class Predicate:
    pass


DeclKind = Union[ElementOf, SubsetOf, FunctionTo, Constructor, Proposition, Predicate]


@dataclass(frozen=True)
class Declaration:
    name: str
    arity: int
    kind: DeclKind
    explicit_arity: bool = False
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class FunHead:
    """``name p1 ... pn`` on the left of ``:=`` (n may be zero)."""

    name: str
    params: tuple
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class PatHead:
    """A destructuring head such as ``(a, b)``."""

    pattern: FullPattern
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Definition:
    head: Union[FunHead, PatHead]
    body: FullExpr
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Constraint:
    expr: FullExpr
    loc: Optional[Loc] = _loc()


@dataclass(frozen=True)
class Directive:
    kind: str  # "inline" | "noinline"
    name: str
    loc: Optional[Loc] = _loc()


Statement = Union[Declaration, Definition, Constraint, Directive]


@dataclass(frozen=True)
class FullAst:
    statements: tuple

    def declarations(self):
        return [s for s in self.statements if isinstance(s, Declaration)]

    def definitions(self):
        return [s for s in self.statements if isinstance(s, Definition)]

    def constraints(self):
        return [s for s in self.statements if isinstance(s, Constraint)]


def pattern_names(p: FullPattern) -> list[str]:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PTuple):
        return [n for q in p.items for n in pattern_names(q)]
    if isinstance(p, PCtor):
        return [n for q in p.args for n in pattern_names(q)]
    return []
