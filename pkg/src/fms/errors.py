"""Exception hierarchy shared by every compiler stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Loc:
    """A source position; columns and lines are 1-based."""

    file: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class FmsError(Exception):
    """Base class. ``stage`` names the pipeline step that raised."""

    stage = "fms"
    user_error = True

    def __init__(self, message: str, loc: Loc | None = None):
        super().__init__(message)
        self.message = message
        self.loc = loc

    def __str__(self) -> str:
        where = f"{self.loc}: " if self.loc else ""
        return f"{where}{self.stage} error: {self.message}"


class FmsSyntaxError(FmsError):
    stage = "parse"


class ScopeError(FmsError):
    stage = "desugar"

    def __init__(self, name: str, loc: Loc | None = None):
        super().__init__(f"identifier {name!r} is not in scope", loc)
        self.name = name


class DesugarError(FmsError):
    stage = "desugar"


class FmsTypeError(FmsError):
    stage = "typecheck"


class EvalError(FmsError):
    stage = "eval"


class NonExhaustiveMatch(EvalError):
    pass


class DivisionByZero(EvalError):
    pass


class InfiniteSetOperation(EvalError):
    pass


class ChoiceMarkerEncountered(EvalError):
    pass


class DivergentBinding(EvalError):
    pass


class DynamicTypeError(EvalError):
    pass


class TranslationError(FmsError):
    stage = "translate"


class UnsupportedResidual(TranslationError):
    pass


class AspError(FmsError):
    stage = "solve"
    user_error = False


class UnsafeRule(AspError):
    pass


class SolverNotFound(AspError):
    pass


class SolverCrash(AspError):
    pass


class JsonParseError(AspError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnstratifiedResidue(AspError):
    pass


class GroundingBlowup(AspError):
    pass


class ModelError(FmsError):
    stage = "reinterpret"
    user_error = False


class DanglingOutput(ModelError):
    pass


class AmbiguousScalar(ModelError):
    pass
