"""Stage wiring shared by the CLI and the tests."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from fms.asp.clingo import clingo_available, run_clingo
from fms.asp.result import SolveResult
from fms.asp.solver import solve_builtin
from fms.asp.syntax import AspProgram
from fms.frontend import desugar_source
from fms.model import FmlModel, reinterpret, sort_models
from fms.optimize import DEFAULT_MAX_ROUNDS, optimize_fixpoint
from fms.translate import translate
from fms.errors import FmsTypeError
from fms.typecheck import TBool, TypeScheme, infer, infer_with_bindings, show_scheme

log = logging.getLogger(__name__)


@dataclass
class Compiled:
    core: object
    optimized: object
    scheme: TypeScheme
    bindings: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)
    program: Optional[AspProgram] = None


def compile_source(
    source: str,
    filename: str = "<input>",
    optimize: bool = True,
    rounds: int = DEFAULT_MAX_ROUNDS,
    debug: bool = False,
    emit: bool = True,
) -> Compiled:
    """Parse, desugar, optimize, type check and (optionally) translate."""
    core = desugar_source(source, filename)
    # Checking before optimizing reports errors against what the user wrote;
    # the check after optimizing is the gate in front of translation.
    infer(core)
    reports = []
    opt = core
    if optimize:
        opt, reports = optimize_fixpoint(core, max_rounds=rounds, debug=debug)
    scheme, bindings = infer_with_bindings(opt)
    if scheme.body != TBool:
        raise FmsTypeError(f"a specification must be boolean, not {show_scheme(scheme)}", getattr(core, "loc", None))
    program = translate(opt) if emit else None
    return Compiled(core, opt, scheme, bindings, reports, program)


def default_backend() -> str:
    return "clingo" if clingo_available() else "builtin"


def solve(
    program: AspProgram,
    n_models: int = 0,
    backend: Optional[str] = None,
    timeout: Optional[float] = None,
    int_range=None,
    keep_artifacts: bool = False,
) -> SolveResult:
    backend = backend or default_backend()
    if backend == "clingo":
        if int_range is not None:
            log.warning("--int-range only bounds the builtin grounder; clingo ignores it")
        return run_clingo(program, n_models, timeout=timeout, keep_artifacts=keep_artifacts)
    if backend == "builtin":
        return solve_builtin(program, n_models, int_range=int_range, timeout=timeout)
    raise ValueError(f"unknown backend {backend!r}")


def models_of(result: SolveResult) -> list[FmlModel]:
    return sort_models(reinterpret(a) for a in result.answer_sets)


def solve_source(source: str, n_models: int = 0, backend: Optional[str] = None, **kw) -> list[FmlModel]:
    compiled = compile_source(source, **kw)
    return models_of(solve(compiled.program, n_models, backend))
