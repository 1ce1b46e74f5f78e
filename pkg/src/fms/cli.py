"""Command-line driver: ``fms solve|eval|check|emit-asp FILE``.

Exit status: 0 success (solve: at least one model), 20 unsatisfiable,
1 user error (syntax, scope, type, evaluation), 2 internal or solver error.
There is no seed flag: nothing in the pipeline is random.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from fms import __version__
from fms.asp.result import SAT, UNSAT
from fms.asp.syntax import print_program
from fms.core.pretty import pretty
from fms.core.reader import read_core
from fms.errors import FmsError
from fms.evaluator import eval_closed, format_value
from fms.model import ModelRenderOptions, render
from fms.optimize import DEFAULT_MAX_ROUNDS
from fms.pipeline import compile_source, default_backend, models_of, solve
from fms.typecheck import show_scheme

EXIT_OK, EXIT_USER, EXIT_INTERNAL, EXIT_UNSAT = 0, 1, 2, 20

log = logging.getLogger("fms")


def _int_range(text: str):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("empty integer range")
    return lo, hi


def _non_negative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fms", description="Compile and solve FML specifications.")
    p.add_argument("--version", action="version", version=f"fms {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="FML source file")
        sp.add_argument("--verbose", "-v", action="store_true", help="log stage details to stderr")

    solve_p = sub.add_parser("solve", help="search for models")
    common(solve_p)
    solve_p.add_argument("--models", "-n", type=_non_negative, default=1, help="models to print, 0 for all (default 1)")
    solve_p.add_argument("--backend", choices=["clingo", "builtin"], help="solver (default: clingo if found)")
    solve_p.add_argument("--emit-asp", metavar="PATH", help="write the ASP program to PATH ('-' for stdout)")
    solve_p.add_argument("--dump-core", action="store_true", help="print Core after desugaring")
    solve_p.add_argument("--dump-core-opt", action="store_true", help="print Core after optimizing")
    solve_p.add_argument("--dump-types", action="store_true", help="print inferred types of definitions")
    solve_p.add_argument("--no-optimize", action="store_true", help="skip the optimizer")
    solve_p.add_argument("--opt-rounds", type=int, default=DEFAULT_MAX_ROUNDS, metavar="N")
    solve_p.add_argument("--int-range", type=_int_range, metavar="LO..HI", help="bound arithmetic in the builtin grounder")
    solve_p.add_argument("--json-models", action="store_true", help="one JSON object per model")
    solve_p.add_argument("--timeout", type=float, metavar="S", help="solver wall-clock limit in seconds")
    solve_p.add_argument("--keep-artifacts", action="store_true", help="keep solver input and output files")

    eval_p = sub.add_parser("eval", help="evaluate a choice-free specification")
    common(eval_p)
    eval_p.add_argument("--core", action="store_true", help="FILE holds a Core term rather than FML")

    check_p = sub.add_parser("check", help="parse, desugar and type check")
    common(check_p)
    check_p.add_argument("--dump-types", action="store_true")

    emit_p = sub.add_parser("emit-asp", help="print the ASP program")
    common(emit_p)
    emit_p.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")
    emit_p.add_argument("--no-optimize", action="store_true")
    return p


def _dump_types(compiled, out):
    for name, scheme in sorted(compiled.bindings.items()):
        print(f"{name} :: {show_scheme(scheme)}", file=out)
    print(f"<spec> :: {show_scheme(compiled.scheme)}", file=out)


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_solve(args, source: str) -> int:
    out = sys.stdout
    compiled = compile_source(
        source,
        args.file,
        optimize=not args.no_optimize,
        rounds=args.opt_rounds,
        debug=args.verbose,
    )
    if args.dump_core:
        print("-- core", file=out)
        print(pretty(compiled.core), file=out)
    for report in compiled.reports:
        log.info("%s", report)
    if args.dump_core_opt:
        print("-- core (optimized)", file=out)
        print(pretty(compiled.optimized), file=out)
    if args.dump_types:
        print("-- types", file=out)
        _dump_types(compiled, out)
    text = print_program(compiled.program)
    if args.emit_asp:
        _write(args.emit_asp, text)
    backend = args.backend or default_backend()
    log.info("solving with %s backend", backend)
    result = solve(
        compiled.program,
        args.models,
        backend,
        timeout=args.timeout,
        int_range=args.int_range,
        keep_artifacts=args.keep_artifacts,
    )
    models = models_of(result)
    opts = ModelRenderOptions("json" if args.json_models else "human")
    for i, m in enumerate(models, 1):
        if not args.json_models:
            print(f"Model {i}:", file=out)
        print(render(m, opts), file=out)
    print(f"Models: {len(models)}", file=out)
    if result.status == UNSAT:
        return EXIT_UNSAT
    if result.status != SAT:
        print("fms: the solver stopped without an answer", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_eval(args, source: str) -> int:
    if args.core:
        term = read_core(source, args.file)
    else:
        term = compile_source(source, args.file, optimize=False, emit=False).core
    value, output = eval_closed(term)
    for label, v in output:
        print(f"{label} = {format_value(v)}")
    print(format_value(value))
    return EXIT_OK


def cmd_check(args, source: str) -> int:
    compiled = compile_source(source, args.file, emit=False)
    if args.dump_types:
        _dump_types(compiled, sys.stdout)
    print(f"ok: {show_scheme(compiled.scheme)}")
    return EXIT_OK


def cmd_emit(args, source: str) -> int:
    compiled = compile_source(source, args.file, optimize=not args.no_optimize)
    _write(args.output or "-", print_program(compiled.program))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "eval": cmd_eval, "check": cmd_check, "emit-asp": cmd_emit}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        source = Path(args.file).read_text()
    except OSError as err:
        print(f"fms: cannot read {args.file}: {err.strerror}", file=sys.stderr)
        return EXIT_USER
    try:
        return COMMANDS[args.command](args, source)
    except FmsError as err:
        print(f"fms: {err}", file=sys.stderr)
        return EXIT_USER if err.user_error else EXIT_INTERNAL
    except RecursionError:
        print("fms: internal error: recursion too deep", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as err:  # never show a bare stack trace
        log.debug("internal error", exc_info=True)
        print(f"fms: internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
