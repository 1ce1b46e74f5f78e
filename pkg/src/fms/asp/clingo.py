"""Drives an external clingo process through files and its JSON output."""

from __future__ import annotations

import json
import logging
import os
import shutil
import subprocess
import sys
import tempfile
import time
from pathlib import Path
from typing import Optional

from fms.asp.reader import parse_atom
from fms.asp.result import SAT, UNKNOWN, UNSAT, AnswerSet, SolveResult
from fms.asp.syntax import AspProgram, print_program
from fms.errors import JsonParseError, SolverCrash, SolverNotFound

log = logging.getLogger(__name__)

# clingo's exit status is a bit field: 1 interrupted, 10 SAT, 20 UNSAT, +1 exhausted
_OK_EXIT = {0, 1, 10, 11, 20, 30}


def _module_available() -> bool:
    try:
        import importlib.util

        return importlib.util.find_spec("clingo") is not None
    except (ImportError, ValueError):
        return False


def find_clingo(path: Optional[str] = None) -> list[str]:
    """The command prefix that runs clingo.

    Order: an explicit path, then $FMS_CLINGO, then ``clingo`` on PATH, then
    the Python module of the clingo wheel.
    """
    explicit = path or os.environ.get("FMS_CLINGO")
    if explicit:
        resolved = shutil.which(explicit) or (explicit if os.access(explicit, os.X_OK) else None)
        if not resolved or os.path.isdir(resolved):
            raise SolverNotFound(f"clingo executable not found at {explicit!r}")
        return [resolved]
    found = shutil.which("clingo")
    if found:
        return [found]
    if _module_available():
        return [sys.executable, "-m", "clingo"]
    raise SolverNotFound("clingo not found; install it or set FMS_CLINGO")


def clingo_available(path: Optional[str] = None) -> bool:
    try:
        find_clingo(path)
    except SolverNotFound:
        return False
    return True


def parse_output(text: str) -> tuple[str, list[AnswerSet], bool]:
    """Status, witnesses and exhaustion flag from clingo's JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise JsonParseError(f"malformed solver output: {err.msg}", err.pos) from None
    result = doc.get("Result", "UNKNOWN")
    witnesses = []
    calls = doc.get("Call") or [{}]
    for w in calls[0].get("Witnesses", []):
        witnesses.append(AnswerSet(frozenset(parse_atom(s) for s in w.get("Value", []))))
    models = doc.get("Models", {})
    exhausted = bool(models.get("More") == "no")
    status = {"SATISFIABLE": SAT, "OPTIMUM FOUND": SAT, "UNSATISFIABLE": UNSAT}.get(result, UNKNOWN)
    if status == UNKNOWN and witnesses:
        status = SAT
    return status, witnesses, exhausted


def run_clingo(
    p: AspProgram,
    n_models: int = 0,
    clingo_path: Optional[str] = None,
    timeout: Optional[float] = None,
    keep_artifacts: bool = False,
    workdir: Optional[str] = None,
) -> SolveResult:
    if n_models < 0:
        raise ValueError("n_models must be non-negative")
    cmd = find_clingo(clingo_path)
    text = print_program(p)
    tmp = Path(workdir or tempfile.mkdtemp(prefix="fms-"))
    tmp.mkdir(parents=True, exist_ok=True)
    lp = tmp / "program.lp"
    lp.write_text(text)
    argv = cmd + ["--outf=2", f"--models={n_models}", str(lp)]
    log.debug("running %s", " ".join(argv))
    start = time.perf_counter()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return SolveResult(UNKNOWN, [], time.perf_counter() - start, "clingo", exhausted=False)
    except OSError as err:
        raise SolverNotFound(f"cannot run clingo: {err}") from None
    finally:
        if keep_artifacts:
            log.info("kept solver input at %s", lp)
        elif workdir is None:
            shutil.rmtree(tmp, ignore_errors=True)
    elapsed = time.perf_counter() - start
    if proc.returncode not in _OK_EXIT:
        raise SolverCrash(f"clingo exited with status {proc.returncode}: {proc.stderr.strip()[:2000]}")
    if keep_artifacts:
        (tmp / "output.json").write_text(proc.stdout)
    if not proc.stdout.strip():
        raise SolverCrash(f"clingo produced no output: {proc.stderr.strip()[:2000]}")
    status, witnesses, exhausted = parse_output(proc.stdout)
    if status == UNKNOWN and "error" in proc.stderr.lower():
        raise SolverCrash(f"clingo reported an error: {proc.stderr.strip()[:2000]}")
    return SolveResult(status, witnesses, elapsed, "clingo", exhausted)
