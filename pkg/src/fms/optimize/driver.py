"""Runs the pass sequence in rounds until nothing changes."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from fms.core.ast import size
from fms.optimize.passes import Stats, fold_and_beta, inline, simplify_bool, stratify
from fms.typecheck import check_preservation

log = logging.getLogger(__name__)

PASSES = [
    ("stratify", stratify),
    ("inline", inline),
    ("simplify_bool", simplify_bool),
    ("fold_and_beta", fold_and_beta),
]

DEFAULT_MAX_ROUNDS = 10


@dataclass(frozen=True)
class PassReport:
    name: str
    rewrites: int
    size_before: int
    size_after: int
    round: int = 0

    def __str__(self):
        return f"round {self.round} {self.name}: {self.rewrites} rewrites, size {self.size_before} -> {self.size_after}"


class PreservationFailure(AssertionError):
    pass


def run_pass(name: str, fn, e, round_no: int = 0):
    stats = Stats()
    before = size(e)
    out = fn(e, stats)
    return out, PassReport(name, stats.rewrites, before, size(out), round_no)


def optimize_fixpoint(e, max_rounds: int = DEFAULT_MAX_ROUNDS, debug: bool = False, passes=None):
    """Optimize ``e``; returns the result and one report per pass run.

    In debug mode every pass is followed by a type-preservation check, and a
    failing check raises PreservationFailure naming the pass.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be positive")
    passes = passes or PASSES
    reports: list[PassReport] = []
    for round_no in range(1, max_rounds + 1):
        total = 0
        for name, fn in passes:
            new, report = run_pass(name, fn, e, round_no)
            reports.append(report)
            total += report.rewrites
            if debug and not check_preservation(e, new):
                raise PreservationFailure(f"pass {name} broke typing in round {round_no}")
            e = new
        if total == 0:
            return e, reports
    log.warning("optimizer stopped after %d rounds without reaching a fixpoint", max_rounds)
    return e, reports
