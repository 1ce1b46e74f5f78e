from fms.optimize.driver import DEFAULT_MAX_ROUNDS, PassReport, optimize_fixpoint, run_pass
from fms.optimize.passes import BindingGraph, fold_and_beta, inline, simplify_bool, stratify

__all__ = [
    "BindingGraph",
    "DEFAULT_MAX_ROUNDS",
    "PassReport",
    "fold_and_beta",
    "inline",
    "optimize_fixpoint",
    "run_pass",
    "simplify_bool",
    "stratify",
]
