import pytest

from fms.core.ops import alpha_equal
from fms.core.reader import read_core
from fms.evaluator import eval_closed
from fms.frontend import desugar_source
from fms.optimize import fold_and_beta, inline, optimize_fixpoint, run_pass, simplify_bool, stratify
from fms.optimize.driver import PreservationFailure

from conftest import FUNCTION_SET, COLORING


def same(got, want):
    return alpha_equal(got, read_core(want))


@pytest.mark.parametrize(
    "src, want",
    [
        ("not (not p)", "p"),
        ("and true p", "p"),
        ("or p true", "true"),
        ("not (a < b)", "a >= b"),
        ("implies false p", "true"),
    ],
)
def test_simplify_bool(src, want):
    assert same(simplify_bool(read_core(src)), want)


@pytest.mark.parametrize(
    "src, want",
    [
        ("ite true 1 2", "1"),
        ("case (1, 2) of (a, b) -> a + b", "let a := 1; b := 2 in a + b"),
        ("case 3 of 1 -> 5; x -> x", "let x := 3 in x"),
        ("1 / 0", "1 / 0"),  # errors are left for run time
        ("2 * 3 + 4 % 3", "7"),
    ],
)
def test_fold_and_beta(src, want):
    assert same(fold_and_beta(read_core(src)), want)


def test_inline_keeps_output_record():
    got = inline(read_core('let a := outputexp("a", 3) in a + a'))
    assert same(got, 'let a := outputexp("a", 3) in 3 + 3')


def test_inline_never_duplicates_choices():
    src = "let a := chooseElement {1, 2} in a + a"
    assert same(inline(read_core(src)), src)


def test_stratify_keeps_bindings_with_output():
    src = 'let a := outputexp("a", 1) in 2'
    assert same(stratify(read_core(src)), src)


def test_stratify_drops_dead_bindings():
    assert same(stratify(read_core("let a := 1; b := 2 in a")), "let a := 1 in a")


def test_run_pass_reports_rewrites():
    out, report = run_pass("simplify_bool", simplify_bool, read_core("not (not p)"))
    assert report.rewrites == 1
    assert report.size_after < report.size_before
    assert "simplify_bool" in str(report)


def test_fixpoint_terminates_and_stops_early():
    _, reports = optimize_fixpoint(read_core("(\\x -> x + 4) ((\\x -> 5) a)"))
    rounds = {r.round for r in reports}
    assert max(rounds) <= 3
    assert sum(r.rewrites for r in reports if r.round == max(rounds)) == 0


def test_fixpoint_rejects_zero_rounds():
    with pytest.raises(ValueError):
        optimize_fixpoint(read_core("1"), max_rounds=0)


@pytest.mark.parametrize("src", [FUNCTION_SET, COLORING])
def test_fixpoint_debug_mode_checks_types(src):
    core = desugar_source(src)
    out, _ = optimize_fixpoint(core, debug=True)
    assert out is not None


def test_debug_mode_names_a_breaking_pass():
    def breaks(e, stats=None):
        return read_core("1 + true")

    with pytest.raises(PreservationFailure, match="breaks"):
        optimize_fixpoint(read_core("1"), debug=True, passes=[("breaks", breaks)])


def test_output_channel_survives_optimization():
    core = desugar_source("x := 2.\ny := x + 1.\ny = 3.")
    out, _ = optimize_fixpoint(core)
    assert sorted(eval_closed(out)[1], key=str) == sorted(eval_closed(core)[1], key=str)
