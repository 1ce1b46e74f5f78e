import pytest
from hypothesis import given
from hypothesis import strategies as st

from fms.core.reader import read_core
from fms.errors import (
    ChoiceMarkerEncountered,
    DivergentBinding,
    DivisionByZero,
    DynamicTypeError,
    NonExhaustiveMatch,
)
from fms.evaluator import VBool, VInt, VSet, c_div, c_mod, eval, eval_closed, format_value, value_to_core
from fms.frontend import desugar_source


def run(text):
    return eval_closed(read_core(text))[0]


@pytest.mark.parametrize(
    "text, shown",
    [
        ("card {1, 2, 2}", "2"),
        ("{1, 2} = {2, 1}", "true"),
        ("bind (range 1 3) (\\x -> {x * x})", "{1, 4, 9}"),
        ("union {1} {2}", "{1, 2}"),
        ("forall {} (\\x -> false)", "true"),
        ("exists (range 1 5) (\\x -> x * x = 16)", "true"),
        ("(1, \"a\")", '(1, "a")'),
        ("s[nil[]]", "s(nil)"),
        ("\\x -> x", "<function>"),
        ("let even := \\n -> if n = 0 then true else odd (n - 1); odd := \\n -> if n = 0 then false else even (n - 1) in even 10", "true"),
        ("member 3 (range 1 2)", "false"),
        ("false => 1 / 0 = 1", "true"),
    ],
)
def test_values(text, shown):
    assert format_value(run(text)) == shown


@pytest.mark.parametrize(
    "text, error",
    [
        ("1 / 0", DivisionByZero),
        ("5 % 0", DivisionByZero),
        ("case 3 of 1 -> 2", NonExhaustiveMatch),
        ("let x := x + 1 in x", DivergentBinding),
        ("chooseElement {1}", ChoiceMarkerEncountered),
        ("\"a\" < \"b\"", DynamicTypeError),
        ("y", DynamicTypeError),
    ],
)
def test_errors(text, error):
    with pytest.raises(error):
        run(text)


@pytest.mark.parametrize("a, b", [(7, 2), (-7, 2), (7, -2), (-7, -2), (0, 3)])
def test_division_truncates_toward_zero(a, b):
    assert c_div(a, b) == int(a / b)
    assert c_div(a, b) * b + c_mod(a, b) == a


@given(st.integers(-1000, 1000), st.integers(-50, 50).filter(bool))
def test_division_identity(a, b):
    assert c_div(a, b) * b + c_mod(a, b) == a
    assert abs(c_mod(a, b)) < abs(b)


def test_output_channel_keeps_evaluation_order():
    _, out = eval_closed(read_core('outputexp("a", 1) + outputexp("b", 2)'))
    assert out == [("a", VInt(1)), ("b", VInt(2))]


def test_eval_with_environment():
    assert eval(read_core("x + 1"), {"x": VInt(4)}) == VInt(5)


def test_value_to_core_round_trip():
    v = run("{(1, \"x\"), (2, \"y\")}")
    assert isinstance(v, VSet)
    assert run_core(value_to_core(v)) == v


def run_core(e):
    return eval_closed(e)[0]


def test_whole_specification_evaluates():
    value, out = eval_closed(desugar_source("x := 2.\ny := x * x.\ny = 4."))
    assert value == VBool(True)
    assert dict(out) == {"x": VInt(2), "y": VInt(4)}
