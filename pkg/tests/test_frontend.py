import pytest

from fms.core import ast as C
from fms.core.ops import alpha_equal, free_vars
from fms.core.reader import read_core
from fms.errors import DesugarError, FmsSyntaxError, ScopeError
from fms.frontend import ast as A
from fms.frontend import desugar_source
from fms.frontend.lexer import tokenize
from fms.frontend.parser import parse, parse_expression

from conftest import FUNCTION_SET, MINUS_ONE, COLORING, nqueens


def kinds(src):
    return [(t.kind, t.value) for t in tokenize(src)]


def test_tokens_cover_symbols_strings_and_comments():
    toks = kinds('x := {1..3}. // a comment\n! s (\\y -> y ~= "a\\n").')
    assert toks[:7] == [("IDENT", "x"), ("SYM", ":="), ("SYM", "{"), ("INT", 1), ("SYM", ".."), ("INT", 3), ("SYM", "}")]
    assert ("STRING", "a\n") in toks
    assert toks[-1] == ("EOF", None)
    assert all(v != "comment" for _, v in toks)


def test_token_locations_are_one_based():
    toks = tokenize("a\n  b")
    assert (toks[1].loc.line, toks[1].loc.col) == (2, 3)


@pytest.mark.parametrize(
    "src, message",
    [
        ('x := "abc.', "unterminated string"),
        ("x := 1 $ 2.", "unexpected character"),
        ("x := .", "unexpected '.'"),
    ],
)
def test_syntax_errors_name_the_problem(src, message):
    with pytest.raises(FmsSyntaxError, match=message):
        desugar_source(src)


def test_parse_statements():
    ast = parse("f x := x + 1.\nf 2 = 3.")
    d, c = ast.statements
    assert isinstance(d, A.Definition) and d.head.name == "f"
    assert isinstance(c, A.Constraint)
    assert c.expr.op == "eq"


@pytest.mark.parametrize(
    "src, op",
    [
        ("a | b & c", "or"),
        ("a => b => c", "implies"),
        ("a <=> b", "equiv"),
        ("1 + 2 * 3", "add"),
        ("x < y + 1", "lt"),
    ],
)
def test_operator_precedence(src, op):
    assert parse_expression(src).op == op


@pytest.mark.parametrize("src", [FUNCTION_SET, MINUS_ONE + "true.", COLORING, nqueens(5)])
def test_reference_programs_desugar_closed(src):
    core = desugar_source(src)
    assert free_vars(core) == set()


def test_declarations_become_choice_markers():
    core = desugar_source(
        "p :: proposition.\nq/2 :: predicate.\nf/2 :: function to {1,2}.\nv :: subset of {1,2}.\np | q 1 2."
    )
    markers = {b.name: C.spine(b.value.inner)[0].symbol for b in core.bindings}
    assert markers == {"p": "chooseElement", "q": "chooseFunction_2", "f": "chooseFunction_2", "v": "chooseSubset"}


def test_outputs_track_every_user_symbol():
    core = desugar_source(COLORING)
    labels = [b.value.label for b in core.bindings]
    assert labels == ["borders", "colors", "colorof"]


def test_tracking_can_be_switched_off():
    core = desugar_source("x := 1.\nx = 1.", track_outputs=False)
    assert not any(isinstance(n, C.OutputExp) for n in C.walk(core))


def test_lambda_with_tuple_pattern():
    core = desugar_source("t := \\(a, b) -> a + b.\nt (1, 2) = 3.", track_outputs=False)
    got = core.bindings[0].value
    assert alpha_equal(got, read_core("\\p -> case p of (a, b) -> a + b"))


def test_if_then_else_and_set_builders():
    core = desugar_source("z := if 1 < 2 then {1..3} else {}.\ntrue.", track_outputs=False)
    assert alpha_equal(core.bindings[0].value, read_core("ite (1 < 2) (range 1 3) {}"))


def test_comprehension_with_guard():
    core = desugar_source("ev := {x || x <- {1..6}, x % 2 = 0}.\ntrue.", track_outputs=False)
    want = read_core("bind (range 1 6) (\\x -> if x % 2 = 0 then {x} else {})")
    assert alpha_equal(core.bindings[0].value, want)


@pytest.mark.parametrize(
    "src, error, message",
    [
        ("x := y.", ScopeError, "'y' is not in scope"),
        ("x := 1.\nx := 2.\ntrue.", DesugarError, "defined more than once"),
        ("a/1 :: constructor.\na := 2.\ntrue.", DesugarError, "already declared as a constructor"),
    ],
)
def test_desugar_errors(src, error, message):
    with pytest.raises(error, match=message):
        desugar_source(src)


def test_error_carries_location():
    with pytest.raises(ScopeError) as info:
        desugar_source("x := 1.\ny := zz.", "spec.fml")
    assert str(info.value).startswith("spec.fml:2:6:")
