import pytest

from fms.core.reader import read_core
from fms.errors import FmsTypeError
from fms.frontend import desugar_source
from fms.typecheck import (
    TBool,
    builtin_scheme,
    check_preservation,
    infer,
    infer_with_bindings,
    schemes_equivalent,
    show_scheme,
)

from conftest import FUNCTION_SET, COLORING, nqueens


@pytest.mark.parametrize(
    "name, shown",
    [
        ("forall", "∀a. Set a -> (a -> Bool) -> Bool"),
        ("bind", "∀a b. Set a -> (a -> Set b) -> Set b"),
        ("member", "∀a. a -> Set a -> Bool"),
        ("ite", "∀a. Bool -> a -> a -> a"),
        ("range", "Int -> Int -> Set Int"),
        ("card", "∀a. Set a -> Int"),
    ],
)
def test_builtin_schemes(name, shown):
    assert show_scheme(builtin_scheme(name)) == shown


@pytest.mark.parametrize(
    "text, shown",
    [
        ("\\x -> x", "∀a. a -> a"),
        ("\\f -> \\x -> f (f x)", "∀a. (a -> a) -> a -> a"),
        ("let id := \\x -> x in (id 1, id true)", "(Int, Bool)"),
        ("range 1 3", "Set Int"),
        ("bind {1} (\\x -> {(x, \"s\")})", "Set (Int, String)"),
        ("s[nil[]]", "Data"),
    ],
)
def test_inferred_types(text, shown):
    assert show_scheme(infer(read_core(text))) == shown


@pytest.mark.parametrize(
    "text, message",
    [
        ("\\x -> x x", "infinite type"),
        ("(1, true) = (1, 2)", "cannot unify Bool with Int"),
        ("let a := s[1]; b := s[true] in a", "cannot unify"),
        ("1 + \"a\"", "cannot unify Int with String"),
        ("ite 1 2 3", "cannot unify"),
    ],
)
def test_type_errors(text, message):
    with pytest.raises(FmsTypeError, match=message):
        infer(read_core(text))


def test_let_polymorphism_through_recursion_group():
    scheme = infer(read_core("let f := \\x -> f x in f"))
    assert len(scheme.quantified) == 2


def test_schemes_compare_up_to_renaming():
    a = infer(read_core("\\x -> \\y -> x"))
    b = infer(read_core("\\p -> \\q -> p"))
    assert schemes_equivalent(a, b)


@pytest.mark.parametrize("src", [FUNCTION_SET, COLORING, nqueens(4)])
def test_specifications_are_boolean(src):
    scheme, bindings = infer_with_bindings(desugar_source(src))
    assert scheme.body == TBool
    assert bindings


def test_binding_types_of_graph_coloring():
    _, bindings = infer_with_bindings(desugar_source(COLORING))
    shown = {k: show_scheme(v) for k, v in bindings.items()}
    assert shown == {"borders": "Set (String, String)", "colors": "Set Int", "colorof": "String -> Int"}


def test_check_preservation_reports_ill_typed_output():
    before = read_core("1 + 2")
    assert check_preservation(before, read_core("3"))
    assert not check_preservation(before, read_core("1 + true"))
