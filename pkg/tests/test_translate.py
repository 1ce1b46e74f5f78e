import pytest

from fms.asp.reader import parse_program
from fms.asp.syntax import Atom, print_program
from fms.core import ast as C
from fms.core.reader import read_core
from fms.errors import UnsupportedResidual
from fms.pipeline import compile_source, solve_source
from fms.translate import defunctionalize, derive_relevant_domain, mangle, translate, unmangle

from aspiso import canonical, isomorphic
from conftest import FUNCTION_SET, COLORING, COLORING_ASP


def emitted(src):
    return print_program(compile_source(src).program)


def test_trivial_specification():
    assert emitted("true.") == "bool(b0).\nresult(b0).\n:-not bool(X),result(X).\n"


def test_anchor_is_emitted_once_and_printed_last():
    lines = emitted(COLORING).splitlines()
    assert lines[-1] == ":-not bool(X),result(X)."
    assert lines.count(":-not bool(X),result(X).") == 1


def test_never_applied_function_has_no_relevant_domain():
    text = emitted("f x := x + 1.\ntrue.")
    assert "lamDom(l0," not in text.replace(":-lamDom(l0,", "")
    assert "lamInter(l0,X0,X0+1):-lamDom(l0,X0)." in text


def test_relevant_domain_of_graph_coloring():
    core = compile_source(COLORING).optimized
    sites = derive_relevant_domain(core)
    assert [name for name, _ in sites] == ["l0", "l0"]
    heads = sorted(str(r.head) for _, r in sites)
    assert heads == ["lamDom(l0,X4)", "lamDom(l0,X5)"]


def test_element_declaration_uses_val():
    text = emitted("c :: element of {1..2}.\nc = 1.")
    assert "{val(v0,X1):member(s0,X1)}=1." in text
    assert len(solve_source("c :: element of {1..2}.\nc = 1.", 0, "builtin")) == 1


def test_scalar_definitions_are_facts():
    assert "val(v0,1)." in emitted("x := 1.\nx > 0.")


@pytest.mark.parametrize(
    "src",
    [
        "s :: subset of {1..3}.\ncard s = 2.",
        "a :: subset of {1..2}.\nb :: subset of {1..2}.\na = b.",
    ],
)
def test_unsupported_constructs(src):
    with pytest.raises(UnsupportedResidual):
        compile_source(src)


def test_repeated_lookups_share_a_variable():
    src = "q/1 :: function to {1..3}.\n! {1..3} (\\x -> q x ~= 2 & q x ~= 3)."
    text = emitted(src)
    rule = next(line for line in text.splitlines() if "!=2" in line)
    assert rule.count("lamInter") == 1


def test_identical_rules_are_emitted_once():
    lines = emitted(FUNCTION_SET).splitlines()
    assert len(lines) == len(set(lines))


def test_defunctionalize_names_set_elements():
    e = read_core("let s := {\\x -> x, \\y -> y + 1} in forall s (\\f -> f 1 > 0)")
    out = defunctionalize(e)
    set_lit = next(n for n in C.walk(out) if isinstance(n, C.SetLit))
    assert all(isinstance(el, C.Var) for el in set_lit.elements)


@pytest.mark.parametrize("tag", ["a", "nil", "s0", "b12", "Cons", "c_x", "true", "not"])
def test_mangle_round_trip(tag):
    assert unmangle(mangle(tag)) == tag


def test_mangle_avoids_generated_names():
    assert mangle("s0") != "s0"
    assert mangle("nil") == "nil"


def test_translation_is_deterministic():
    assert emitted(FUNCTION_SET) == emitted(FUNCTION_SET)


def test_isomorphism_checker_notices_a_changed_rule():
    ref = parse_program(COLORING_ASP).rules
    changed = parse_program(COLORING_ASP.replace("X6<>X7", "X6=X7")).rules
    assert isomorphic(ref, ref)
    assert not isomorphic(changed, ref)


def test_isomorphism_checker_renames_generated_names():
    ref = parse_program(COLORING_ASP).rules
    swapped = parse_program(COLORING_ASP.replace("s0", "sT").replace("s1", "s0").replace("sT", "s1")).rules
    assert isomorphic(swapped, ref)


def test_canonical_ignores_body_order_and_variable_names():
    a = parse_program("p(X):-q(X,Y),not r(Y).\n").rules[0]
    b = parse_program("p(A):-not r(B),q(A,B).\n").rules[0]
    assert canonical(a) == canonical(b)


def test_translate_accepts_core_directly():
    prog = translate(read_core("forall (range 1 3) (\\x -> x > 0)"))
    assert any(isinstance(r.head, Atom) and r.head.pred == "result" for r in prog.rules)
    assert len(solve_source("! {1..3} (\\x -> x > 0).", 0, "builtin")) == 1
