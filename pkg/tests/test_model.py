import json

import pytest

from fms.asp.reader import parse_atom
from fms.asp.result import AnswerSet
from fms.errors import AmbiguousScalar, DanglingOutput
from fms.model import (
    FunctionGraph,
    Herbrand,
    ModelRenderOptions,
    Scalar,
    SetOfValues,
    reinterpret,
    render,
    show,
)
from fms.pipeline import solve_source

from conftest import COLORING_MODEL, FUNCTION_SET, COLORING

JSON = ModelRenderOptions("json")


def answer(*atoms):
    return AnswerSet(frozenset(parse_atom(a) for a in atoms))


def test_reference_answer_set_renders_as_documented():
    a = answer(
        "result(b2)", 'bool((b0,("a","b")))', 'bool((b0,("b","c")))', 'bool((b0,("c","a")))', "bool(b2)",
        'lamDom(l0,"a")', 'lamDom(l0,"b")', 'lamDom(l0,"c")',
        'lamInter(l0,"a",1)', 'lamInter(l0,"b",3)', 'lamInter(l0,"c",2)',
        "member(s0,1)", "member(s0,2)", "member(s0,3)",
        'member(s1,("a","b"))', 'member(s1,("b","c"))', 'member(s1,("c","a"))',
        'out("borders",s1)', 'out("colorof",l0)', 'out("colors",s0)',
    )
    assert render(reinterpret(a)) == COLORING_MODEL


def test_empty_model():
    assert render(reinterpret(answer("result(b0)", "bool(b0)"))) == "{}"


def test_set_without_members_is_empty():
    m = reinterpret(answer('out("s",s0)'))
    assert m["s"] == SetOfValues(())
    assert render(m) == "{s=[]\n}"


def test_scalar_constructor_values():
    m = reinterpret(answer('out("n",v0)', "val(v0,s(s(z)))"))
    assert m["n"] == Scalar(Herbrand("s", (Herbrand("s", (Herbrand("z"),)),)))
    assert render(m) == "{n=s(s(z))\n}"


def test_mangled_tags_are_restored():
    m = reinterpret(answer('out("x",v0)', "val(v0,c_s0)"))
    assert m["x"] == Scalar(Herbrand("s0"))


def test_dangling_output():
    with pytest.raises(DanglingOutput):
        reinterpret(answer('out("x",v0)'))


def test_ambiguous_scalar():
    with pytest.raises(AmbiguousScalar):
        reinterpret(answer('out("x",v0)', "val(v0,1)", "val(v0,2)"))


def test_curried_function_is_flattened():
    m = reinterpret(answer('out("f",l0)', "lamInter(l0,1,(l1,1))", "lamInter((l1,1),2,5)"))
    assert m["f"] == FunctionGraph((((1, 2), 5),))


def test_functions_inside_sets_go_to_appendix():
    models = solve_source(FUNCTION_SET, 0, "builtin")
    (m,) = models
    assert render(m).startswith("{c=3,\n d=3,\n s=[l0, l1, l2]\n}")
    assert [name for name, _ in m.functions] == ["l0", "l1", "l2"]
    assert "functions:" in render(m)


def test_json_rendering():
    m = reinterpret(answer('out("s",s0)', "member(s0,(1,\"a\"))", 'out("x",v0)', "val(v0,true)"))
    doc = json.loads(render(m, JSON))
    assert doc == {"model": {"s": {"set": [{"tuple": [1, "a"]}]}, "x": True}}


@pytest.mark.parametrize(
    "value, text",
    [
        ((1, "a"), "(1,a)"),
        (SetOfValues((1, 2)), "[1, 2]"),
        (Herbrand("nil"), "nil"),
        (True, "true"),
    ],
)
def test_show(value, text):
    assert show(value) == text


def test_rendering_is_injective_on_coloring_models():
    models = solve_source(COLORING, 0, "builtin")
    texts = [render(m) for m in models]
    assert len(set(texts)) == len(texts) == 6
