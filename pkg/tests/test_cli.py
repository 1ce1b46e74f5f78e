import json

import pytest

from fms.cli import EXIT_INTERNAL, EXIT_OK, EXIT_UNSAT, EXIT_USER, run

from conftest import FUNCTION_SET, MINUS_ONE, COLORING


@pytest.fixture
def spec(tmp_path):
    def write(text, name="spec.fml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_solve_all_models(spec, capsys):
    assert run(["solve", spec(COLORING), "-n", "0", "--backend", "builtin"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("Model ") == 6
    assert out.rstrip().endswith("Models: 6")


def test_solve_default_is_one_model(spec, capsys):
    assert run(["solve", spec(COLORING), "--backend", "builtin"]) == EXIT_OK
    assert "Models: 1" in capsys.readouterr().out


def test_solve_json(spec, capsys):
    assert run(["solve", spec(FUNCTION_SET), "-n", "0", "--json-models", "--backend", "builtin"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    doc = json.loads(lines[0])
    assert doc["model"]["c"] == 3 and doc["model"]["d"] == 3
    assert lines[-1] == "Models: 1"


def test_unsat_exit(spec, capsys):
    assert run(["solve", spec("x :: element of {1..2}.\nx > 5."), "--backend", "builtin"]) == EXIT_UNSAT
    assert "Models: 0" in capsys.readouterr().out


def test_type_error_exit(spec, capsys):
    path = spec('1 + "a".', "bad.fml")
    assert run(["check", path]) == EXIT_USER
    err = capsys.readouterr().err
    assert "bad.fml:1:5: typecheck error" in err
    assert "Traceback" not in err


def test_non_boolean_specification(spec, capsys):
    assert run(["check", spec("1 + 2.")]) == EXIT_USER
    assert "must be boolean" in capsys.readouterr().err


def test_syntax_error_exit(spec, capsys):
    assert run(["solve", spec("x := .")]) == EXIT_USER
    assert "parse error" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert run(["check", str(tmp_path / "absent.fml")]) == EXIT_USER
    assert "cannot read" in capsys.readouterr().err


def test_solver_without_answer_is_internal(spec, capsys):
    assert run(["solve", spec(COLORING), "--backend", "builtin", "--timeout", "0"]) == EXIT_INTERNAL
    assert "without an answer" in capsys.readouterr().err


def test_check_dump_types(spec, capsys):
    assert run(["check", spec(COLORING), "--dump-types"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "colorof :: String -> Int" in out
    assert out.rstrip().endswith("ok: Bool")


def test_dumps(spec, capsys):
    path = spec(COLORING)
    assert run(["solve", path, "--dump-core", "--dump-core-opt", "--dump-types", "--backend", "builtin"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "-- core\n" in out and "-- core (optimized)" in out and "-- types" in out


def test_emit_asp_to_file(spec, tmp_path, capsys):
    target = tmp_path / "out.lp"
    assert run(["emit-asp", spec(COLORING), "-o", str(target)]) == EXIT_OK
    text = target.read_text()
    assert text.rstrip().endswith(":-not bool(X),result(X).")
    assert len(text.splitlines()) == 15


def test_solve_emit_asp_stdout(spec, capsys):
    assert run(["solve", spec("true."), "--emit-asp", "-", "--backend", "builtin"]) == EXIT_OK
    assert "result(b0)." in capsys.readouterr().out


def test_eval_full_language(spec, capsys):
    path = spec(MINUS_ONE + "r := minusOne (s nil).\ntrue.\n")
    assert run(["eval", path]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert "r = nil" in out
    assert out[-1] == "true"


def test_eval_core(spec, capsys):
    assert run(["eval", "--core", spec('4 + OutputExp("a", 5)', "t.core")]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["a = 5", "9"]


def test_eval_refuses_declarations(spec, capsys):
    assert run(["eval", spec(COLORING)]) == EXIT_USER
    assert "can only be solved" in capsys.readouterr().err


def test_unsupported_construct_is_a_user_error(spec, capsys):
    assert run(["solve", spec("s :: subset of {1..3}.\ncard s = 2.")]) == EXIT_USER
    assert "translate error" in capsys.readouterr().err


def test_no_optimize_gives_same_models(spec, capsys):
    path = spec(COLORING)
    run(["solve", path, "-n", "0", "--backend", "builtin"])
    optimized = capsys.readouterr().out
    run(["solve", path, "-n", "0", "--backend", "builtin", "--no-optimize"])
    assert capsys.readouterr().out == optimized


def test_int_range_flag_parses(spec, capsys):
    assert run(["solve", spec(COLORING), "--backend", "builtin", "--int-range", "0..10"]) == EXIT_OK
    with pytest.raises(SystemExit):
        run(["solve", spec(COLORING), "--int-range", "5..1"])


def test_negative_model_count_rejected(spec):
    with pytest.raises(SystemExit):
        run(["solve", spec(COLORING), "-n", "-1"])


def test_output_is_deterministic(spec, capsys):
    path = spec(FUNCTION_SET)
    run(["solve", path, "-n", "0", "--backend", "builtin", "--dump-core-opt"])
    first = capsys.readouterr().out
    run(["solve", path, "-n", "0", "--backend", "builtin", "--dump-core-opt"])
    assert capsys.readouterr().out == first
