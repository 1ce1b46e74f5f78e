"""Shared FML sources, the clingo skip marker and the acceptance report."""

from __future__ import annotations

import sys

import pytest

from fms.asp.clingo import clingo_available

FUNCTION_SET = """\
c :: element of {3..5}.
d :: element of {3..5}.

s := {\\x -> x * 2, \\x -> x + c, \\x -> x * c}.

! s (\\f -> f d < 10).
"""

MINUS_ONE = """\
s/1 :: constructor.
nil/0 :: constructor.

minusOne x := case x of
\t\ts [ a ] -> a;
\t\tnil []    -> nil;.
"""

COLORING = """\
//Definitions of given sets
borders := {("a","b"), ("b","c"), ("c","a")}.
colors := {1..3}.

//Declaration of the interpretation we are looking for
colorof/1 :: function to colors.

//Constraint: For all borders (x,y) the color of x
//            should be different than that of y
! borders (\\(x,y) -> colorof x ~= colorof y).
"""

# Reference translation of COLORING, one rule per line.
COLORING_ASP = """\
:-not bool(X),result(X).
member(s0,X0):-X0=1..3.
out("colors",s0).
{lamInter(l0,X2,X1):member(s0,X1)}==1:-lamDom(l0,X2).
out("colorof",l0).
member(s1,("a","b")).
member(s1,("b","c")).
member(s1,("c","a")).
out("borders",s1).
lamDom(l0,X4):-member(s1,X3),(X4,X5)=X3.
lamDom(l0,X5):-member(s1,X3),(X4,X5)=X3.
bool((b0,X3)):-X6<>X7,lamInter(l0,X4,X6),member(s1,X3),(X4,X5)=X3,lamInter(l0,X5,X7).
bool(b1):-not bool((b0,X3)),member(s1,X3).
bool(b2):-not bool(b1).
result(b2).
"""

COLORING_MODEL = """\
{borders=[(a,b), (b,c), (c,a)],
 colorof=[(a,1), (b,3), (c,2)],
 colors=[1, 2, 3]
}"""


def nqueens(n: int) -> str:
    return f"""\
domain := {{1..{n}}}.

solution1/1 :: function to domain.
solution2/1 :: function to domain.

alldiff solution f := ! domain (\\x ->
                        ! domain (\\y -> x ~= y => f x ~= f y)).

nqueens solution := ! {{
                        solution,
                        \\x -> x - solution x,
                        \\x -> x + solution x
                      }} (alldiff solution).
nqueens solution1.
nqueens solution2.
! domain (\\x -> solution1 x ~= solution2 x).
"""


# The evaluator raises the limit itself; doing it up front keeps hypothesis quiet.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

needs_clingo = pytest.mark.skipif(not clingo_available(), reason="clingo is not installed")


# -- acceptance report ----------------------------------------------------------

CRITERIA = {
    1: "graph coloring end-to-end",
    2: "higher-order quantification",
    3: "desugaring goldens",
    4: "optimization goldens",
    5: "translation golden",
    6: "oracle equivalence",
    7: "n-queens disjoint pair",
    8: "semantics preservation",
    9: "backend agreement",
    10: "evaluator checks",
}

_outcomes: dict = {}


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(number, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        results = _outcomes.get(number)
        if results is None:
            verdict = "NOT RUN"
        elif "failed" in results:
            verdict = "FAIL"
        elif all(r == "skipped" for r in results):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"criterion {number:>2} {verdict:<7} {title}")
