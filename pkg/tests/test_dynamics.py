import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holectx.dynamics import (
    BoolV, EvalError, Indet, IntV, ListV, StringV, evaluate, run_tests, show,
)
from holectx.statics import check_repo
from holectx.syntax import ParseError, parse_repo
from holectx.syntax.parser import parse_expr
from oracles import ProgramGenerator


def ev(src, fuel=10_000):
    return evaluate(parse_repo([("m.sl", src)]), fuel=fuel)


class TestEvaluate:
    def test_arithmetic(self):
        assert ev("1 + 2") == IntV(3)

    def test_hole_comparison_is_indeterminate(self):
        assert isinstance(ev("?? == 3"), Indet)

    def test_clear_grid(self, emojipaint):
        body = parse_expr('clearGrid([["🌵", "🌵"], ["🌵", "🌵"]])')
        assert evaluate(emojipaint.repo, body) == ListV((ListV((StringV(""), StringV(""))),) * 2)

    def test_division_by_zero(self):
        with pytest.raises(EvalError):
            ev("1 / 0")

    def test_integer_division_truncates(self):
        assert ev("7 / 2") == IntV(3) and ev("(0 - 7) / 2") == IntV(-3)

    def test_fuel_exhaustion(self):
        v = ev("let loop: Int -> Int = fun n -> loop(n + 1) end in loop(0)", fuel=500)
        assert isinstance(v, Indet) and v.reason == "fuel"

    def test_recursion_and_lists(self):
        src = ("let sum: [Int] -> Int = fun xs -> case xs | [] => 0 | x::rest => x + sum(rest) end end in "
               "sum([1, 2, 3, 4])")
        assert ev(src) == IntV(10)

    def test_constructors_and_patterns(self):
        src = ("type Shape = Dot + Box((Int, Int)) in let area: Shape -> Int = fun s -> case s "
               "| Dot => 0 | Box((w, h)) => w * h end end in area(Box((3, 4)))")
        assert ev(src) == IntV(12)

    def test_strings(self):
        assert ev('"ab" ++ string_of_int(12)') == StringV("ab12")
        assert ev('String.length("héllo")') == IntV(5)

    def test_indet_propagates_through_data(self):
        assert isinstance(ev("List.length([?, 2]) + ?"), Indet)

    def test_equality_with_indet_is_indet(self):
        assert isinstance(ev("(1, ?) == (1, 2)"), Indet)
        assert isinstance(ev("(1, ?) == (2, 2)"), Indet)
        assert ev("(1, 3) == (2, 2)") == BoolV(False)

    def test_show(self):
        assert show(ev('(1, "a", [true])')) == '(1, "a", [true])'


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_evaluation_is_deterministic(seed):
    repo = parse_repo([("gen.sl", ProgramGenerator(seed).repo_source())])
    body = parse_expr("f0")

    def run():
        try:
            return show(evaluate(repo, body, fuel=5_000))
        except EvalError as e:
            return f"error {e}"

    assert run() == run()


@settings(max_examples=100, deadline=None)
@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_hole_free_arithmetic_is_determinate(a, b):
    v = ev(f"({a}) * 2 - ({b})".replace("(-", "(0 - "))
    assert v == IntV(a * 2 - b)


class TestRunTests:
    def test_reference_passes_everything(self, emojipaint):
        report = run_tests(emojipaint.filled(emojipaint.reference), emojipaint.tests_text)
        assert report.passed == report.total == 13

    def test_unfilled_sketch_is_indeterminate(self, emojipaint):
        report = run_tests(emojipaint.repo, emojipaint.tests_text)
        assert report.passed == 0
        assert {o.kind for o in report.outcomes} == {"Indet"}

    def test_broken_stamp_only_fails_stamp_tests(self, emojipaint):
        mutated = emojipaint.reference.replace(
            "(updateGrid(grid, row, col, selected), selected, emojis)", "(grid, selected, emojis)")
        assert mutated != emojipaint.reference
        report = run_tests(emojipaint.filled(mutated), emojipaint.tests_text)
        failed = {o.index for o in report.outcomes if o.kind != "Pass"}
        assert failed == {4, 6, 7}
        assert report.passed == report.total - 3

    def test_runtime_error_is_recorded(self):
        repo = parse_repo([("m.sl", "let f: Int -> Int = fun x -> x / 0 end in")])
        report = run_tests(repo, "test f(1) == 1 end\ntest true end")
        assert [o.kind for o in report.outcomes] == ["Error", "Pass"]

    def test_total_on_arbitrary_programs(self):
        for seed in range(60):
            repo = parse_repo([("gen.sl", ProgramGenerator(seed).repo_source())])
            report = run_tests(repo, "test f0 == f0 end\ntest f1 == 1 end", fuel=5_000)
            assert report.total == 2 and 0 <= report.passed <= 2

    def test_malformed_tests_file(self, emojipaint):
        with pytest.raises(ParseError):
            run_tests(emojipaint.repo, "test 1 ==")

    def test_report_json(self, emojipaint):
        data = json.loads(run_tests(emojipaint.filled(emojipaint.reference), emojipaint.tests_text).dumps())
        assert data["total"] == data["passed"] == 13
        assert len(data["outcomes"]) == 13

    def test_type_errors_do_not_block_evaluation(self):
        repo = parse_repo([("m.sl", "let f: Int -> Int = fun x -> x + 1 end in let g: Bool = 3 in")])
        assert check_repo(repo)[1]
        assert run_tests(repo, "test f(1) == 2 end").passed == 1
