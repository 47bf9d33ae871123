from collections import Counter

import pytest
from hypothesis import given, settings

from holectx.statics import (
    AliasEnv, CyclicAlias, check_repo, consistent, get_expected_type, get_static_errors, get_typing_context,
    normalize,
)
from holectx.syntax import HoleNotFound, parse_repo, parse_type, print_type
from holectx.syntax import ast as A
from oracles import ProgramGenerator, cons, norm, reference_error_kinds
from test_syntax import type_strategy


def check(src):
    return check_repo(parse_repo([("main.sl", src)]))


def error_kinds(src):
    return [e.kind for e in check(src)[1]]


def emoji_aliases(task):
    typed, _ = check_repo(task.repo)
    return typed.hole_info(task.hole_id).aliases


class TestCheckRepo:
    def test_reference_solution_is_clean(self, emojipaint):
        assert check_repo(emojipaint.filled(emojipaint.reference))[1] == []

    def test_unbound_variable(self):
        (e,) = check("let f: Int -> Int = fun x -> grid end in")[1]
        assert e.kind == "UnboundVariable" and "grid" in e.message

    def test_annotation_mismatch(self):
        (e,) = check("let x: Int = true in x")[1]
        assert e.kind == "TypeInconsistency"
        assert (e.expected, e.got) == (A.INT, A.BOOL)

    def test_error_line_format(self):
        (e,) = check("let x: Int = true in x")[1]
        assert str(e).startswith("TypeInconsistency at main.sl:1:14: ")

    def test_recovery_reports_several_errors(self):
        assert error_kinds("let a: Int = b in let c: Bool = 1 in let d: Int = Nope in") == [
            "UnboundVariable", "TypeInconsistency", "UnboundConstructor",
        ]

    def test_errors_in_source_order_across_files(self):
        repo = parse_repo([("a.sl", "let a: Int = true in"), ("b.sl", "let b: Int = zz in")])
        assert [e.span.file for e in check_repo(repo)[1]] == ["a.sl", "b.sl"]

    def test_unbound_alias(self):
        assert error_kinds("let x: Bogus = 1 in") == ["UnboundTypeAlias"]

    def test_duplicate_constructor(self):
        assert error_kinds("type T = A + A in") == ["DuplicateConstructor"]

    def test_arity_mismatch(self):
        assert error_kinds("let p: (Int, Int) = (1, 2, 3) in") == ["ArityMismatch"]
        assert error_kinds("type T = A(Int) + B in let t: T = A in") == ["ArityMismatch"]

    def test_inexhaustive_match(self):
        src = "type T = A + B + C in let f: T -> Int = fun t -> case t | A => 1 | B => 2 end end in"
        assert error_kinds(src) == ["InexhaustiveMatch"]

    def test_inexhaustive_list_match(self):
        src = "let f: [Int] -> Int = fun xs -> case xs | x::_ => x end end in"
        assert error_kinds(src) == ["InexhaustiveMatch"]

    def test_exhaustive_nested_match(self):
        src = ("type T = A(Bool) + B in let f: T -> Int = fun t -> case t "
               "| A(true) => 1 | A(false) => 2 | B => 3 end end in")
        assert error_kinds(src) == []

    def test_error_spans_lie_in_their_file(self, tasks):
        for task in tasks:
            repo = task.filled("fun (model, action) -> nope end")
            for e in check_repo(repo)[1]:
                assert e.span.file in [f.path for f in repo.files]

    def test_recursive_sum_alias(self):
        src = ("type L = Nil + Node((Int, L)) in let len: L -> Int = fun l -> case l "
               "| Nil => 0 | Node((_, rest)) => 1 + len(rest) end end in len(Node((1, Nil)))")
        assert error_kinds(src) == []

    def test_cyclic_alias_reported(self):
        assert "CyclicAlias" in error_kinds("type A = A in")


class TestExpectedType:
    def test_update_hole(self, emojipaint):
        typed, _ = check_repo(emojipaint.repo)
        assert print_type(get_expected_type(typed, emojipaint.hole_id)) == "(Model, Action) -> Model"

    def test_under_lambda(self):
        typed, _ = check("let f: Int -> Int = fun x -> ?? end in f")
        assert get_expected_type(typed, 1) == A.INT

    def test_unknown_annotation(self):
        typed, _ = check("let y: ? = ?? in y")
        assert get_expected_type(typed, 1) == A.Unknown()

    def test_synthetic_position_is_unknown(self):
        typed, _ = check("let y: Int = ?(3) in y")
        assert get_expected_type(typed, 1) == A.Unknown()

    def test_missing_hole(self, emojipaint):
        typed, _ = check_repo(emojipaint.repo)
        with pytest.raises(HoleNotFound):
            get_expected_type(typed, 42)

    def test_stable_under_filling_other_holes(self):
        typed, _ = check("let a: Int = ? in let b: (Int, Bool) = (a, ??) in")
        before = get_expected_type(typed, 2)
        typed2, _ = check("let a: Int = 5 in let b: (Int, Bool) = (a, ??) in")
        assert get_expected_type(typed2, 1) == before == A.BOOL


class TestTypingContext:
    def test_emojipaint_bindings(self, emojipaint):
        typed, _ = check_repo(emojipaint.repo)
        ctx = {h.name: print_type(h.type) for h in get_typing_context(typed, emojipaint.hole_id)}
        assert ctx["model_init"] == "Model"
        assert ctx["updateGrid"] == "(Grid, Row, Col, Emoji) -> Grid"
        assert ctx["clearGrid"] == "Grid -> Grid"
        assert ctx["fillRowInGrid"] == "(Grid, Row, Emoji) -> Grid"

    def test_self_binding_flagged(self, emojipaint):
        typed, _ = check_repo(emojipaint.repo)
        (me,) = [h for h in get_typing_context(typed, emojipaint.hole_id) if h.name == "update"]
        assert me.is_self and me.locality == 0

    def test_empty_repo(self):
        typed, _ = check("?")
        assert get_typing_context(typed, 1) == []

    def test_shadowing_keeps_nearest(self):
        typed, _ = check("let x: Int = 1 in let x: Bool = true in ?")
        (h,) = get_typing_context(typed, 1)
        assert (h.name, h.type) == ("x", A.BOOL)

    def test_nearest_first_and_unique_locality(self):
        typed, _ = check("let a: Int = 1 in let b: Int = 2 in fun (c, d) -> ? end")
        ctx = get_typing_context(typed, 1)
        assert [h.name for h in ctx] == ["d", "c", "b", "a"]
        assert [h.locality for h in ctx] == [0, 1, 2, 3]


class TestConsistencyAndNormalization:
    def test_unknown_matches_anything(self):
        assert consistent(A.Unknown(), parse_type("(Grid, Emoji, [Emoji])"))

    def test_grid_normalizes_to_string_lists(self, emojipaint):
        aliases = emoji_aliases(emojipaint)
        grid = normalize(A.AliasRef("Grid"), aliases)
        assert grid == parse_type("[[String]]")
        assert consistent(grid, parse_type("[[String]]"), aliases)

    def test_result_mismatch(self):
        assert not consistent(parse_type("Int -> Int"), parse_type("Int -> Bool"))

    def test_sums_compare_constructor_sets(self):
        assert consistent(parse_type("A + B(Int)"), parse_type("B(?) + A"))
        assert not consistent(parse_type("A + B"), parse_type("A + C"))

    def test_model_normal_form(self, emojipaint):
        aliases = emoji_aliases(emojipaint)
        assert normalize(A.AliasRef("Model"), aliases) == parse_type("([[String]], String, [String])")

    def test_base_fixpoint(self):
        assert normalize(A.INT) == A.INT

    def test_degenerate_cycle(self):
        with pytest.raises(CyclicAlias):
            normalize(A.AliasRef("A"), AliasEnv.of({"A": A.AliasRef("A")}))

    def test_cycle_through_sum_is_allowed(self):
        env = AliasEnv.of({"L": parse_type("Nil + Cons((Int, L))")})
        n = normalize(A.AliasRef("L"), env)
        assert normalize(n, env) == n


ALIASES = AliasEnv.of({"Grid": parse_type("[[String]]")})


@settings(max_examples=400, deadline=None)
@given(type_strategy())
def test_consistency_reflexive(t):
    assert consistent(t, t, ALIASES)


@settings(max_examples=400, deadline=None)
@given(type_strategy(), type_strategy())
def test_consistency_symmetric(a, b):
    assert consistent(a, b, ALIASES) == consistent(b, a, ALIASES)


@settings(max_examples=400, deadline=None)
@given(type_strategy(), type_strategy())
def test_consistency_matches_reference(a, b):
    aliases = {"Grid": parse_type("[[String]]")}
    assert consistent(a, b, ALIASES) == cons(norm(a, aliases), norm(b, aliases))


@settings(max_examples=400, deadline=None)
@given(type_strategy())
def test_unknown_consistent_with_all(t):
    assert consistent(A.Unknown(), t, ALIASES) and consistent(t, A.Unknown(), ALIASES)


@settings(max_examples=400, deadline=None)
@given(type_strategy())
def test_normalize_idempotent(t):
    once = normalize(t, ALIASES)
    assert normalize(once, ALIASES) == once


def test_static_errors_wraps_syntax_errors():
    (e,) = get_static_errors([("u.sl", "let f: Int -> Int = fun x -> match x with | 0 -> 1 end in")])
    assert e.kind == "SyntaxError"
    assert "match" in e.message or "with" in e.message


def test_static_errors_on_inconsistent_model(emojipaint):
    repo = emojipaint.filled("fun (model, action) -> model + 1 end")
    errors = get_static_errors(repo)
    assert any(e.kind == "TypeInconsistency" and "model" in e.message for e in errors)


@pytest.mark.parametrize("seed", range(0, 300))
def test_checker_agrees_with_reference_sample(seed):
    repo = parse_repo([("gen.sl", ProgramGenerator(seed).repo_source())])
    assert Counter(e.kind for e in check_repo(repo)[1]) == reference_error_kinds(repo)
