import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holectx.syntax import (
    HoleNotFound, LexError, ParseError, generative_hole, hole_at, parse_repo, parse_type, print_repo,
    print_type, substitute_hole, tokenize,
)
from holectx.syntax import ast as A
from holectx.syntax.parser import parse_expr
from holectx.syntax.printer import print_expr
from oracles import ProgramGenerator


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src) if t.kind != "eof"]


class TestTokenize:
    def test_let_binding(self):
        assert kinds("let x: Int = 3 in x") == [
            ("keyword", "let"), ("ident", "x"), ("punct", ":"), ("uident", "Int"), ("punct", "="),
            ("int", "3"), ("keyword", "in"), ("ident", "x"),
        ]

    def test_generative_hole_token(self):
        assert ("genhole", "??") in kinds("fun xs -> ?? end")

    def test_plain_hole_token(self):
        assert ("hole", "?") in kinds("let y: Int = ? in y")

    def test_illegal_character(self):
        with pytest.raises(LexError) as info:
            tokenize("\x01")
        assert (info.value.span.start_line, info.value.span.start_col) == (1, 1)

    def test_spans_are_one_based(self):
        toks = tokenize("let\n  x")
        assert (toks[1].span.start_line, toks[1].span.start_col) == (2, 3)

    def test_comments_are_skipped(self):
        assert kinds("(* note *) 1") == [("int", "1")]


class TestParseRepo:
    def test_type_definition(self):
        repo = parse_repo([("t.sl", "type Emoji = String in")])
        assert repo.definitions == [A.TypeDef("Emoji", A.STRING)]

    def test_generative_hole_definition(self):
        repo = parse_repo([("u.sl", "let update: (Model, Action) -> Model = ?? in")])
        (d,) = repo.definitions
        assert d.name == "update"
        assert d.bound == A.Hole(1, True)
        assert print_type(d.annotation) == "(Model, Action) -> Model"

    def test_missing_annotation_and_body(self):
        with pytest.raises(ParseError):
            parse_repo([("x.sl", "let x = in")])

    def test_trailing_in_is_optional(self):
        a = parse_repo([("a.sl", "let x: Int = 1 in")])
        b = parse_repo([("a.sl", "let x: Int = 1")])
        assert a == b

    def test_holes_numbered_in_preorder_across_files(self):
        repo = parse_repo([
            ("a.sl", "let a: Int = ? in let b: (Int, Int) = (?, ?) in"),
            ("b.sl", "let c: Int = ?? in"),
        ])
        assert [(h.id, h.generative) for h in repo.holes()] == [(1, False), (2, False), (3, False), (4, True)]

    def test_two_generative_holes_rejected(self):
        with pytest.raises(ParseError):
            parse_repo([("a.sl", "let a: Int = ?? in let b: Int = ?? in")])

    def test_comment_attached_to_definition(self, emojipaint):
        (d,) = emojipaint.repo.file("update.sl").definitions
        assert "Update the EmojiPaint app model" in d.comment

    def test_duplicate_pattern_variable_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("fun (x, x) -> x end")

    def test_match_with_is_a_parse_error(self):
        with pytest.raises(ParseError) as info:
            parse_repo([("u.sl", "let f: Int -> Int = fun x -> match x with | 0 -> 1 end in")])
        assert info.value.message


class TestSubstitute:
    def test_reference_fills_the_hole(self, emojipaint):
        repo = substitute_hole(emojipaint.repo, emojipaint.hole_id, emojipaint.reference)
        assert repo.holes() == []

    def test_truncated_fragment(self, emojipaint):
        with pytest.raises(ParseError):
            substitute_hole(emojipaint.repo, emojipaint.hole_id, "case model, action |")

    def test_hole_for_hole(self, emojipaint):
        repo = substitute_hole(emojipaint.repo, emojipaint.hole_id, "?")
        holes = repo.holes()
        assert len(holes) == 1 and not holes[0].generative

    def test_unknown_hole(self, emojipaint):
        with pytest.raises(HoleNotFound):
            substitute_hole(emojipaint.repo, 99, "1")

    def test_substituting_the_hole_text_is_identity(self, emojipaint):
        again = substitute_hole(emojipaint.repo, emojipaint.hole_id, "??")
        assert again == emojipaint.repo

    def test_hole_at_position(self, emojipaint):
        gen = generative_hole(emojipaint.repo)
        assert hole_at(emojipaint.repo, "update.sl", gen.span.start_line, gen.span.start_col) == gen.id


class TestPrintType:
    def test_arrow_over_product(self):
        t = A.Arrow(A.Product((A.AliasRef("Model"), A.AliasRef("Action"))), A.AliasRef("Model"))
        assert print_type(t) == "(Model, Action) -> Model"

    def test_nested_lists(self):
        assert print_type(A.ListOf(A.ListOf(A.AliasRef("Emoji")))) == "[[Emoji]]"

    def test_unknown(self):
        assert print_type(A.Unknown()) == "?"

    @pytest.mark.parametrize("src", [
        "Int -> Int -> Int", "(Int -> Int) -> Int", "[(Int, ?)]", "A + B(Int) + C((Int, Int))",
        "(Int, Bool -> String)", "[A + B] -> ?",
    ])
    def test_round_trip(self, src):
        t = parse_type(src)
        assert parse_type(print_type(t)) == t


def type_strategy():
    leaves = st.sampled_from([A.INT, A.BOOL, A.STRING, A.FLOAT, A.Unknown(), A.AliasRef("Grid")])

    def extend(inner):
        ctor_names = st.lists(st.sampled_from(["Aa", "Bb", "Cc", "Dd"]), min_size=1, max_size=3, unique=True)
        return st.one_of(
            st.builds(A.Arrow, inner, inner),
            st.builds(lambda xs: A.Product(tuple(xs)), st.lists(inner, min_size=2, max_size=3)),
            st.builds(A.ListOf, inner),
            ctor_names.flatmap(lambda names: st.builds(
                lambda args: A.Sum(tuple(zip(names, args))),
                st.lists(st.none() | inner, min_size=len(names), max_size=len(names)))),
        )

    return st.recursive(leaves, extend, max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(type_strategy())
def test_type_print_parse_round_trip(t):
    assert parse_type(print_type(t)) == t


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_repo_print_parse_round_trip(seed):
    src = ProgramGenerator(seed).repo_source()
    repo = parse_repo([("gen.sl", src)])
    again = parse_repo(print_repo(repo))
    assert again == repo
    assert [h.id for h in again.holes()] == list(range(1, len(repo.holes()) + 1))


@pytest.mark.parametrize("src", [
    "1 + 2 * 3", "(1 + 2) * 3", "f(a, b)(c)", "x :: y :: []", "a ++ b ++ c", "-1 - -2",
    "fun (a, _) -> a end", "if a then b else c", "Ctor((1, 2))", "1 - (2 - 3)", "\"q\\\"uote\\n\"",
])
def test_expression_round_trip(src):
    e = parse_expr(src)
    assert parse_expr(print_expr(e)) == e
