"""Recursive-descent parser for SL.

Expression precedence, loosest to tightest:

    let / if                      (extend as far right as possible)
    ==  <  >                      left associative
    ::  ++                        right associative
    +  -                          left associative
    *  /                          left associative
    unary -
    application  f(a, b)          postfix
    atoms, fun ... end, case ... end

Parsing stops at the first error; there is no recovery.
"""

from __future__ import annotations

import dataclasses
from typing import Optional, Sequence

from . import ast as A
from .ast import Span
from .lexer import LexError, Lexer, Token


class ParseError(Exception):
    def __init__(self, span: Span, message: str, expected: Sequence[str] = ()):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message
        self.expected = tuple(expected)


class HoleCounter:
    def __init__(self) -> None:
        self.next_id = 1
        self.generative: Optional[Span] = None


_ATOM_START = ("literal", "identifier", "constructor", "(", "[", "fun", "case", "?", "??")
_EXPR_START = ("let", "if", "-") + _ATOM_START


class Parser:
    def __init__(self, source: str, file: str, holes: Optional[HoleCounter] = None):
        try:
            self.tokens, self.comments = Lexer(source, file).run()
        except LexError as e:
            raise ParseError(e.span, e.message) from None
        self.file = file
        self.i = 0
        self.holes = holes or HoleCounter()

    # ------------------------------------------------------------ utilities

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "keyword") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def prev_span(self) -> Span:
        return self.tokens[self.i - 1].span

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        self.fail([text])

    def fail(self, expected: Sequence[str]):
        t = self.tok
        found = "end of input" if t.kind == "eof" else f"'{t.text}'"
        msg = f"unexpected {found}; expected {' or '.join(repr(e) for e in expected)}"
        hint = delimiter_report(self.tokens)
        if hint:
            msg += ". " + hint
        raise ParseError(t.span, msg, expected)

    def span_from(self, start: Span) -> Span:
        return start.to(self.prev_span())

    # ---------------------------------------------------------------- files

    def parse_file(self, allow_body: bool = True) -> A.SourceFile:
        defs: list[A.Definition] = []
        body = None
        while self.tok.kind != "eof":
            start = self.tok.span
            if self.at("type"):
                defs.append(self.type_def())
            elif self.at("let") and self._annotated_let():
                defs.append(self.let_def())
            elif allow_body:
                body = self.expr()
                if self.tok.kind != "eof":
                    self.fail(["end of input"])
                break
            else:
                self.fail(["let", "type"])
            if self.at("in"):
                self.advance()
            elif self.tok.kind != "eof":
                self.fail(["in"])
            comment = self._comment_before(start, defs[-2].span if len(defs) > 1 else None)
            if comment is not None:
                defs[-1] = dataclasses.replace(defs[-1], comment=comment)
        return A.SourceFile(self.file, tuple(defs), body)

    def _annotated_let(self) -> bool:
        # Top-level `let` is a definition only when annotated; an
        # unannotated one starts the trailing body expression instead.
        depth = 0
        for t in self.tokens[self.i + 1:]:
            if t.kind == "eof":
                return True
            if t.text in ("(", "[") and t.kind == "punct":
                depth += 1
            elif t.text in (")", "]") and t.kind == "punct":
                depth -= 1
            elif depth == 0 and t.kind == "punct" and t.text in (":", "="):
                return t.text == ":"
        return True

    def _comment_before(self, start: Span, prev: Optional[Span]) -> Optional[str]:
        found = [
            c.text for c in self.comments
            if (c.span.end_line, c.span.end_col) < (start.start_line, start.start_col)
            and (prev is None or (c.span.start_line, c.span.start_col) > (prev.end_line, prev.end_col))
        ]
        return "\n".join(found) if found else None

    def type_def(self) -> A.TypeDef:
        start = self.expect("type").span
        if self.tok.kind != "uident" or self.tok.text in A.BASE_TYPES:
            self.fail(["type alias name"])
        name = self.advance().text
        self.expect("=")
        t = self.type_expr()
        return A.TypeDef(name, t, span=self.span_from(start))

    def let_def(self) -> A.LetDef:
        start = self.expect("let").span
        if self.tok.kind != "ident":
            self.fail(["identifier"])
        name = self.advance().text
        self.expect(":")
        ann = self.type_expr()
        self.expect("=")
        bound = self.expr()
        return A.LetDef(name, ann, bound, span=self.span_from(start))

    def tests(self) -> list[A.Expr]:
        out = []
        while self.tok.kind != "eof":
            self.expect("test")
            out.append(self.expr())
            self.expect("end")
        return out

    # ---------------------------------------------------------------- types

    def type_expr(self) -> A.TypeExpr:
        t = self.tok
        if self.at("+") or (t.kind == "uident" and t.text not in A.BASE_TYPES
                            and self.peek().text in ("(", "+") and self.peek().kind == "punct"):
            return self.sum_type()
        return self.arrow_type()

    def sum_type(self) -> A.Sum:
        start = self.tok.span
        if self.at("+"):
            self.advance()
        ctors = [self.summand()]
        while self.at("+"):
            self.advance()
            ctors.append(self.summand())
        return A.Sum(tuple(ctors), span=self.span_from(start))

    def summand(self):
        if self.tok.kind != "uident" or self.tok.text in A.BASE_TYPES:
            self.fail(["constructor name"])
        name = self.advance().text
        if self.at("("):
            start = self.advance().span
            items = [self.type_expr()]
            while self.at(","):
                self.advance()
                items.append(self.type_expr())
            self.expect(")")
            arg = items[0] if len(items) == 1 else A.Product(tuple(items), span=self.span_from(start))
            return name, arg
        return name, None

    def arrow_type(self) -> A.TypeExpr:
        start = self.tok.span
        dom = self.type_atom()
        if self.at("->"):
            self.advance()
            res = self.type_expr()
            return A.Arrow(dom, res, span=self.span_from(start))
        return dom

    def type_atom(self) -> A.TypeExpr:
        t = self.tok
        if t.kind == "uident":
            self.advance()
            if t.text in A.BASE_TYPES:
                return A.Base(t.text, span=t.span)
            return A.AliasRef(t.text, span=t.span)
        if t.kind == "hole":
            self.advance()
            return A.Unknown(span=t.span)
        if self.at("["):
            self.advance()
            elem = self.type_expr()
            self.expect("]")
            return A.ListOf(elem, span=self.span_from(t.span))
        if self.at("("):
            self.advance()
            items = [self.type_expr()]
            while self.at(","):
                self.advance()
                items.append(self.type_expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return A.Product(tuple(items), span=self.span_from(t.span))
        self.fail(["type"])

    # ------------------------------------------------------------- patterns

    def pattern(self) -> A.Pattern:
        start = self.tok.span
        head = self.pattern_atom()
        if self.at("::"):
            self.advance()
            tail = self.pattern()
            return A.PCons(head, tail, span=self.span_from(start))
        return head

    def pattern_atom(self) -> A.Pattern:
        t = self.tok
        if self.at("_"):
            self.advance()
            return A.PWild(span=t.span)
        if t.kind == "ident":
            self.advance()
            return A.PVar(t.text, span=t.span)
        if t.kind in ("int", "float", "string"):
            self.advance()
            return A.PLit(t.value, span=t.span)
        if self.at("true", "false"):
            self.advance()
            return A.PLit(t.text == "true", span=t.span)
        if self.at("-") and self.peek().kind in ("int", "float"):
            self.advance()
            n = self.advance()
            return A.PLit(-n.value, span=self.span_from(t.span))
        if self.at("["):
            self.advance()
            self.expect("]")
            return A.PNil(span=self.span_from(t.span))
        if self.at("("):
            self.advance()
            items = [self.pattern()]
            while self.at(","):
                self.advance()
                items.append(self.pattern())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return A.PTuple(tuple(items), span=self.span_from(t.span))
        if t.kind == "uident":
            self.advance()
            arg = None
            if self.at("("):
                start = self.advance().span
                items = [self.pattern()]
                while self.at(","):
                    self.advance()
                    items.append(self.pattern())
                self.expect(")")
                arg = items[0] if len(items) == 1 else A.PTuple(tuple(items), span=self.span_from(start))
            return A.PCtor(t.text, arg, span=self.span_from(t.span))
        self.fail(["pattern"])

    def checked_pattern(self) -> A.Pattern:
        start = self.tok.span
        p = self.pattern()
        names = A.pattern_vars(p)
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ParseError(self.span_from(start), f"variable '{dupes[0]}' is bound more than once in this pattern")
        return p

    # ---------------------------------------------------------- expressions

    def expr(self) -> A.Expr:
        t = self.tok
        if self.at("let"):
            self.advance()
            pat = self.checked_pattern()
            ann = None
            if self.at(":"):
                self.advance()
                ann = self.type_expr()
            self.expect("=")
            bound = self.expr()
            self.expect("in")
            body = self.expr()
            return A.Let(pat, ann, bound, body, span=self.span_from(t.span))
        if self.at("if"):
            self.advance()
            c = self.expr()
            self.expect("then")
            a = self.expr()
            self.expect("else")
            b = self.expr()
            return A.If(c, a, b, span=self.span_from(t.span))
        return self.comparison()

    def comparison(self) -> A.Expr:
        start = self.tok.span
        lhs = self.cons()
        while self.at("==", "<", ">"):
            op = self.advance().text
            rhs = self.cons()
            lhs = A.BinOp(op, lhs, rhs, span=self.span_from(start))
        return lhs

    def cons(self) -> A.Expr:
        start = self.tok.span
        lhs = self.additive()
        if self.at("::"):
            self.advance()
            return A.Cons(lhs, self.cons(), span=self.span_from(start))
        if self.at("++"):
            self.advance()
            return A.BinOp("++", lhs, self.cons(), span=self.span_from(start))
        return lhs

    def additive(self) -> A.Expr:
        start = self.tok.span
        lhs = self.multiplicative()
        while self.at("+", "-"):
            op = self.advance().text
            rhs = self.multiplicative()
            lhs = A.BinOp(op, lhs, rhs, span=self.span_from(start))
        return lhs

    def multiplicative(self) -> A.Expr:
        start = self.tok.span
        lhs = self.unary()
        while self.at("*", "/"):
            op = self.advance().text
            rhs = self.unary()
            lhs = A.BinOp(op, lhs, rhs, span=self.span_from(start))
        return lhs

    def unary(self) -> A.Expr:
        t = self.tok
        if self.at("-"):
            self.advance()
            operand = self.unary()
            span = self.span_from(t.span)
            if isinstance(operand, A.IntLit) and operand.value >= 0:
                return A.IntLit(-operand.value, span=span)
            if isinstance(operand, A.FloatLit) and operand.value >= 0:
                return A.FloatLit(-operand.value, span=span)
            return A.BinOp("-", A.IntLit(0, span=t.span), operand, span=span)
        return self.postfix()

    def postfix(self) -> A.Expr:
        start = self.tok.span
        e = self.atom()
        while self.at("("):
            arg = self.arguments()
            e = A.App(e, arg, span=self.span_from(start))
        return e

    def arguments(self) -> A.Expr:
        start = self.expect("(").span
        items = [self.expr()]
        while self.at(","):
            self.advance()
            items.append(self.expr())
        self.expect(")")
        if len(items) == 1:
            return items[0]
        return A.Tuple(tuple(items), span=self.span_from(start))

    def atom(self) -> A.Expr:
        t = self.tok
        k = t.kind
        if k == "int":
            self.advance()
            return A.IntLit(t.value, span=t.span)
        if k == "float":
            self.advance()
            return A.FloatLit(t.value, span=t.span)
        if k == "string":
            self.advance()
            return A.StringLit(t.value, span=t.span)
        if self.at("true", "false"):
            self.advance()
            return A.BoolLit(t.text == "true", span=t.span)
        if k == "ident":
            self.advance()
            return A.Var(t.text, span=t.span)
        if k == "uident":
            self.advance()
            arg = self.arguments() if self.at("(") else None
            return A.Ctor(t.text, arg, span=self.span_from(t.span))
        if k == "hole":
            self.advance()
            h = A.Hole(self.holes.next_id, False, span=t.span)
            self.holes.next_id += 1
            return h
        if k == "genhole":
            self.advance()
            if self.holes.generative is not None:
                raise ParseError(
                    t.span,
                    f"a program may contain only one generative hole '??' (another is at {self.holes.generative})",
                )
            self.holes.generative = t.span
            h = A.Hole(self.holes.next_id, True, span=t.span)
            self.holes.next_id += 1
            return h
        if self.at("("):
            self.advance()
            items = [self.expr()]
            while self.at(","):
                self.advance()
                items.append(self.expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return A.Tuple(tuple(items), span=self.span_from(t.span))
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.expr())
                while self.at(","):
                    self.advance()
                    items.append(self.expr())
            self.expect("]")
            return A.ListLit(tuple(items), span=self.span_from(t.span))
        if self.at("fun"):
            self.advance()
            param = self.checked_pattern()
            self.expect("->")
            body = self.expr()
            self.expect("end")
            return A.Fun(param, body, span=self.span_from(t.span))
        if self.at("case"):
            self.advance()
            scrut = self.expr()
            branches = []
            while self.at("|"):
                self.advance()
                p = self.checked_pattern()
                self.expect("=>")
                branches.append((p, self.expr()))
            if not branches:
                self.fail(["|"])
            self.expect("end")
            return A.Case(scrut, tuple(branches), span=self.span_from(t.span))
        self.fail(_EXPR_START)


def delimiter_report(tokens: Sequence[Token]) -> str:
    """Describe unbalanced delimiters, mimicking a structure editor's hint.

    Tracks ( ) [ ], fun -> end, case | => end. Arrows inside type
    annotations and type definitions are ignored.
    """
    stack: list[Token] = []
    unmatched: list[Token] = []
    type_until = None  # token that closes the current type region
    depth = 0
    for t in tokens:
        if t.kind not in ("punct", "keyword"):
            continue
        x = t.text
        if type_until is not None:
            if x in ("(", "["):
                depth += 1
            elif x in (")", "]"):
                depth -= 1
            if x == type_until and depth <= 0 or x in ("let", "in"):
                type_until = None
            if x not in ("(", "[", ")", "]"):
                continue
        elif x == ":":
            type_until, depth = "=", 0
            continue
        elif x == "type":
            type_until, depth = "in", 0
            continue
        if x in ("(", "[", "fun", "case"):
            stack.append(t)
        elif x in (")", "]"):
            want = "(" if x == ")" else "["
            if stack and stack[-1].text == want:
                stack.pop()
            else:
                unmatched.append(t)
        elif x == "->":
            if stack and stack[-1].text == "fun" and stack[-1].value is None:
                stack[-1] = Token("keyword", "fun", stack[-1].span, value="arrow")
            else:
                unmatched.append(t)
        elif x in ("|", "=>"):
            if not (stack and stack[-1].text == "case"):
                unmatched.append(t)
        elif x == "end":
            if stack and stack[-1].text in ("fun", "case"):
                stack.pop()
            else:
                unmatched.append(t)
    unmatched.extend(stack)
    if not unmatched:
        return ""
    names = ", ".join(t.text for t in sorted(unmatched, key=lambda t: t.span))
    msg = f"The parser has detected unmatched delimiters: {names}."
    texts = {t.text for t in unmatched}
    if "->" in texts and ("|" in texts or "=>" not in texts):
        msg += " The presence of a -> in the list likely indicates that a -> was used where => belongs in a case branch."
    elif "=>" in texts:
        msg += " The presence of a => in the list likely indicates that a case expression is missing its 'case' keyword."
    return msg


def parse_type(source: str, file: str = "<type>") -> A.TypeExpr:
    p = Parser(source, file)
    t = p.type_expr()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return t


def parse_expr(source: str, file: str = "<expr>") -> A.Expr:
    p = Parser(source, file)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return e


def parse_tests(source: str, file: str = "tests.sl") -> list[A.Expr]:
    return Parser(source, file).tests()


def parse_repo(manifest: Sequence[tuple[str, str]]) -> A.Repo:
    """Parse an ordered list of (path, text) files into one Repo.

    Hole ids are assigned in pre-order across files in manifest order.
    Only the last file may end in a body expression.
    """
    holes = HoleCounter()
    files = []
    for idx, (path, text) in enumerate(manifest):
        p = Parser(text, path, holes)
        f = p.parse_file(allow_body=idx == len(manifest) - 1)
        files.append(A.SourceFile(f.path, f.definitions, f.body, text))
    return A.Repo(tuple(files))
