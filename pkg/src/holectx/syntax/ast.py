"""Abstract syntax for the sketch language (SL).

Every node is a frozen dataclass. Source spans are carried as keyword-only
metadata excluded from equality, so two trees compare equal when they have
the same structure regardless of where they came from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True, order=True)
class Span:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"

    def to(self, other: "Span") -> "Span":
        return Span(self.file, self.start_line, self.start_col, other.end_line, other.end_col)


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


# --------------------------------------------------------------------- types

BASE_TYPES = ("Int", "Float", "Bool", "String")


@dataclass(frozen=True)
class Base:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Unknown:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class AliasRef:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Arrow:
    """Function type. A multi-argument function takes a single Product."""

    domain: "TypeExpr"
    result: "TypeExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Product:
    items: tuple["TypeExpr", ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ListOf:
    elem: "TypeExpr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sum:
    ctors: tuple[tuple[str, Optional["TypeExpr"]], ...]
    span: Optional[Span] = _span()

    def lookup(self, name: str):
        """Return (found, arg_type) for constructor `name`."""
        for ctor, arg in self.ctors:
            if ctor == name:
                return True, arg
        return False, None

    @property
    def names(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.ctors)


TypeExpr = Union[Base, Unknown, AliasRef, Arrow, Product, ListOf, Sum]

INT = Base("Int")
FLOAT = Base("Float")
BOOL = Base("Bool")
STRING = Base("String")
UNKNOWN = Unknown()


# ------------------------------------------------------------------ patterns


@dataclass(frozen=True)
class PVar:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PWild:
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PLit:
    value: Union[int, float, bool, str]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PTuple:
    items: tuple["Pattern", ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PCtor:
    name: str
    arg: Optional["Pattern"] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PCons:
    head: "Pattern"
    tail: "Pattern"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PNil:
    span: Optional[Span] = _span()


Pattern = Union[PVar, PWild, PLit, PTuple, PCtor, PCons, PNil]


# --------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FloatLit:
    value: float
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class StringLit:
    value: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Let:
    pattern: Pattern
    annotation: Optional[TypeExpr]
    bound: "Expr"
    body: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Fun:
    param: Pattern
    body: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App:
    """`f(a)`; `f(a, b)` is sugar for applying `f` to the tuple `(a, b)`."""

    fn: "Expr"
    arg: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Tuple:
    items: tuple["Expr", ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ListLit:
    items: tuple["Expr", ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Cons:
    head: "Expr"
    tail: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Case:
    scrutinee: "Expr"
    branches: tuple[tuple[Pattern, "Expr"], ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Ctor:
    name: str
    arg: Optional["Expr"] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"
    span: Optional[Span] = _span()


BINOPS = ("+", "-", "*", "/", "==", "<", ">", "++")


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: "Expr"
    rhs: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Hole:
    id: int
    generative: bool = False
    span: Optional[Span] = _span()


Expr = Union[
    Var, IntLit, FloatLit, BoolLit, StringLit, Let, Fun, App, Tuple, ListLit,
    Cons, Case, Ctor, If, BinOp, Hole,
]


# ---------------------------------------------------------------- top level


@dataclass(frozen=True)
class TypeDef:
    alias: str
    definition: TypeExpr
    comment: Optional[str] = field(default=None, kw_only=True)
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class LetDef:
    name: str
    annotation: TypeExpr
    bound: Expr
    comment: Optional[str] = field(default=None, kw_only=True)
    span: Optional[Span] = _span()


Definition = Union[TypeDef, LetDef]


@dataclass(frozen=True)
class SourceFile:
    path: str
    definitions: tuple[Definition, ...]
    body: Optional[Expr] = None
    text: str = field(default="", compare=False, repr=False)


@dataclass(frozen=True)
class Repo:
    """An ordered multi-file program. Files keep manifest order."""

    files: tuple[SourceFile, ...]

    @property
    def definitions(self) -> list[Definition]:
        return [d for f in self.files for d in f.definitions]

    @property
    def body(self) -> Optional[Expr]:
        for f in reversed(self.files):
            if f.body is not None:
                return f.body
        return None

    def file(self, path: str) -> SourceFile:
        for f in self.files:
            if f.path == path:
                return f
        raise KeyError(path)

    def holes(self) -> list[Hole]:
        return list(iter_holes(self))


def children(node) -> list:
    """Direct sub-expressions of an expression node, in source order."""
    match node:
        case Let(_, _, bound, body):
            return [bound, body]
        case Fun(_, body):
            return [body]
        case App(fn, arg):
            return [fn, arg]
        case Tuple(items) | ListLit(items):
            return list(items)
        case Cons(head, tail):
            return [head, tail]
        case Case(scrut, branches):
            return [scrut] + [e for _, e in branches]
        case Ctor(_, arg):
            return [] if arg is None else [arg]
        case If(c, t, e):
            return [c, t, e]
        case BinOp(_, lhs, rhs):
            return [lhs, rhs]
    return []


def walk(expr):
    """Pre-order traversal of an expression tree."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def iter_holes(repo: Repo):
    for f in repo.files:
        for d in f.definitions:
            if isinstance(d, LetDef):
                yield from (n for n in walk(d.bound) if isinstance(n, Hole))
        if f.body is not None:
            yield from (n for n in walk(f.body) if isinstance(n, Hole))


def pattern_vars(p: Pattern) -> list[str]:
    match p:
        case PVar(name):
            return [name]
        case PTuple(items):
            return [v for q in items for v in pattern_vars(q)]
        case PCtor(_, arg):
            return [] if arg is None else pattern_vars(arg)
        case PCons(h, t):
            return pattern_vars(h) + pattern_vars(t)
    return []
