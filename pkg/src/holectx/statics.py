"""Bidirectional type checking with error recovery.

Types are the syntax-level `TypeExpr` trees. Alias references stay in
their written form and are expanded on demand against an `AliasEnv`.
Aliases that recurse through a sum are left folded by `normalize` and
unfolded one layer at a time by `head`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import ast as A
from .syntax.parser import ParseError
from .syntax.printer import print_expr, print_type
from .syntax.repo import HoleNotFound, find_hole

T = A.TypeExpr


class CyclicAlias(ValueError):
    def __init__(self, name: str):
        super().__init__(f"type alias '{name}' is defined in terms of itself")
        self.name = name


class UnboundTypeAlias(LookupError):
    def __init__(self, name: str):
        super().__init__(f"type alias '{name}' is not defined")
        self.name = name


# ------------------------------------------------------------------ aliases


def alias_refs(t: T) -> list[tuple[str, bool]]:
    """Alias names in `t`, left to right, each paired with whether it sits
    under a sum constructor."""
    out: list[tuple[str, bool]] = []

    def go(t, under_sum):
        match t:
            case A.AliasRef(name):
                out.append((name, under_sum))
            case A.Arrow(d, r):
                go(d, under_sum)
                go(r, under_sum)
            case A.Product(items):
                for x in items:
                    go(x, under_sum)
            case A.ListOf(e):
                go(e, under_sum)
            case A.Sum(ctors):
                for _, arg in ctors:
                    if arg is not None:
                        go(arg, True)

    go(t, False)
    return out


def _reaches(defs: dict, start: str, only_direct: bool) -> bool:
    seen, todo = set(), [start]
    while todo:
        name = todo.pop()
        if name not in defs:
            continue
        for ref, under_sum in alias_refs(defs[name]):
            if only_direct and under_sum:
                continue
            if ref == start:
                return True
            if ref not in seen:
                seen.add(ref)
                todo.append(ref)
    return False


@dataclass(frozen=True)
class AliasEnv:
    """Type aliases in scope at some program point."""

    defs: dict = field(default_factory=dict)
    recursive: frozenset = frozenset()
    cyclic: frozenset = frozenset()

    @staticmethod
    def of(defs: dict) -> "AliasEnv":
        cyclic = frozenset(n for n in defs if _reaches(defs, n, True))
        recursive = frozenset(n for n in defs if n not in cyclic and _reaches(defs, n, False))
        return AliasEnv(dict(defs), recursive, cyclic)

    def extend(self, name: str, definition: T) -> "AliasEnv":
        defs = dict(self.defs)
        defs.pop(name, None)
        defs[name] = definition
        return AliasEnv.of(defs)

    def lookup(self, name: str) -> T:
        if name not in self.defs:
            raise UnboundTypeAlias(name)
        return self.defs[name]

    def __contains__(self, name: str) -> bool:
        return name in self.defs


EMPTY_ALIASES = AliasEnv()


def normalize(t: T, aliases: AliasEnv = EMPTY_ALIASES) -> T:
    """Expand every non-recursive alias. Unbound aliases become Unknown.

    Recursive aliases (those that reach themselves through a sum) are kept
    as references, which makes the result finite and the operation
    idempotent. Raises CyclicAlias for any other self-reference.
    """

    def go(t, stack):
        match t:
            case A.AliasRef(name):
                if name not in aliases:
                    return A.UNKNOWN
                if name in aliases.cyclic or name in stack:
                    raise CyclicAlias(name)
                if name in aliases.recursive:
                    return A.AliasRef(name)
                return go(aliases.defs[name], stack | {name})
            case A.Arrow(d, r):
                return A.Arrow(go(d, stack), go(r, stack))
            case A.Product(items):
                return A.Product(tuple(go(x, stack) for x in items))
            case A.ListOf(e):
                return A.ListOf(go(e, stack))
            case A.Sum(ctors):
                return A.Sum(tuple((n, None if a is None else go(a, stack)) for n, a in ctors))
            case A.Base(name):
                return A.Base(name)
            case A.Unknown():
                return A.UNKNOWN
        raise TypeError(f"not a type: {t!r}")

    return go(t, frozenset())


def head(t: T, aliases: AliasEnv = EMPTY_ALIASES) -> T:
    """Expand aliases at the root only."""
    seen = set()
    while isinstance(t, A.AliasRef):
        if t.name not in aliases:
            return A.UNKNOWN
        if t.name in seen or t.name in aliases.cyclic:
            raise CyclicAlias(t.name)
        seen.add(t.name)
        t = aliases.defs[t.name]
    return t


def consistent(a: T, b: T, aliases: AliasEnv = EMPTY_ALIASES) -> bool:
    """Gradual consistency. Sums compare by constructor-name set."""
    assumed: set = set()

    def go(a, b) -> bool:
        if isinstance(a, A.AliasRef) or isinstance(b, A.AliasRef):
            key = (a, b)
            if key in assumed:
                return True
            assumed.add(key)
            return go(head(a, aliases), head(b, aliases))
        match a, b:
            case A.Unknown(), _:
                return True
            case _, A.Unknown():
                return True
            case A.Base(x), A.Base(y):
                return x == y
            case A.Arrow(d1, r1), A.Arrow(d2, r2):
                return go(d1, d2) and go(r1, r2)
            case A.Product(xs), A.Product(ys):
                return len(xs) == len(ys) and all(go(x, y) for x, y in zip(xs, ys))
            case A.ListOf(x), A.ListOf(y):
                return go(x, y)
            case A.Sum(), A.Sum():
                if a.names != b.names or len(a.ctors) != len(b.ctors):
                    return False
                for name, arg in a.ctors:
                    _, other = b.lookup(name)
                    if (arg is None) != (other is None):
                        return False
                    if arg is not None and not go(arg, other):
                        return False
                return True
        return False

    return go(a, b)


# -------------------------------------------------------------- diagnostics

ERROR_KINDS = (
    "UnboundVariable", "UnboundConstructor", "UnboundTypeAlias", "TypeInconsistency",
    "ArityMismatch", "InexhaustiveMatch", "DuplicateConstructor", "CyclicAlias", "SyntaxError",
)


@dataclass(frozen=True)
class StaticError:
    kind: str
    span: A.Span
    message: str
    expected: Optional[T] = None
    got: Optional[T] = None

    def __str__(self) -> str:
        return f"{self.kind} at {self.span}: {self.message}"


def format_error(e: StaticError) -> str:
    return str(e)


# ------------------------------------------------------------------ context


@dataclass(frozen=True)
class Binding:
    name: str
    type: T
    is_self: bool = False
    builtin: bool = False


class Scope:
    """Persistent linked list of bindings, nearest first."""

    __slots__ = ("binding", "parent")

    def __init__(self, binding: Optional[Binding] = None, parent: Optional["Scope"] = None):
        self.binding = binding
        self.parent = parent

    def extend(self, b: Binding) -> "Scope":
        return Scope(b, self)

    def extend_all(self, bs: Iterable[Binding]) -> "Scope":
        s = self
        for b in bs:
            s = s.extend(b)
        return s

    def lookup(self, name: str) -> Optional[Binding]:
        s = self
        while s is not None:
            if s.binding is not None and s.binding.name == name:
                return s.binding
            s = s.parent
        return None

    def __iter__(self):
        s = self
        while s is not None:
            if s.binding is not None:
                yield s.binding
            s = s.parent


@dataclass(frozen=True)
class Header:
    name: str
    type: T
    locality: int
    is_self: bool = False


@dataclass(frozen=True)
class HoleInfo:
    hole: A.Hole
    expected: T
    scope: Scope
    aliases: AliasEnv
    ctors: dict


@dataclass
class TypedRepo:
    repo: A.Repo
    errors: list
    holes: dict
    aliases: AliasEnv
    ctors: dict
    types: dict = field(default_factory=dict, repr=False)

    def type_of(self, e: A.Expr) -> Optional[T]:
        return self.types.get(id(e))

    def hole_info(self, hole_id: int) -> HoleInfo:
        if hole_id not in self.holes:
            raise HoleNotFound(hole_id)
        return self.holes[hole_id]


# ------------------------------------------------------------------ builtins

_Q = A.UNKNOWN
_LQ = A.ListOf(_Q)


def _fn(dom, res):
    return A.Arrow(dom, res)


def _pair(*items):
    return A.Product(tuple(items))


BUILTIN_TYPES: dict[str, T] = {
    "List.length": _fn(_LQ, A.INT),
    "List.map": _fn(_pair(_fn(_Q, _Q), _LQ), _LQ),
    "List.mapi": _fn(_pair(_fn(_pair(A.INT, _Q), _Q), _LQ), _LQ),
    "List.filter": _fn(_pair(_fn(_Q, A.BOOL), _LQ), _LQ),
    "List.fold_left": _fn(_pair(_fn(_pair(_Q, _Q), _Q), _Q, _LQ), _Q),
    "List.nth": _fn(_pair(_LQ, A.INT), _Q),
    "List.append": _fn(_pair(_LQ, _LQ), _LQ),
    "List.rev": _fn(_LQ, _LQ),
    "List.init": _fn(_pair(A.INT, _fn(A.INT, _Q)), _LQ),
    "List.exists": _fn(_pair(_fn(_Q, A.BOOL), _LQ), A.BOOL),
    "List.for_all": _fn(_pair(_fn(_Q, A.BOOL), _LQ), A.BOOL),
    "List.mem": _fn(_pair(_Q, _LQ), A.BOOL),
    "string_of_int": _fn(A.INT, A.STRING),
    "String.length": _fn(A.STRING, A.INT),
    "not": _fn(A.BOOL, A.BOOL),
    "max": _fn(_pair(A.INT, A.INT), A.INT),
    "min": _fn(_pair(A.INT, A.INT), A.INT),
    "float_of_int": _fn(A.INT, A.FLOAT),
}


def builtin_scope() -> Scope:
    s = Scope()
    for name, t in reversed(list(BUILTIN_TYPES.items())):
        s = s.extend(Binding(name, t, builtin=True))
    return s


# ------------------------------------------------------------------ checker


def _lit_type(v) -> T:
    if isinstance(v, bool):
        return A.BOOL
    if isinstance(v, int):
        return A.INT
    if isinstance(v, float):
        return A.FLOAT
    return A.STRING


_ARITH = {"+", "-", "*", "/"}
_COMPARE = {"<", ">"}
_ANY_ARROW = A.Arrow(_Q, _Q)


class Checker:
    def __init__(self, file_order: dict):
        self.errors: list[StaticError] = []
        self.holes: dict[int, HoleInfo] = {}
        self.types: dict[int, T] = {}
        self.aliases = EMPTY_ALIASES
        self.ctors: dict = {}
        self.file_order = file_order

    # -- errors

    def err(self, kind, span, message, expected=None, got=None):
        self.errors.append(StaticError(kind, span, message, expected, got))

    def inconsistent(self, e, expected, got):
        what = f"'{e.name}'" if isinstance(e, A.Var) else "this expression"
        self.err(
            "TypeInconsistency", e.span,
            f"{what} has type {print_type(got)} but is expected to have type {print_type(expected)}",
            expected, got,
        )

    def head(self, t: T) -> T:
        return head(t, self.aliases)

    def consistent(self, a, b) -> bool:
        return consistent(a, b, self.aliases)

    # -- type annotations

    def check_type(self, t: T) -> T:
        """Report unbound aliases and duplicate constructors; unbound
        aliases are replaced by Unknown in the returned type."""
        match t:
            case A.AliasRef(name):
                if name not in self.aliases:
                    self.err("UnboundTypeAlias", t.span, f"type alias '{name}' is not defined")
                    return A.Unknown(span=t.span)
                return t
            case A.Arrow(d, r):
                return A.Arrow(self.check_type(d), self.check_type(r), span=t.span)
            case A.Product(items):
                return A.Product(tuple(self.check_type(x) for x in items), span=t.span)
            case A.ListOf(e):
                return A.ListOf(self.check_type(e), span=t.span)
            case A.Sum(ctors):
                seen = set()
                out = []
                for name, arg in ctors:
                    if name in seen:
                        self.err("DuplicateConstructor", t.span, f"constructor '{name}' appears more than once in this sum")
                        continue
                    seen.add(name)
                    out.append((name, None if arg is None else self.check_type(arg)))
                return A.Sum(tuple(out), span=t.span)
        return t

    # -- repo

    def check_repo(self, repo: A.Repo) -> None:
        scope = builtin_scope()
        for f in repo.files:
            for d in f.definitions:
                if isinstance(d, A.TypeDef):
                    self.type_def(d)
                else:
                    ann = self.check_type(d.annotation)
                    inner = scope.extend(Binding(d.name, ann, is_self=True))
                    self.ana(d.bound, ann, inner)
                    scope = scope.extend(Binding(d.name, ann))
            if f.body is not None:
                self.synth(f.body, scope)

    def type_def(self, d: A.TypeDef) -> None:
        self.aliases = self.aliases.extend(d.alias, d.definition)
        body = self.check_type(d.definition)
        if d.alias in self.aliases.cyclic:
            self.err("CyclicAlias", d.span, f"type alias '{d.alias}' is defined in terms of itself")
            body = A.Unknown(span=d.definition.span)
        if body != d.definition or d.alias in self.aliases.cyclic:
            self.aliases = self.aliases.extend(d.alias, body)
        ctors = dict(self.ctors)
        # a redefined alias withdraws its old constructors
        for name in [n for n, (alias, _) in ctors.items() if alias == d.alias]:
            del ctors[name]
        if isinstance(body, A.Sum):
            for name, arg in body.ctors:
                ctors[name] = (d.alias, arg)
        self.ctors = ctors

    # -- synthesis

    def note(self, e, t):
        self.types[id(e)] = t
        return t

    def synth(self, e: A.Expr, scope: Scope) -> T:
        return self.note(e, self._synth(e, scope))

    def _synth(self, e: A.Expr, scope: Scope) -> T:
        match e:
            case A.Var(name):
                b = scope.lookup(name)
                if b is None:
                    self.err("UnboundVariable", e.span, f"variable '{name}' is not bound")
                    return _Q
                return b.type
            case A.IntLit():
                return A.INT
            case A.FloatLit():
                return A.FLOAT
            case A.BoolLit():
                return A.BOOL
            case A.StringLit():
                return A.STRING
            case A.Hole():
                self.record_hole(e, _Q, scope)
                return _Q
            case A.Let():
                return self.let(e, scope, None)
            case A.Fun(p, body):
                binds = self.pattern(p, _Q)
                return A.Arrow(_Q, self.synth(body, scope.extend_all(binds)))
            case A.App(fn, arg):
                tf = self.head(self.synth(fn, scope))
                match tf:
                    case A.Arrow(d, r):
                        self.ana(arg, d, scope)
                        return r
                    case A.Unknown():
                        self.ana(arg, _Q, scope)
                        return _Q
                self.inconsistent(fn, _ANY_ARROW, tf)
                self.synth(arg, scope)
                return _Q
            case A.Tuple(items):
                return A.Product(tuple(self.synth(x, scope) for x in items))
            case A.ListLit(items):
                if not items:
                    return _LQ
                t0 = self.synth(items[0], scope)
                for x in items[1:]:
                    self.ana(x, t0, scope)
                return A.ListOf(t0)
            case A.Cons(h, tl):
                tt = self.synth(tl, scope)
                match self.head(tt):
                    case A.ListOf(elem):
                        self.ana(h, elem, scope)
                        return tt
                    case A.Unknown():
                        return A.ListOf(self.synth(h, scope))
                self.inconsistent(tl, _LQ, tt)
                self.synth(h, scope)
                return _Q
            case A.Case(scrut, branches):
                ts = self.synth(scrut, scope)
                result = None
                ok = True
                for p, body in branches:
                    n = len(self.errors)
                    binds = self.pattern(p, ts)
                    ok = ok and len(self.errors) == n
                    inner = scope.extend_all(binds)
                    if result is None:
                        result = self.synth(body, inner)
                    else:
                        self.ana(body, result, inner)
                if ok:
                    self.exhaustive(e, ts)
                return result
            case A.Ctor(name, arg):
                if name not in self.ctors:
                    self.err("UnboundConstructor", e.span, f"constructor '{name}' is not defined")
                    if arg is not None:
                        self.synth(arg, scope)
                    return _Q
                alias, declared = self.ctors[name]
                self.ctor_arg(e, declared, scope)
                return A.AliasRef(alias)
            case A.If(c, a, b):
                self.ana(c, A.BOOL, scope)
                t = self.synth(a, scope)
                self.ana(b, t, scope)
                return t
            case A.BinOp(op, lhs, rhs):
                if op in _ARITH:
                    self.ana(lhs, A.INT, scope)
                    self.ana(rhs, A.INT, scope)
                    return A.INT
                if op in _COMPARE:
                    self.ana(lhs, A.INT, scope)
                    self.ana(rhs, A.INT, scope)
                    return A.BOOL
                if op == "==":
                    self.ana(rhs, self.synth(lhs, scope), scope)
                    return A.BOOL
                self.ana(lhs, A.STRING, scope)
                self.ana(rhs, A.STRING, scope)
                return A.STRING
        raise TypeError(f"not an expression: {e!r}")

    def ctor_arg(self, e: A.Ctor, declared: Optional[T], scope: Scope) -> None:
        if declared is None and e.arg is not None:
            self.err("ArityMismatch", e.span, f"constructor '{e.name}' takes no argument")
            self.synth(e.arg, scope)
        elif declared is not None and e.arg is None:
            self.err("ArityMismatch", e.span, f"constructor '{e.name}' expects an argument of type {print_type(declared)}")
        elif e.arg is not None:
            self.ana(e.arg, declared, scope)

    def let(self, e: A.Let, scope: Scope, expected: Optional[T]) -> T:
        if e.annotation is not None:
            ann = self.check_type(e.annotation)
            inner = scope
            if isinstance(e.pattern, A.PVar):
                inner = scope.extend(Binding(e.pattern.name, ann, is_self=True))
            self.ana(e.bound, ann, inner)
            t = ann
        else:
            t = self.synth(e.bound, scope)
        body_scope = scope.extend_all(self.pattern(e.pattern, t))
        if expected is None:
            return self.synth(e.body, body_scope)
        self.ana(e.body, expected, body_scope)
        return expected

    # -- analysis

    def ana(self, e: A.Expr, expected: T, scope: Scope) -> None:
        self.types.setdefault(id(e), expected)
        h = self.head(expected)
        match e, h:
            case A.Hole(), _:
                self.record_hole(e, expected, scope)
                self.note(e, expected)
                return
            case A.Let(), _:
                self.let(e, scope, expected)
                return
            case A.Fun(p, body), A.Arrow(d, r):
                binds = self.pattern(p, d)
                self.ana(body, r, scope.extend_all(binds))
                return
            case A.Fun(p, body), A.Unknown():
                self.ana(body, _Q, scope.extend_all(self.pattern(p, _Q)))
                return
            case A.Tuple(items), A.Product(comps):
                if len(items) != len(comps):
                    self.err(
                        "ArityMismatch", e.span,
                        f"expected a {len(comps)}-tuple of type {print_type(expected)} but found {len(items)} components",
                    )
                    for x in items:
                        self.synth(x, scope)
                    return
                for x, c in zip(items, comps):
                    self.ana(x, c, scope)
                return
            case A.Tuple(items), A.Unknown():
                for x in items:
                    self.ana(x, _Q, scope)
                return
            case A.ListLit(items), A.ListOf(elem):
                for x in items:
                    self.ana(x, elem, scope)
                return
            case A.ListLit(items), A.Unknown():
                for x in items:
                    self.ana(x, _Q, scope)
                return
            case A.Cons(hd, tl), A.ListOf(elem):
                self.ana(hd, elem, scope)
                self.ana(tl, expected, scope)
                return
            case A.Cons(hd, tl), A.Unknown():
                self.ana(hd, _Q, scope)
                self.ana(tl, _Q, scope)
                return
            case A.Case(scrut, branches), _:
                ts = self.synth(scrut, scope)
                ok = True
                for p, body in branches:
                    n = len(self.errors)
                    binds = self.pattern(p, ts)
                    ok = ok and len(self.errors) == n
                    self.ana(body, expected, scope.extend_all(binds))
                if ok:
                    self.exhaustive(e, ts)
                return
            case A.If(c, a, b), _:
                self.ana(c, A.BOOL, scope)
                self.ana(a, expected, scope)
                self.ana(b, expected, scope)
                return
            case A.Ctor(name, _), A.Sum():
                found, declared = h.lookup(name)
                if found:
                    self.ctor_arg(e, declared, scope)
                    return
            case A.Ctor(), A.Unknown():
                self.synth(e, scope)
                return
        got = self.synth(e, scope)
        if not self.consistent(got, expected):
            self.inconsistent(e, expected, got)
            self.note(e, _Q)

    def record_hole(self, e: A.Hole, expected: T, scope: Scope) -> None:
        self.holes[e.id] = HoleInfo(e, expected, scope, self.aliases, self.ctors)

    # -- patterns

    def pattern(self, p: A.Pattern, t: T) -> list[Binding]:
        out: list[Binding] = []
        self._pat(p, t, out)
        return out

    def _pat_mismatch(self, p, t, shape):
        self.err(
            "TypeInconsistency", p.span,
            f"pattern of type {print_type(shape)} cannot match a value of type {print_type(t)}",
            t, shape,
        )

    def _pat(self, p: A.Pattern, t: T, out: list) -> None:
        h = self.head(t)
        match p:
            case A.PVar(name):
                out.append(Binding(name, t))
            case A.PWild():
                pass
            case A.PLit(v):
                lt = _lit_type(v)
                if not self.consistent(lt, h):
                    self._pat_mismatch(p, t, lt)
            case A.PTuple(items):
                match h:
                    case A.Product(comps) if len(comps) == len(items):
                        for q, c in zip(items, comps):
                            self._pat(q, c, out)
                        return
                    case A.Product(comps):
                        self.err(
                            "ArityMismatch", p.span,
                            f"a {len(items)}-tuple pattern cannot match a value of type {print_type(t)}",
                        )
                    case A.Unknown():
                        pass
                    case _:
                        self._pat_mismatch(p, t, A.Product(tuple(_Q for _ in items)))
                for q in items:
                    self._pat(q, _Q, out)
            case A.PNil():
                if not isinstance(h, (A.ListOf, A.Unknown)):
                    self._pat_mismatch(p, t, _LQ)
            case A.PCons(hd, tl):
                match h:
                    case A.ListOf(elem):
                        self._pat(hd, elem, out)
                        self._pat(tl, t, out)
                        return
                    case A.Unknown():
                        pass
                    case _:
                        self._pat_mismatch(p, t, _LQ)
                self._pat(hd, _Q, out)
                self._pat(tl, _Q, out)
            case A.PCtor(name, arg):
                declared = _Q
                known = False
                if isinstance(h, A.Sum) and h.lookup(name)[0]:
                    declared, known = h.lookup(name)[1], True
                elif name not in self.ctors:
                    self.err("UnboundConstructor", p.span, f"constructor '{name}' is not defined")
                else:
                    alias, decl = self.ctors[name]
                    if isinstance(h, A.Unknown):
                        declared, known = decl, True
                    else:
                        self._pat_mismatch(p, t, A.AliasRef(alias))
                if known and (declared is None) != (arg is None):
                    if declared is None:
                        self.err("ArityMismatch", p.span, f"constructor '{name}' takes no argument")
                    else:
                        self.err("ArityMismatch", p.span, f"constructor '{name}' expects an argument of type {print_type(declared)}")
                    declared = _Q
                if arg is not None:
                    self._pat(arg, _Q if declared is None else declared, out)

    # -- exhaustiveness

    def exhaustive(self, e: A.Case, t: T) -> None:
        rows = [[p] for p, _ in e.branches]
        if not covers(rows, [t], self.aliases):
            self.err("InexhaustiveMatch", e.span, "this case expression does not cover every possible value")


# ------------------------------------------------------------ exhaustiveness

_WILD = A.PWild()


def _is_wild(p) -> bool:
    return isinstance(p, (A.PVar, A.PWild))


def _signature(t: T):
    """Constructors of a finite type as (key, argument types), or None for
    types whose values cannot be enumerated."""
    match t:
        case A.Base("Bool"):
            return [(True, []), (False, [])]
        case A.Sum(ctors):
            return [(name, [] if arg is None else [arg]) for name, arg in ctors]
        case A.ListOf(elem):
            return [("[]", []), ("::", [elem, t])]
        case A.Product(items):
            return [("()", list(items))]
    return None


def _specialize(p, key, arity):
    """Sub-patterns of `p` under constructor `key`, or None if it cannot match."""
    if _is_wild(p):
        return [_WILD] * arity
    match p:
        case A.PLit(v) if isinstance(v, bool):
            return [] if v == key else None
        case A.PCtor(name, arg):
            if name != key:
                return None
            return [] if arg is None else [arg]
        case A.PNil():
            return [] if key == "[]" else None
        case A.PCons(h, tl):
            return [h, tl] if key == "::" else None
        case A.PTuple(items):
            return list(items)
    return None


def covers(rows: list[list], types: list[T], aliases: AliasEnv = EMPTY_ALIASES) -> bool:
    """True when every value of the given column types matches some row."""
    if not rows:
        return False
    if not types:
        return True
    t = head(types[0], aliases)
    rest = types[1:]
    firsts = [r[0] for r in rows]
    sig = _signature(t)
    if isinstance(t, A.Unknown) or (sig is not None and all(_is_wild(p) for p in firsts)):
        return covers([r[1:] for r in rows], rest, aliases)
    if sig is None:
        return covers([r[1:] for r in rows if _is_wild(r[0])], rest, aliases)
    for key, args in sig:
        sub = []
        for r in rows:
            s = _specialize(r[0], key, len(args))
            if s is not None:
                sub.append(s + r[1:])
        if not covers(sub, list(args) + rest, aliases):
            return False
    return True


# ------------------------------------------------------------------ queries


def check_repo(repo: A.Repo) -> tuple[TypedRepo, list[StaticError]]:
    order = {f.path: i for i, f in enumerate(repo.files)}
    c = Checker(order)
    c.check_repo(repo)
    errors = sorted(
        c.errors,
        key=lambda e: (order.get(e.span.file, len(order)), e.span.start_line, e.span.start_col,
                       e.span.end_line, e.span.end_col),
    )
    typed = TypedRepo(repo, errors, c.holes, c.aliases, c.ctors, c.types)
    return typed, errors


def get_expected_type(typed: TypedRepo, hole_id: int) -> T:
    return typed.hole_info(hole_id).expected


def get_typing_context(typed: TypedRepo, hole_id: int) -> list[Header]:
    """Bindings in scope at the hole, nearest first, shadowed names once.

    The standard library is in scope for checking but is not part of the
    program's typing context.
    """
    info = typed.hole_info(hole_id)
    out: list[Header] = []
    seen = set()
    for b in info.scope:
        if b.name in seen:
            continue
        seen.add(b.name)
        if b.builtin:
            continue
        out.append(Header(b.name, b.type, len(out), b.is_self))
    return out


def syntax_error(e: ParseError) -> StaticError:
    return StaticError("SyntaxError", e.span, e.message)


def get_static_errors(repo_or_sources) -> list[StaticError]:
    """Static errors of a parsed Repo, or of (path, text) sources which
    are parsed first; a parse failure yields a single SyntaxError."""
    if isinstance(repo_or_sources, A.Repo):
        repo = repo_or_sources
    else:
        from .syntax.parser import parse_repo

        try:
            repo = parse_repo(repo_or_sources)
        except ParseError as e:
            return [syntax_error(e)]
    return check_repo(repo)[1]


__all__ = [
    "AliasEnv", "Binding", "BUILTIN_TYPES", "CyclicAlias", "ERROR_KINDS", "Header", "HoleInfo",
    "Scope", "StaticError", "TypedRepo", "UnboundTypeAlias", "check_repo", "consistent", "covers",
    "find_hole", "format_error", "get_expected_type", "get_static_errors", "get_typing_context",
    "head", "normalize", "print_expr", "syntax_error",
]
