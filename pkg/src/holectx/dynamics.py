"""Fuel-bounded call-by-value evaluation that tolerates holes.

Evaluating a hole yields an indeterminate value. Indeterminate values flow
through data constructors but make every strict position (branching,
arithmetic, application, equality) indeterminate as well.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from .syntax import ast as A
from .syntax.parser import ParseError, parse_tests

DEFAULT_FUEL = 1_000_000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 6000))


class EvalError(RuntimeError):
    """A genuinely stuck state such as division by zero."""


class OutOfFuel(Exception):
    pass


# ------------------------------------------------------------------- values


@dataclass(frozen=True)
class IntV:
    value: int


@dataclass(frozen=True)
class FloatV:
    value: float


@dataclass(frozen=True)
class BoolV:
    value: bool


@dataclass(frozen=True)
class StringV:
    value: str


@dataclass(frozen=True)
class TupleV:
    items: tuple


@dataclass(frozen=True)
class ListV:
    items: tuple


@dataclass(frozen=True)
class CtorV:
    name: str
    arg: Optional[object] = None


@dataclass(frozen=True, eq=False)
class ClosureV:
    param: A.Pattern
    body: A.Expr
    env: "Env"


@dataclass(frozen=True, eq=False)
class BuiltinV:
    name: str
    fn: Callable


@dataclass(frozen=True)
class Indet:
    reason: str = "hole"


Value = object


def show(v: Value) -> str:
    match v:
        case IntV(n) | FloatV(n):
            return str(n)
        case BoolV(b):
            return "true" if b else "false"
        case StringV(s):
            return json.dumps(s, ensure_ascii=False)
        case TupleV(items):
            return "(" + ", ".join(show(x) for x in items) + ")"
        case ListV(items):
            return "[" + ", ".join(show(x) for x in items) + "]"
        case CtorV(name, None):
            return name
        case CtorV(name, TupleV() as arg):
            return name + show(arg)
        case CtorV(name, arg):
            return f"{name}({show(arg)})"
        case ClosureV() | BuiltinV():
            return "<function>"
        case Indet(reason):
            return f"<indeterminate: {reason}>"
    return repr(v)


def has_indet(v: Value) -> bool:
    match v:
        case Indet():
            return True
        case TupleV(items) | ListV(items):
            return any(has_indet(x) for x in items)
        case CtorV(_, arg):
            return arg is not None and has_indet(arg)
    return False


def values_equal(a: Value, b: Value):
    """Structural equality; None when indeterminate."""
    if has_indet(a) or has_indet(b):
        return None
    return _eq(a, b)


def _eq(a, b) -> bool:
    if isinstance(a, (ClosureV, BuiltinV)) or isinstance(b, (ClosureV, BuiltinV)):
        raise EvalError("functions cannot be compared for equality")
    match a, b:
        case (TupleV(xs), TupleV(ys)) | (ListV(xs), ListV(ys)):
            return len(xs) == len(ys) and all(_eq(x, y) for x, y in zip(xs, ys))
        case CtorV(n1, a1), CtorV(n2, a2):
            if n1 != n2 or (a1 is None) != (a2 is None):
                return False
            return a1 is None or _eq(a1, a2)
    return type(a) is type(b) and a == b


# -------------------------------------------------------------- environment


class Env:
    __slots__ = ("frame", "parent")

    def __init__(self, frame: Optional[dict] = None, parent: Optional["Env"] = None):
        self.frame = frame if frame is not None else {}
        self.parent = parent

    def lookup(self, name: str):
        e = self
        while e is not None:
            if name in e.frame:
                return e.frame[name]
            e = e.parent
        raise EvalError(f"variable '{name}' is not bound")

    def child(self, frame: dict) -> "Env":
        return Env(frame, self) if frame else self


# ------------------------------------------------------------------ matching


def match(p: A.Pattern, v: Value, out: dict):
    """True/False for a determinate match, None when indeterminate."""
    if isinstance(p, A.PVar):
        out[p.name] = v
        return True
    if isinstance(p, A.PWild):
        return True
    if isinstance(v, Indet):
        return None
    match p:
        case A.PLit(lit):
            r = values_equal(_literal(lit), v)
            return r
        case A.PTuple(items):
            if not isinstance(v, TupleV) or len(v.items) != len(items):
                return False
            return _all(match(q, x, out) for q, x in zip(items, v.items))
        case A.PNil():
            return isinstance(v, ListV) and not v.items
        case A.PCons(h, t):
            if not isinstance(v, ListV) or not v.items:
                return False
            return _all(iter([match(h, v.items[0], out), match(t, ListV(v.items[1:]), out)]))
        case A.PCtor(name, arg):
            if not isinstance(v, CtorV) or v.name != name:
                return False
            if arg is None:
                return v.arg is None
            if v.arg is None:
                return False
            return match(arg, v.arg, out)
    return False


def _all(results) -> Optional[bool]:
    indet = False
    for r in results:
        if r is False:
            return False
        if r is None:
            indet = True
    return None if indet else True


def _literal(lit) -> Value:
    if isinstance(lit, bool):
        return BoolV(lit)
    if isinstance(lit, int):
        return IntV(lit)
    if isinstance(lit, float):
        return FloatV(lit)
    return StringV(lit)


# ---------------------------------------------------------------- evaluator


class Evaluator:
    def __init__(self, fuel: int = DEFAULT_FUEL):
        self.fuel = fuel

    def tick(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise OutOfFuel()

    def apply(self, f: Value, arg: Value) -> Value:
        self.tick()
        match f:
            case Indet():
                return f
            case ClosureV(param, body, env):
                frame: dict = {}
                m = match(param, arg, frame)
                if m is None:
                    return Indet("argument")
                if not m:
                    raise EvalError("function argument does not match its parameter pattern")
                return self.eval(body, env.child(frame))
            case BuiltinV(_, fn):
                return fn(self, arg)
            case CtorV(name, None):
                return CtorV(name, arg)
        raise EvalError(f"{show(f)} is not a function")

    def eval(self, e: A.Expr, env: Env) -> Value:
        self.tick()
        match e:
            case A.Var(name):
                return env.lookup(name)
            case A.IntLit(v):
                return IntV(v)
            case A.FloatLit(v):
                return FloatV(v)
            case A.BoolLit(v):
                return BoolV(v)
            case A.StringLit(v):
                return StringV(v)
            case A.Hole(i):
                return Indet(f"hole {i}")
            case A.Let(p, ann, bound, body):
                if ann is not None and isinstance(p, A.PVar):
                    frame: dict = {}
                    inner = Env(frame, env)
                    frame[p.name] = self.eval(bound, inner)
                    return self.eval(body, inner)
                v = self.eval(bound, env)
                frame = {}
                m = match(p, v, frame)
                if m is None:
                    return Indet("let")
                if not m:
                    raise EvalError("value does not match the let pattern")
                return self.eval(body, env.child(frame))
            case A.Fun(p, body):
                return ClosureV(p, body, env)
            case A.App(fn, arg):
                f = self.eval(fn, env)
                a = self.eval(arg, env)
                return self.apply(f, a)
            case A.Tuple(items):
                return TupleV(tuple(self.eval(x, env) for x in items))
            case A.ListLit(items):
                return ListV(tuple(self.eval(x, env) for x in items))
            case A.Cons(h, t):
                hv = self.eval(h, env)
                tv = self.eval(t, env)
                if isinstance(tv, Indet):
                    return tv
                if not isinstance(tv, ListV):
                    raise EvalError("the tail of '::' is not a list")
                return ListV((hv,) + tv.items)
            case A.Ctor(name, arg):
                return CtorV(name, None if arg is None else self.eval(arg, env))
            case A.Case(scrut, branches):
                v = self.eval(scrut, env)
                for p, body in branches:
                    frame = {}
                    m = match(p, v, frame)
                    if m is None:
                        return Indet("case")
                    if m:
                        return self.eval(body, env.child(frame))
                raise EvalError(f"no case branch matches {show(v)}")
            case A.If(c, a, b):
                cv = self.eval(c, env)
                if isinstance(cv, Indet):
                    return cv
                if not isinstance(cv, BoolV):
                    raise EvalError("if condition is not a boolean")
                return self.eval(a if cv.value else b, env)
            case A.BinOp(op, lhs, rhs):
                return binop(op, self.eval(lhs, env), self.eval(rhs, env))
        raise EvalError(f"cannot evaluate {e!r}")


def binop(op: str, a: Value, b: Value) -> Value:
    if op == "==":
        r = values_equal(a, b)
        return Indet("equality") if r is None else BoolV(r)
    if isinstance(a, Indet):
        return a
    if isinstance(b, Indet):
        return b
    if op == "++":
        if isinstance(a, StringV) and isinstance(b, StringV):
            return StringV(a.value + b.value)
        raise EvalError("'++' expects two strings")
    if type(a) is not type(b) or not isinstance(a, (IntV, FloatV, StringV)):
        raise EvalError(f"operator '{op}' cannot combine {show(a)} and {show(b)}")
    x, y = a.value, b.value
    if op == "<":
        return BoolV(x < y)
    if op == ">":
        return BoolV(x > y)
    if isinstance(a, StringV):
        raise EvalError(f"operator '{op}' does not apply to strings")
    if op == "+":
        r = x + y
    elif op == "-":
        r = x - y
    elif op == "*":
        r = x * y
    else:
        if y == 0:
            raise EvalError("division by zero")
        if isinstance(a, IntV):
            q = abs(x) // abs(y)
            r = q if (x >= 0) == (y >= 0) else -q
        else:
            r = x / y
    return type(a)(r)


# ------------------------------------------------------------------- stdlib


def _args(arg: Value, n: int) -> tuple:
    if n == 1:
        return (arg,)
    if not isinstance(arg, TupleV) or len(arg.items) != n:
        raise EvalError(f"expected {n} arguments")
    return arg.items


def _builtin(n: int, *strict: int):
    """Wrap a primitive taking `n` arguments; indices in `strict` must be
    determinate or the call is indeterminate."""

    def wrap(fn):
        def call(ev: Evaluator, arg: Value):
            if isinstance(arg, Indet):
                return arg
            args = _args(arg, n)
            for i in strict:
                if isinstance(args[i], Indet):
                    return args[i]
            return fn(ev, *args)

        return call

    return wrap


def _list(v) -> tuple:
    if isinstance(v, ListV):
        return v.items
    raise EvalError(f"expected a list but got {show(v)}")


def _int(v) -> int:
    if isinstance(v, IntV):
        return v.value
    raise EvalError(f"expected an integer but got {show(v)}")


def _truth(v):
    if isinstance(v, Indet):
        return None
    if isinstance(v, BoolV):
        return v.value
    raise EvalError(f"expected a boolean but got {show(v)}")


@_builtin(1, 0)
def _length(ev, xs):
    return IntV(len(_list(xs)))


@_builtin(2, 0, 1)
def _map(ev, f, xs):
    return ListV(tuple(ev.apply(f, x) for x in _list(xs)))


@_builtin(2, 0, 1)
def _mapi(ev, f, xs):
    return ListV(tuple(ev.apply(f, TupleV((IntV(i), x))) for i, x in enumerate(_list(xs))))


@_builtin(2, 0, 1)
def _filter(ev, f, xs):
    out = []
    for x in _list(xs):
        keep = _truth(ev.apply(f, x))
        if keep is None:
            return Indet("filter")
        if keep:
            out.append(x)
    return ListV(tuple(out))


@_builtin(3, 0, 2)
def _fold_left(ev, f, acc, xs):
    for x in _list(xs):
        acc = ev.apply(f, TupleV((acc, x)))
    return acc


@_builtin(2, 0, 1)
def _nth(ev, xs, n):
    items, i = _list(xs), _int(n)
    if not 0 <= i < len(items):
        raise EvalError(f"List.nth: index {i} out of range")
    return items[i]


@_builtin(2, 0, 1)
def _append(ev, xs, ys):
    return ListV(_list(xs) + _list(ys))


@_builtin(1, 0)
def _rev(ev, xs):
    return ListV(tuple(reversed(_list(xs))))


@_builtin(2, 0, 1)
def _init(ev, n, f):
    count = _int(n)
    if count < 0:
        raise EvalError("List.init: negative length")
    return ListV(tuple(ev.apply(f, IntV(i)) for i in range(count)))


def _quantifier(want_all: bool):
    @_builtin(2, 0, 1)
    def run(ev, f, xs):
        indet = False
        for x in _list(xs):
            r = _truth(ev.apply(f, x))
            if r is None:
                indet = True
            elif r != want_all:
                return BoolV(r)
        return Indet("quantifier") if indet else BoolV(want_all)

    return run


@_builtin(2, 1)
def _mem(ev, x, xs):
    indet = False
    for y in _list(xs):
        r = values_equal(x, y)
        if r is None:
            indet = True
        elif r:
            return BoolV(True)
    return Indet("List.mem") if indet else BoolV(False)


@_builtin(1, 0)
def _string_of_int(ev, n):
    return StringV(str(_int(n)))


@_builtin(1, 0)
def _string_length(ev, s):
    if not isinstance(s, StringV):
        raise EvalError("String.length expects a string")
    return IntV(len(s.value))


@_builtin(1, 0)
def _not(ev, b):
    return BoolV(not _truth(b))


@_builtin(2, 0, 1)
def _max(ev, a, b):
    return IntV(max(_int(a), _int(b)))


@_builtin(2, 0, 1)
def _min(ev, a, b):
    return IntV(min(_int(a), _int(b)))


@_builtin(1, 0)
def _float_of_int(ev, n):
    return FloatV(float(_int(n)))


BUILTINS: dict[str, Callable] = {
    "List.length": _length,
    "List.map": _map,
    "List.mapi": _mapi,
    "List.filter": _filter,
    "List.fold_left": _fold_left,
    "List.nth": _nth,
    "List.append": _append,
    "List.rev": _rev,
    "List.init": _init,
    "List.exists": _quantifier(False),
    "List.for_all": _quantifier(True),
    "List.mem": _mem,
    "string_of_int": _string_of_int,
    "String.length": _string_length,
    "not": _not,
    "max": _max,
    "min": _min,
    "float_of_int": _float_of_int,
}


def builtin_env() -> Env:
    return Env({name: BuiltinV(name, fn) for name, fn in BUILTINS.items()})


# ------------------------------------------------------------------ programs


def _repo_of(repo_like) -> A.Repo:
    return getattr(repo_like, "repo", repo_like)


def top_env(repo_like, fuel: int = DEFAULT_FUEL) -> Env:
    """Evaluate every top-level definition. A definition whose evaluation
    fails is bound to an indeterminate value."""
    env = builtin_env()
    for d in _repo_of(repo_like).definitions:
        if not isinstance(d, A.LetDef):
            continue
        frame: dict = {}
        env = Env(frame, env)
        try:
            frame[d.name] = Evaluator(fuel).eval(d.bound, env)
        except (EvalError, OutOfFuel, RecursionError) as e:
            frame[d.name] = Indet(f"definition failed: {e}")
    return env


def evaluate(repo_like, body: Optional[A.Expr] = None, fuel: int = DEFAULT_FUEL, env: Optional[Env] = None) -> Value:
    """Evaluate `body` (default: the repo's body) with the repo's
    definitions in scope. Fuel exhaustion and runaway recursion give
    Indet; stuck states raise EvalError."""
    if body is None:
        body = _repo_of(repo_like).body
        if body is None:
            raise ValueError("repo has no body expression to evaluate")
    if env is None:
        env = top_env(repo_like, fuel)
    try:
        return Evaluator(fuel).eval(body, env)
    except OutOfFuel:
        return Indet("fuel")
    except RecursionError:
        return Indet("recursion depth")


# -------------------------------------------------------------------- tests


@dataclass(frozen=True)
class Outcome:
    index: int
    kind: str  # Pass, Fail, Indet, Error
    message: str = ""

    def to_json(self) -> dict:
        d = {"index": self.index, "outcome": self.kind}
        if self.message:
            d["message"] = self.message
        return d


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # keep pytest from collecting this class

    total: int
    passed: int
    outcomes: tuple = field(default=())

    def to_json(self) -> dict:
        return {"total": self.total, "passed": self.passed, "outcomes": [o.to_json() for o in self.outcomes]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def run_tests(repo_like, tests_text: str, fuel: int = DEFAULT_FUEL, file: str = "tests.sl") -> TestReport:
    """Run `test e end` items; only a malformed tests file raises."""
    tests = parse_tests(tests_text, file)
    try:
        env = top_env(repo_like, fuel)
    except Exception as e:  # noqa: BLE001 - the report must always be produced
        outs = tuple(Outcome(i, "Error", f"could not load program: {e}") for i in range(1, len(tests) + 1))
        return TestReport(len(tests), 0, outs)
    outcomes = []
    for i, t in enumerate(tests, 1):
        try:
            v = evaluate(repo_like, t, fuel, env)
        except EvalError as e:
            outcomes.append(Outcome(i, "Error", str(e)))
            continue
        except Exception as e:  # noqa: BLE001
            outcomes.append(Outcome(i, "Error", f"{type(e).__name__}: {e}"))
            continue
        match v:
            case BoolV(True):
                outcomes.append(Outcome(i, "Pass"))
            case Indet(reason):
                outcomes.append(Outcome(i, "Indet", reason))
            case _:
                outcomes.append(Outcome(i, "Fail", show(v)))
    passed = sum(o.kind == "Pass" for o in outcomes)
    return TestReport(len(tests), passed, tuple(outcomes))


__all__ = [
    "BUILTINS", "BoolV", "BuiltinV", "ClosureV", "CtorV", "DEFAULT_FUEL", "EvalError", "Env", "FloatV",
    "Indet", "IntV", "ListV", "Outcome", "ParseError", "StringV", "TestReport", "TupleV", "evaluate",
    "has_indet", "run_tests", "show", "top_env", "values_equal",
]
