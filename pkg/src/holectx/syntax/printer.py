"""Canonical concrete syntax for SL types, patterns, expressions and repos.

The output always re-parses to a structurally equal tree.
"""

from __future__ import annotations

import re

from . import ast as A


def print_type(t: A.TypeExpr) -> str:
    return _ty(t, "top")


def _ty(t: A.TypeExpr, ctx: str) -> str:
    match t:
        case A.Base(name) | A.AliasRef(name):
            return name
        case A.Unknown():
            return "?"
        case A.ListOf(elem):
            return f"[{_ty(elem, 'top')}]"
        case A.Product(items):
            return "(" + ", ".join(_ty(x, "top") for x in items) + ")"
        case A.Arrow(dom, res):
            s = f"{_ty(dom, 'dom')} -> {_ty(res, 'res')}"
            return f"({s})" if ctx == "dom" else s
        case A.Sum(ctors):
            parts = []
            for name, arg in ctors:
                if arg is None:
                    parts.append(name)
                elif isinstance(arg, A.Product):
                    parts.append(name + _ty(arg, "top"))
                else:
                    parts.append(f"{name}({_ty(arg, 'top')})")
            s = " + ".join(parts)
            if len(parts) == 1:
                s = "+ " + s
            return s if ctx == "top" else f"({s})"
    raise TypeError(f"not a type: {t!r}")


_FLOAT_OK = re.compile(r"\d+\.\d+")


def _string(s: str) -> str:
    body = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


def _number(v) -> str:
    if isinstance(v, float):
        text = repr(abs(v))
        if not _FLOAT_OK.fullmatch(text):
            text = f"{abs(v):.6f}"
        return ("-" if v < 0 else "") + text
    return str(v)


def _literal(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return _string(v)
    return _number(v)


def print_pattern(p: A.Pattern) -> str:
    match p:
        case A.PVar(name):
            return name
        case A.PWild():
            return "_"
        case A.PLit(v):
            return _literal(v)
        case A.PNil():
            return "[]"
        case A.PTuple(items):
            return "(" + ", ".join(print_pattern(q) for q in items) + ")"
        case A.PCtor(name, None):
            return name
        case A.PCtor(name, A.PTuple() as arg):
            return name + print_pattern(arg)
        case A.PCtor(name, arg):
            return f"{name}({print_pattern(arg)})"
        case A.PCons(h, t):
            head = print_pattern(h)
            if isinstance(h, A.PCons):
                head = f"({head})"
            return f"{head}::{print_pattern(t)}"
    raise TypeError(f"not a pattern: {p!r}")


# precedence levels: 0 let/if, 1 comparison, 2 :: ++, 3 + -, 4 * /, 6 application, 7 atom
_LEVEL = {"==": 1, "<": 1, ">": 1, "++": 2, "+": 3, "-": 3, "*": 4, "/": 4}


def print_expr(e: A.Expr) -> str:
    return _ex(e, 0)


def _level(e: A.Expr) -> int:
    match e:
        case A.Let() | A.If():
            return 0
        case A.BinOp(op):
            return _LEVEL[op]
        case A.Cons():
            return 2
        case A.App():
            return 6
    return 7


def _ex(e: A.Expr, need: int) -> str:
    s = _ex_raw(e)
    return f"({s})" if _level(e) < need else s


def _args(arg: A.Expr) -> str:
    if isinstance(arg, A.Tuple):
        return "(" + ", ".join(_ex(x, 0) for x in arg.items) + ")"
    return f"({_ex(arg, 0)})"


def _ex_raw(e: A.Expr) -> str:
    match e:
        case A.Var(name):
            return name
        case A.IntLit(v) | A.FloatLit(v):
            s = _number(v)
            return f"({s})" if v < 0 else s
        case A.BoolLit(v):
            return "true" if v else "false"
        case A.StringLit(v):
            return _string(v)
        case A.Hole(_, generative):
            return "??" if generative else "?"
        case A.Let(p, ann, bound, body):
            head = f"let {print_pattern(p)}"
            if ann is not None:
                head += f": {print_type(ann)}"
            return f"{head} = {_ex(bound, 0)} in {_ex(body, 0)}"
        case A.If(c, a, b):
            return f"if {_ex(c, 0)} then {_ex(a, 0)} else {_ex(b, 0)}"
        case A.Fun(p, body):
            return f"fun {print_pattern(p)} -> {_ex(body, 0)} end"
        case A.Case(scrut, branches):
            arms = " ".join(f"| {print_pattern(p)} => {_ex(b, 0)}" for p, b in branches)
            return f"case {_ex(scrut, 0)} {arms} end"
        case A.App(fn, arg):
            head = _ex(fn, 6)
            if isinstance(fn, A.Ctor) and fn.arg is None:
                head = f"({head})"
            return head + _args(arg)
        case A.Tuple(items):
            return "(" + ", ".join(_ex(x, 0) for x in items) + ")"
        case A.ListLit(items):
            return "[" + ", ".join(_ex(x, 0) for x in items) + "]"
        case A.Cons(h, t):
            return f"{_ex(h, 3)}::{_ex(t, 2)}"
        case A.Ctor(name, None):
            return name
        case A.Ctor(name, arg):
            return name + _args(arg)
        case A.BinOp(op, lhs, rhs):
            lvl = _LEVEL[op]
            if op in ("++",):
                return f"{_ex(lhs, lvl + 1)} {op} {_ex(rhs, lvl)}"
            rneed = 6 if lvl == 4 else lvl + 1
            return f"{_ex(lhs, lvl)} {op} {_ex(rhs, rneed)}"
    raise TypeError(f"not an expression: {e!r}")


def print_definition(d: A.Definition) -> str:
    lines = []
    if d.comment:
        lines.append(f"(* {d.comment} *)")
    if isinstance(d, A.TypeDef):
        lines.append(f"type {d.alias} = {print_type(d.definition)} in")
    else:
        lines.append(f"let {d.name}: {print_type(d.annotation)} = {print_expr(d.bound)} in")
    return "\n".join(lines)


def print_file(f: A.SourceFile) -> str:
    parts = [print_definition(d) for d in f.definitions]
    if f.body is not None:
        parts.append(print_expr(f.body))
    return "\n".join(parts) + "\n"


def print_repo(repo: A.Repo) -> list[tuple[str, str]]:
    return [(f.path, print_file(f)) for f in repo.files]
