"""Text assembly for the system, user and error-round messages."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .contextualizer import ScoredHeader, TypeDefListing
from .statics import StaticError
from .syntax import ast as A
from .syntax.lexer import LexError, tokenize
from .syntax.printer import print_type

ROLES = ("system", "user", "model")
HEADER_PREAMBLE = "Consider using these variables relevant to the expected type:"
TYPES_PREAMBLE = "The following type definitions are relevant to the hole:"
ERRORS_PREAMBLE = "The following errors were found in your completion:"
EXPECTED_PREFIX = "The expected type of the hole is: "
DEFAULT_CHAR_BUDGET = 24000


class MissingGenerativeHole(ValueError):
    pass


class EmptyErrorList(ValueError):
    pass


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")

    def to_json(self) -> dict:
        return {"role": self.role, "content": self.content}


def dump_transcript(messages: Iterable[ChatMessage]) -> str:
    return "".join(json.dumps(m.to_json(), ensure_ascii=False) + "\n" for m in messages)


def load_transcript(text: str) -> list[ChatMessage]:
    out = []
    for line in text.splitlines():
        if line.strip():
            d = json.loads(line)
            out.append(ChatMessage(d["role"], d["content"]))
    return out


@dataclass(frozen=True)
class PromptConfig:
    include_types: bool = True
    include_headers: bool = True
    max_error_rounds: int = 2
    model_kind: str = "instruction"
    temperature: float = 0.6
    char_budget: int = DEFAULT_CHAR_BUDGET

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must lie in [0, 2]")
        if self.max_error_rounds < 0:
            raise ValueError("max_error_rounds must be non-negative")
        if self.model_kind not in ("instruction", "completion"):
            raise ValueError("model_kind must be 'instruction' or 'completion'")


# ------------------------------------------------------------------- assets

INSTRUCTIONS = """\
You are a code completion assistant for the SL programming language.
You will be given a program sketch containing a single hole written ??.
Your task is to write the code fragment that replaces ?? in the sketch.
Reply only with code
DO NOT include the program sketch in your reply
DO NOT surround your reply with explanations or prose
The fragment must have the expected type of the hole
Use the type definitions and variables provided when they help"""

CRASH_COURSE = """\
SL crash course. SL is a small functional language related to OCaml and Elm,
but it differs from both in the following ways:
- No 'rec' keyword is necessary for 'let' to define a recursive function
- There is no dot accessor notation for tuples; use pattern matching
- Every top-level 'let' carries a type annotation and ends with 'in': let x: Int = 1 in
- Functions are written fun x -> body end, and the 'end' is mandatory
- A function of several arguments takes one tuple: fun (a, b) -> a + b end
- Application always uses parentheses: f(x) and g(x, y), never f x
- Pattern matching is written case e | p1 => e1 | p2 => e2 end
- Case branches use => and not ->; there is no 'match' or 'with'
- There are no records; use tuples and destructure them with let (a, b) = t in
- Sum types list constructors separated by +: type T = A(Int) + B in
- Constructors are capitalized and take their argument in parentheses: A(3)
- Lists are written [1, 2, 3], prepend with ::, and [] is the empty list
- Strings are concatenated with ++ and compared with ==
- Arithmetic operators + - * / work on Int values only
- Standard functions include List.map(f, xs), List.mapi(f, xs), List.filter(f, xs),
  List.fold_left(f, acc, xs), List.length(xs), List.nth(xs, n), List.append(xs, ys),
  List.rev(xs), List.init(n, f), List.exists(f, xs), List.for_all(f, xs),
  List.mem(x, xs), string_of_int(n), String.length(s), not(b), max(a, b), min(a, b)
- List.mapi passes the index first: List.mapi(fun (i, x) -> ... end, xs)
- ? is a typed hole and ?? marks the hole you are asked to fill"""

FEW_SHOT: tuple[tuple[str, str], ...] = (
    (
        "let List.length: [(String, Bool)] -> Int =\n  fun xs -> ?? end in",
        "case xs | [] => 0 | _::xs => 1 + List.length(xs) end",
    ),
    (
        "type Light = Red + Yellow + Green in\nlet next: Light -> Light =\n  fun light -> ?? end in",
        "case light | Red => Green | Green => Yellow | Yellow => Red end",
    ),
    (
        "let swap: (Int, String) -> (String, Int) =\n  fun pair -> ?? end in",
        "let (n, s) = pair in (s, n)",
    ),
    (
        "let total: [Int] -> Int =\n  fun xs -> List.fold_left(??, 0, xs) end in",
        "fun (acc, x) -> acc + x end",
    ),
)

DEFINITION_EXAMPLES: tuple[str, ...] = (
    "let List.length: [(String, Bool)] -> Int =\n"
    "  fun xs -> case xs | [] => 0 | _::xs => 1 + List.length(xs) end end in",
    "type Light = Red + Yellow + Green in",
    "let next: Light -> Light =\n"
    "  fun light -> case light | Red => Green | Green => Yellow | Yellow => Red end end in",
    "let swap: (Int, String) -> (String, Int) =\n  fun pair -> let (n, s) = pair in (s, n) end in",
    "let total: [Int] -> Int =\n  fun xs -> List.fold_left(fun (acc, x) -> acc + x end, 0, xs) end in",
    "let greet: String -> String =\n  fun name -> \"Hello, \" ++ name end in",
    "let firstOr: ([Int], Int) -> Int =\n  fun (xs, d) -> case xs | [] => d | x::_ => x end end in",
    "let clamp: (Int, Int, Int) -> Int =\n  fun (lo, hi, n) -> if n < lo then lo else if n > hi then hi else n end in",
    "let evens: [Int] -> [Int] =\n  fun xs -> List.filter(fun x -> x - (x / 2) * 2 == 0 end, xs) end in",
    "type Shape = Square(Int) + Rect(Int, Int) in",
    "let area: Shape -> Int =\n  fun s -> case s | Square(n) => n * n | Rect(w, h) => w * h end end in",
)


def system_message(model_kind: str = "instruction") -> ChatMessage:
    if model_kind == "completion":
        return ChatMessage("system", "\n".join(DEFINITION_EXAMPLES))
    if model_kind != "instruction":
        raise ValueError("model_kind must be 'instruction' or 'completion'")
    shots = "\n\n".join(f"Sketch:\n{s}\nCompletion:\n{c}" for s, c in FEW_SHOT)
    text = f"{INSTRUCTIONS}\n\n{CRASH_COURSE}\n\nExamples:\n\n{shots}"
    return ChatMessage("system", text)


def ai_tutorial() -> str:
    return CRASH_COURSE


# ------------------------------------------------------------ serialization


def serialize_types(listing: TypeDefListing) -> str:
    return "\n".join(f"type {alias} = {print_type(d)} in" for alias, d in listing.entries)


def _header_type(t: A.TypeExpr) -> str:
    s = print_type(t)
    return f"({s})" if isinstance(t, (A.Arrow, A.Sum)) else s


def serialize_headers(headers: Sequence[ScoredHeader]) -> str:
    if not headers:
        return ""
    lines = [HEADER_PREAMBLE]
    lines += [f"let {s.header.name}: {_header_type(s.header.type)} =  in" for s in headers]
    return "\n".join(lines)


def serialize_errors(errors: Sequence[StaticError]) -> str:
    if not errors:
        raise EmptyErrorList("there are no errors to report")
    return "\n".join([ERRORS_PREAMBLE] + [str(e) for e in errors])


def _generative_holes(sketch: str) -> int:
    try:
        return sum(t.kind == "genhole" for t in tokenize(sketch))
    except LexError:
        return sketch.count("??")


EXTRA_PREAMBLE = "Here is other code from the repository:"


def _assemble(sketch, expected, types_text, header_lines, extra="") -> str:
    parts = [sketch.rstrip("\n"), EXPECTED_PREFIX + print_type(expected)]
    if extra:
        parts.append(EXTRA_PREAMBLE + "\n" + extra.rstrip("\n"))
    if types_text:
        parts.append(TYPES_PREAMBLE + "\n" + types_text)
    if header_lines:
        parts.append(serialize_headers(header_lines))
    return "\n\n".join(parts)


def build_user_message(
    sketch: str,
    expected: A.TypeExpr,
    listing: TypeDefListing,
    headers: Sequence[ScoredHeader],
    cfg: PromptConfig = PromptConfig(),
    extra: str = "",
) -> ChatMessage:
    """Sketch, expected type, then optional type and header sections.

    `extra` is free-form repository text supplied by retrieval baselines.
    When the text exceeds the character budget, headers are dropped from
    the tail first and then type definitions.
    """
    if _generative_holes(sketch) != 1:
        raise MissingGenerativeHole("the sketch must contain exactly one '??' hole")
    entries = list(listing.entries) if cfg.include_types else []
    kept = list(headers) if cfg.include_headers else []

    def render():
        return _assemble(sketch, expected, serialize_types(TypeDefListing(tuple(entries))), kept, extra)

    text = render()
    while len(text) > cfg.char_budget and (kept or entries):
        if kept:
            kept.pop()
        else:
            entries.pop()
        text = render()
    return ChatMessage("user", text)


def error_message(errors: Sequence[StaticError]) -> ChatMessage:
    return ChatMessage("user", serialize_errors(errors))
