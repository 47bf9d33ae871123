"""Static retrieval of type definitions and headers relevant to a hole."""

from __future__ import annotations

from dataclasses import dataclass, field

from .statics import (
    EMPTY_ALIASES, AliasEnv, CyclicAlias, Header, TypedRepo, UnboundTypeAlias, consistent,
    get_expected_type, get_typing_context, head, normalize,
)
from .syntax import ast as A
from .syntax.printer import print_type

T = A.TypeExpr
DEFAULT_CAP = 10


def extract_aliases(t: T) -> list[str]:
    """Distinct alias names occurring in `t`, left to right."""
    out: list[str] = []

    def go(t):
        match t:
            case A.AliasRef(name):
                if name not in out:
                    out.append(name)
            case A.Arrow(d, r):
                go(d)
                go(r)
            case A.Product(items):
                for x in items:
                    go(x)
            case A.ListOf(e):
                go(e)
            case A.Sum(ctors):
                for _, arg in ctors:
                    if arg is not None:
                        go(arg)

    go(t)
    return out


def get_type_definition(alias: str, typed: TypedRepo, hole_id: int) -> T:
    """The definition of `alias` as written, in scope at the hole."""
    return typed.hole_info(hole_id).aliases.lookup(alias)


@dataclass(frozen=True)
class TypeDefListing:
    entries: tuple[tuple[str, T], ...] = ()
    unbound: tuple[str, ...] = ()

    @property
    def aliases(self) -> list[str]:
        return [a for a, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def retrieve_relevant_types(expected: T, aliases: AliasEnv) -> TypeDefListing:
    """Breadth-first closure of alias definitions reachable from `expected`."""
    queue = extract_aliases(expected)
    visited = set(queue)
    entries, unbound = [], []
    i = 0
    while i < len(queue):
        name = queue[i]
        i += 1
        try:
            definition = aliases.lookup(name)
        except UnboundTypeAlias:
            unbound.append(name)
            continue
        entries.append((name, definition))
        for ref in extract_aliases(definition):
            if ref not in visited:
                visited.add(ref)
                queue.append(ref)
    return TypeDefListing(tuple(entries), tuple(unbound))


def _decompose(t: T, aliases: AliasEnv) -> list[T]:
    match head(t, aliases):
        case A.Arrow(_, result):
            return [result]
        case A.Product(items):
            return list(items)
    return []


def _normal_key(t: T, aliases: AliasEnv):
    try:
        return normalize(t, aliases)
    except CyclicAlias:
        return t


def get_target_types(expected: T, aliases: AliasEnv = EMPTY_ALIASES) -> list[T]:
    """The expected type plus two rounds of decomposition (arrow results and
    product components), minus unaliased base types, deduplicated on
    normalized structure."""
    first = _decompose(expected, aliases)
    second = [c for t in first for c in _decompose(t, aliases)]
    out, seen = [], []
    for t in [expected] + first + second:
        if isinstance(t, A.Base):
            continue
        key = _normal_key(t, aliases)
        if key in seen:
            continue
        seen.append(key)
        out.append(t)
    return out


def relevant_to(t: T, target: T, aliases: AliasEnv = EMPTY_ALIASES) -> bool:
    """Whether a value of type `t` can produce `target` directly, as a
    function result, or as a tuple component. The last two clauses look at
    `t` as written: an alias naming a tuple counts only as a whole."""
    if consistent(t, target, aliases):
        return True
    match t:
        case A.Arrow(_, result):
            return consistent(result, target, aliases)
        case A.Product(items):
            return any(consistent(c, target, aliases) for c in items)
    return False


def filter_context(ctx: list[Header], target: T, aliases: AliasEnv = EMPTY_ALIASES) -> list[Header]:
    return [h for h in ctx if not h.is_self and relevant_to(h.type, target, aliases)]


def _count_nodes(t: T) -> tuple[int, int]:
    known = unknown = 0
    stack = [t]
    while stack:
        t = stack.pop()
        match t:
            case A.Unknown():
                unknown += 1
            case A.Arrow(d, r):
                known += 1
                stack += [d, r]
            case A.Product(items):
                known += 1
                stack += list(items)
            case A.ListOf(e):
                known += 1
                stack.append(e)
            case A.Sum(ctors):
                known += 1 + len(ctors)
                stack += [a for _, a in ctors if a is not None]
            case _:
                known += 1
    return known, unknown


def score_type(t: T) -> float:
    known, unknown = _count_nodes(t)
    return 1.0 * known / (known + unknown)


def score_entry(h: Header) -> float:
    return score_type(h.type)


@dataclass(frozen=True)
class ScoredHeader:
    header: Header
    score: float

    @property
    def name(self) -> str:
        return self.header.name


def retrieve_relevant_headers(
    expected: T, ctx: list[Header], aliases: AliasEnv = EMPTY_ALIASES, cap: int = DEFAULT_CAP
) -> list[ScoredHeader]:
    found: dict[str, Header] = {}
    for target in get_target_types(expected, aliases):
        for h in filter_context(ctx, target, aliases):
            old = found.get(h.name)
            if old is None or h.locality < old.locality:
                found[h.name] = h
    scored = [ScoredHeader(h, score_entry(h)) for h in found.values()]
    scored = [s for s in scored if s.score > 0.0]
    scored.sort(key=lambda s: (-s.score, s.header.locality))
    return scored[:cap]


# ----------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class Retrieval:
    expected: T
    types: TypeDefListing
    headers: tuple[ScoredHeader, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "expectedType": print_type(self.expected),
            "typeDefs": [{"alias": a, "def": print_type(d)} for a, d in self.types.entries],
            "headers": [
                {"name": s.name, "type": print_type(s.header.type), "score": s.score, "locality": s.header.locality}
                for s in self.headers
            ],
        }


def contextualize(typed: TypedRepo, hole_id: int, cap: int = DEFAULT_CAP) -> Retrieval:
    info = typed.hole_info(hole_id)
    expected = get_expected_type(typed, hole_id)
    ctx = get_typing_context(typed, hole_id)
    return Retrieval(
        expected,
        retrieve_relevant_types(expected, info.aliases),
        tuple(retrieve_relevant_headers(expected, ctx, info.aliases, cap)),
    )
