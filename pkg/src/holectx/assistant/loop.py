"""The completion loop: prompt, substitute, check, and re-prompt on errors."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Optional

from ..contextualizer import contextualize
from ..prompt import (
    ChatMessage, MissingGenerativeHole, PromptConfig, build_user_message, error_message,
    serialize_errors, system_message,
)
from ..statics import StaticError, check_repo, syntax_error
from ..syntax import ast as A
from ..syntax.parser import ParseError, parse_repo
from ..syntax.repo import find_hole, generative_hole, substitute_hole
from .clients import LLMClient

_FENCE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


class EmptyReply(ValueError):
    pass


def extract_fragment(reply: str) -> str:
    """The first fenced code block's contents, or the whole reply trimmed."""
    m = _FENCE.search(reply)
    text = m.group(1) if m else reply
    text = text.strip()
    if not text:
        raise EmptyReply("the reply contains no code")
    return text


def errors_of(repo: A.Repo) -> list[StaticError]:
    return check_repo(repo)[1]


def error_report(repo_or_sources) -> str:
    """Empty when the program has no static errors, else the error message
    sent to the model."""
    if isinstance(repo_or_sources, A.Repo):
        errors = errors_of(repo_or_sources)
    else:
        try:
            errors = errors_of(parse_repo(repo_or_sources))
        except ParseError as e:
            errors = [syntax_error(e)]
    return serialize_errors(errors) if errors else ""


@dataclass
class CompletionResult:
    final_repo: A.Repo
    final_fragment: str
    rounds_used: int
    errors_per_round: list[int]
    transcript: list[ChatMessage]
    chars_sent: int = 0
    chars_received: int = 0
    wall_millis: int = 0
    final_errors: list[StaticError] = field(default_factory=list)

    @property
    def calls(self) -> int:
        return self.rounds_used


def try_fragment(repo: A.Repo, hole_id: int, reply: str):
    """Substitute a reply at the hole: (fragment, new repo or None, errors)."""
    hole = find_hole(repo, hole_id)
    try:
        fragment = extract_fragment(reply)
    except EmptyReply as e:
        return "", None, [StaticError("SyntaxError", hole.span, str(e))]
    try:
        filled = substitute_hole(repo, hole_id, fragment)
    except ParseError as e:
        return fragment, None, [syntax_error(e)]
    return fragment, filled, errors_of(filled)


def complete(
    repo: A.Repo,
    hole_id: int,
    cfg: PromptConfig,
    client: LLMClient,
    extra_context: str = "",
    seed: Optional[int] = None,
    measure_time: Optional[bool] = None,
) -> CompletionResult:
    """Run one trialogue for the generative hole `hole_id`.

    Wall time is measured only for non-deterministic clients unless
    `measure_time` says otherwise, so replayed runs are reproducible.
    """
    gen = generative_hole(repo)
    if gen is None or gen.id != hole_id:
        raise MissingGenerativeHole(f"hole {hole_id} is not the generative hole of this program")
    if measure_time is None:
        measure_time = not getattr(client, "deterministic", False)
    started = time.perf_counter()

    typed, _ = check_repo(repo)
    retrieval = contextualize(typed, hole_id)
    sketch = repo.file(gen.span.file).text
    user = build_user_message(sketch, retrieval.expected, retrieval.types, retrieval.headers, cfg, extra_context)
    transcript = [system_message(cfg.model_kind), user]
    sent = received = 0
    errors_per_round: list[int] = []
    fragment, final, errors = "", repo, []

    for round_no in range(1 + cfg.max_error_rounds):
        sent += sum(len(m.content) for m in transcript)
        reply = client.send(list(transcript), cfg.temperature, seed)
        received += len(reply)
        transcript.append(ChatMessage("model", reply if reply else " "))
        fragment, filled, errors = try_fragment(repo, hole_id, reply)
        final = filled if filled is not None else repo
        errors_per_round.append(len(errors))
        if not errors or round_no == cfg.max_error_rounds:
            break
        transcript.append(error_message(errors))

    wall = int((time.perf_counter() - started) * 1000) if measure_time else 0
    return CompletionResult(final, fragment, len(errors_per_round), errors_per_round, transcript,
                            sent, received, wall, errors)
