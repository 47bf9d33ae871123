"""Retrieval baselines: the whole repository, or lexically similar chunks."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from ..prompt import DEFAULT_CHAR_BUDGET
from .tasks import Task

CHUNK_SIZE = 150
TOP_K = 6


def truncate_lines(text: str, budget: int) -> str:
    """The longest prefix of whole lines that fits in `budget` characters."""
    if len(text) <= budget:
        return text
    cut = text.rfind("\n", 0, budget)
    return text[:cut + 1] if cut >= 0 else ""


def exhaustive_context(task: Task, budget: int = DEFAULT_CHAR_BUDGET) -> str:
    """All application code except tests, with the sketch file cut just
    before the line holding the generative hole."""
    parts = []
    gen = [h for h in task.repo.holes() if h.generative]
    hole_line = gen[0].span.start_line if gen else None
    for path, text in task.manifest.sources():
        if path == task.manifest.sketch and hole_line is not None:
            lines = text.splitlines(keepends=True)
            head = lines[:hole_line - 1]
            # drop the definition's own leading comment, which the sketch repeats
            while head and head[-1].lstrip().startswith("(*"):
                head.pop()
            text = "".join(head)
        if text and not text.endswith("\n"):
            text += "\n"
        parts.append(text)
    return truncate_lines("".join(parts), budget)


def trigrams(text: str) -> Counter:
    return Counter(text[i:i + 3] for i in range(len(text) - 2))


def cosine(a: Counter, b: Counter) -> float:
    dot = sum(v * b[k] for k, v in a.items() if k in b)
    if not dot:
        return 0.0
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    return dot / (na * nb)


def chunks(corpus: str, size: int = CHUNK_SIZE) -> list[str]:
    return [corpus[i:i + size] for i in range(0, len(corpus), size)]


def lexical_retrieve(corpus: str, query: str, chunk_size: int = CHUNK_SIZE, k: int = TOP_K) -> str:
    """Top-k fixed-size chunks by trigram cosine similarity to the query,
    concatenated in corpus order. Ties favour earlier chunks."""
    if not corpus:
        raise ValueError("corpus must be non-empty")
    if chunk_size < 1 or k < 0:
        raise ValueError("chunk_size must be positive and k non-negative")
    parts = chunks(corpus, chunk_size)
    q = trigrams(query)
    ranked = sorted(range(len(parts)), key=lambda i: (-cosine(trigrams(parts[i]), q), i))
    keep = sorted(ranked[:k])
    return "".join(parts[i] for i in keep)


def combined_corpus(tasks: Sequence[Task]) -> str:
    """Every task's application files minus tests and update sketches."""
    out = []
    for t in tasks:
        for path, text in t.manifest.sources():
            if path != t.manifest.sketch:
                out.append(text if text.endswith("\n") else text + "\n")
    return "".join(out)
