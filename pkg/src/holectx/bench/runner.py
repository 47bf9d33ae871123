"""Ablation trials, the configuration matrix, and CSV output."""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from ..assistant.clients import ClientError, LLMClient
from ..assistant.loop import complete
from ..dynamics import run_tests
from ..prompt import PromptConfig
from .baselines import combined_corpus, exhaustive_context, lexical_retrieve
from .tasks import Task

BASELINES = ("none", "exhaustive", "lexical")
CSV_HEADER = (
    "task", "config", "trial", "tests_passed", "tests_total", "rounds",
    "errors_per_round", "chars_sent", "chars_received", "wall_ms",
)


@dataclass(frozen=True)
class AblationConfig:
    types: bool = False
    headers: bool = False
    error_rounds: bool = False
    baseline: str = "none"

    def __post_init__(self):
        if self.baseline not in BASELINES:
            raise ValueError(f"unknown baseline {self.baseline!r}")
        if self.baseline != "none" and (self.types or self.headers):
            raise ValueError("a baseline replaces type and header retrieval")

    @property
    def code(self) -> str:
        flags = ("T" if self.types else "-", "H" if self.headers else "-", "E" if self.error_rounds else "-")
        return "|".join(flags + (self.baseline,))

    @staticmethod
    def parse(code: str) -> "AblationConfig":
        parts = code.strip().split("|")
        if len(parts) == 3:
            parts.append("none")
        if len(parts) != 4 or any(p not in (flag, "-") for p, flag in zip(parts, "THE")):
            raise ValueError(f"bad config {code!r}; expected flags like T|H|E|none or -|-|E|lexical")
        return AblationConfig(parts[0] == "T", parts[1] == "H", parts[2] == "E", parts[3])

    def __str__(self) -> str:
        return self.code


FEATURE_CONFIGS: tuple[AblationConfig, ...] = tuple(
    AblationConfig(t, h, e) for t, h, e in itertools.product((False, True), repeat=3)
)


def parse_configs(text: str) -> list[AblationConfig]:
    if text.strip() == "all":
        return list(FEATURE_CONFIGS)
    return [AblationConfig.parse(c) for c in text.split(",") if c.strip()]


@dataclass(frozen=True)
class TrialRecord:
    task: str
    config: str
    trial: int
    tests_passed: int
    tests_total: int
    rounds: int
    errors_per_round: tuple
    chars_sent: int
    chars_received: int
    wall_ms: int

    def row(self) -> list:
        return [
            self.task, self.config, self.trial, self.tests_passed, self.tests_total, self.rounds,
            ";".join(str(n) for n in self.errors_per_round), self.chars_sent, self.chars_received, self.wall_ms,
        ]

    @property
    def fraction(self) -> float:
        return self.tests_passed / self.tests_total if self.tests_total else 0.0


class TrialError(ClientError):
    """A client failure during a trial; `record` holds what was measured."""

    def __init__(self, cause: Exception, record: TrialRecord):
        super().__init__(str(cause))
        self.record = record


def baseline_context(task: Task, config: AblationConfig, corpus: str) -> str:
    match config.baseline:
        case "exhaustive":
            return exhaustive_context(task)
        case "lexical":
            return lexical_retrieve(corpus, task.sketch_text)
    return ""


def run_trial(
    task: Task,
    config: AblationConfig,
    base: PromptConfig,
    client: LLMClient,
    trial: int = 0,
    seed: Optional[int] = None,
    corpus: str = "",
) -> TrialRecord:
    cfg = dataclasses.replace(
        base,
        include_types=config.types,
        include_headers=config.headers,
        max_error_rounds=base.max_error_rounds if config.error_rounds else 0,
    )
    extra = baseline_context(task, config, corpus or combined_corpus([task]))
    try:
        result = complete(task.repo, task.hole_id, cfg, client, extra, seed)
    except ClientError as e:
        partial = TrialRecord(task.name, config.code, trial, 0, 0, 0, (), 0, 0, 0)
        raise TrialError(e, partial) from e
    report = run_tests(result.final_repo, task.tests_text)
    return TrialRecord(
        task.name, config.code, trial, report.passed, report.total, result.rounds_used,
        tuple(result.errors_per_round), result.chars_sent, result.chars_received, result.wall_millis,
    )


class CsvAppender:
    """Writes the header once, then one flushed row per record."""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self.writer = csv.writer(stream, lineterminator="\n")
        self.writer.writerow(CSV_HEADER)
        stream.flush()

    def append(self, record: TrialRecord) -> None:
        self.writer.writerow(record.row())
        self.stream.flush()


def run_matrix(
    tasks: Sequence[Task],
    configs: Sequence[AblationConfig],
    trials: int,
    client: LLMClient,
    seed: Optional[int] = None,
    out: Optional[TextIO] = None,
    base: PromptConfig = PromptConfig(),
    workers: int = 1,
) -> list[TrialRecord]:
    """Run every (task, config, trial) combination in that nesting order.

    Rows reach `out` in the same order regardless of `workers`, each one
    flushed as soon as it and all earlier rows are done.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    corpus = combined_corpus(tasks)
    jobs = [
        (task, config, trial, None if seed is None else seed + i)
        for i, (task, config, trial) in enumerate(
            (t, c, k) for t in tasks for c in configs for k in range(trials)
        )
    ]
    appender = CsvAppender(out) if out is not None else None
    records: list[TrialRecord] = []

    def run(job):
        task, config, trial, s = job
        return run_trial(task, config, base, client, trial, s, corpus)

    def emit(record):
        records.append(record)
        if appender:
            appender.append(record)

    if workers <= 1:
        for job in jobs:
            emit(run(job))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for record in pool.map(run, jobs):
                emit(record)
    return records


def records_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    appender = CsvAppender(buf)
    for r in records:
        appender.append(r)
    return buf.getvalue()
