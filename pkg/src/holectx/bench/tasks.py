"""Benchmark tasks: a multi-file app, an update sketch, tests, a reference."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..dynamics import run_tests
from ..statics import check_repo
from ..syntax import ast as A
from ..syntax.parser import ParseError
from ..syntax.repo import Manifest, ManifestError, generative_hole, load_manifest, parse_manifest, substitute_hole

MIN_TESTS, MAX_TESTS = 10, 15


class MissingFile(FileNotFoundError):
    pass


@dataclass(frozen=True)
class Task:
    name: str
    manifest: Manifest
    sketch_comment: str
    tests_text: str
    reference: str
    repo: A.Repo

    @property
    def hole_id(self) -> int:
        return generative_hole(self.repo).id

    @property
    def sketch_text(self) -> str:
        return self.repo.file(self.manifest.sketch).text

    def filled(self, fragment: str) -> A.Repo:
        return substitute_hole(self.repo, self.hole_id, fragment)


def _read(path: Path) -> str:
    if not path.is_file():
        raise MissingFile(f"missing file: {path}")
    return path.read_text(encoding="utf-8")


def load_task(directory) -> Task:
    directory = Path(directory)
    if not (directory / "manifest.json").is_file():
        raise MissingFile(f"missing file: {directory / 'manifest.json'}")
    manifest = load_manifest(directory / "manifest.json")
    if manifest.tests is None:
        raise ManifestError(f"{directory}: manifest names no tests file")
    tests_text = _read(directory / manifest.tests)
    reference = _read(directory / "reference.sl")
    try:
        repo = parse_manifest(manifest)
    except FileNotFoundError as e:
        raise MissingFile(str(e)) from None
    except ParseError as e:
        raise ManifestError(f"{directory}: {e}") from None
    gen = generative_hole(repo)
    if gen is None or gen.span.file != manifest.sketch:
        raise ManifestError(f"{directory}: the sketch file must contain the '??' hole")
    return Task(directory.name, manifest, manifest.comment, tests_text, reference, repo)


def shipped_tasks_dir() -> Path:
    return Path(str(resources.files("holectx") / "tasks"))


def load_tasks(directory=None) -> list[Task]:
    """Every task directory (one holding manifest.json) under `directory`,
    sorted by name. A directory that is itself a task loads alone."""
    directory = Path(directory) if directory is not None else shipped_tasks_dir()
    if (directory / "manifest.json").is_file():
        return [load_task(directory)]
    dirs = sorted(p for p in directory.iterdir() if (p / "manifest.json").is_file())
    return [load_task(d) for d in dirs]


def verify_report(task: Task) -> list[str]:
    """Reasons the task is invalid; empty when it is valid."""
    problems = []
    try:
        filled = task.filled(task.reference)
    except ParseError as e:
        return [f"reference does not parse: {e}"]
    errors = check_repo(filled)[1]
    problems += [f"reference has a static error: {e}" for e in errors]
    try:
        report = run_tests(filled, task.tests_text)
    except ParseError as e:
        return problems + [f"tests do not parse: {e}"]
    if not MIN_TESTS <= report.total <= MAX_TESTS:
        problems.append(f"expected {MIN_TESTS}-{MAX_TESTS} tests, found {report.total}")
    for o in report.outcomes:
        if o.kind != "Pass":
            problems.append(f"test {o.index}: {o.kind} {o.message}".rstrip())
    return problems


def verify_task(task: Task) -> bool:
    return not verify_report(task)
