"""Manifests, hole lookup and hole substitution over multi-file repos."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import ast as A
from .parser import parse_repo


class HoleNotFound(LookupError):
    def __init__(self, hole_id):
        super().__init__(f"no hole with id {hole_id}")
        self.hole_id = hole_id


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Manifest:
    """A task manifest: ordered source files, the sketch file, the tests file."""

    root: Path
    files: tuple[str, ...]
    sketch: str
    tests: Optional[str] = None
    comment: str = ""

    def sources(self) -> list[tuple[str, str]]:
        out = []
        for rel in self.files:
            path = self.root / rel
            if not path.is_file():
                raise FileNotFoundError(f"manifest lists missing file: {path}")
            out.append((rel, path.read_text(encoding="utf-8")))
        return out

    def tests_text(self) -> str:
        if self.tests is None:
            raise ManifestError("manifest has no tests file")
        path = self.root / self.tests
        if not path.is_file():
            raise FileNotFoundError(f"missing tests file: {path}")
        return path.read_text(encoding="utf-8")


def load_manifest(path) -> Manifest:
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ManifestError(f"{path}: invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    files = data.get("files")
    if not isinstance(files, list) or not files or not all(isinstance(f, str) for f in files):
        raise ManifestError(f"{path}: 'files' must be a non-empty list of paths")
    sketch = data.get("sketch", files[-1])
    if not isinstance(sketch, str) or sketch not in files:
        raise ManifestError(f"{path}: 'sketch' must name one of the listed files")
    tests = data.get("tests")
    if tests is not None and not isinstance(tests, str):
        raise ManifestError(f"{path}: 'tests' must be a path")
    comment = data.get("comment", "")
    if not isinstance(comment, str):
        raise ManifestError(f"{path}: 'comment' must be text")
    return Manifest(path.parent, tuple(files), sketch, tests, comment)


def parse_manifest(manifest: Manifest) -> A.Repo:
    return parse_repo(manifest.sources())


def sources_of(repo: A.Repo) -> list[tuple[str, str]]:
    return [(f.path, f.text) for f in repo.files]


def find_hole(repo: A.Repo, hole_id: int) -> A.Hole:
    for h in repo.holes():
        if h.id == hole_id:
            return h
    raise HoleNotFound(hole_id)


def generative_hole(repo: A.Repo) -> Optional[A.Hole]:
    for h in repo.holes():
        if h.generative:
            return h
    return None


def _offset(text: str, line: int, col: int) -> int:
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts[line - 1] + col - 1


def substitute_hole(repo: A.Repo, hole_id: int, fragment: str) -> A.Repo:
    """Splice `fragment` over the hole's source text and re-parse everything.

    The fragment is parenthesized so operator precedence around the hole is
    preserved. Raises ParseError when the result does not parse.
    """
    hole = find_hole(repo, hole_id)
    span = hole.span
    sources = sources_of(repo)
    for i, (path, text) in enumerate(sources):
        if path == span.file:
            start = _offset(text, span.start_line, span.start_col)
            end = _offset(text, span.end_line, span.end_col) + 1
            sources[i] = (path, text[:start] + "(" + fragment + ")" + text[end:])
            break
    return parse_repo(sources)


def hole_at(repo: A.Repo, file: str, line: int, col: int) -> int:
    """Resolve a cursor position to the id of the hole under or just before it."""
    for h in repo.holes():
        s = h.span
        if s.file != file or not (s.start_line <= line <= s.end_line):
            continue
        if s.start_col <= col <= s.end_col + 1:
            return h.id
    raise HoleNotFound(f"{file}:{line}:{col}")
