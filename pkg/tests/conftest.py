from pathlib import Path

import pytest

from holectx.bench import load_task, load_tasks, shipped_tasks_dir

FIXTURES = Path(__file__).parent / "fixtures"

_results: dict[int, dict] = {}


@pytest.fixture(scope="session")
def tasks():
    return load_tasks()


@pytest.fixture(scope="session")
def emojipaint():
    return load_task(shipped_tasks_dir() / "emojipaint")


@pytest.fixture(scope="session")
def emoji_manifest() -> Path:
    return shipped_tasks_dir() / "emojipaint" / "manifest.json"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _results.setdefault(number, {"title": title, "status": "PASS"})
    if report.skipped and entry["status"] == "PASS":
        entry["status"] = "SKIP"
    elif report.failed:
        entry["status"] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        terminalreporter.write_line(f"criterion {number:>2}: {entry['status']:<4}  {entry['title']}")
