import json
import shutil
import subprocess
import sys

import pytest

from holectx.cli import main
from holectx.bench import shipped_tasks_dir
from conftest import FIXTURES
from test_prompt import EMOJI_HEADERS


@pytest.fixture
def reference_file(tmp_path, emojipaint):
    p = tmp_path / "ref.sl"
    p.write_text(emojipaint.reference, encoding="utf-8")
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_reference_fill_is_clean(self, capsys, emoji_manifest, reference_file):
        assert run(capsys, "check", emoji_manifest, "--fill", reference_file)[0] == 0

    def test_sketch_alone_is_clean(self, capsys, emoji_manifest):
        assert run(capsys, "check", emoji_manifest) == (0, "", "")

    def test_errors_exit_two(self, capsys, emoji_manifest, tmp_path):
        bad = tmp_path / "bad.sl"
        bad.write_text("fun (model, action) -> grid end")
        code, out, _ = run(capsys, "check", emoji_manifest, "--fill", bad)
        assert code == 2 and out.startswith("UnboundVariable at update.sl:")

    def test_syntax_error_exit_two(self, capsys, emoji_manifest, tmp_path):
        bad = tmp_path / "bad.sl"
        bad.write_text("case model, action |")
        code, out, _ = run(capsys, "check", emoji_manifest, "--fill", bad)
        assert code == 2 and out.startswith("SyntaxError at ")

    def test_missing_manifest(self, capsys, tmp_path):
        assert run(capsys, "check", tmp_path / "nope.json")[0] == 2


class TestRetrieve:
    def test_text(self, capsys, emoji_manifest):
        code, out, _ = run(capsys, "retrieve", emoji_manifest, "--hole", 1, "--types", "--headers")
        assert code == 0
        assert sum(line.startswith("type ") for line in out.splitlines()) == 6
        assert out.rstrip("\n").endswith(EMOJI_HEADERS)
        assert out.startswith("The expected type of the hole is: (Model, Action) -> Model")

    def test_json(self, capsys, emoji_manifest):
        code, out, _ = run(capsys, "retrieve", emoji_manifest, "--types", "--headers", "--format", "json")
        data = json.loads(out)
        assert code == 0 and data["expectedType"] == "(Model, Action) -> Model"
        assert [h["name"] for h in data["headers"]] == ["model_init", "fillRowInGrid", "clearGrid", "updateGrid"]

    def test_bad_hole(self, capsys, emoji_manifest):
        assert run(capsys, "retrieve", emoji_manifest, "--hole", 7)[0] == 2


class TestUsage:
    @pytest.mark.parametrize("argv", [[], ["frobnicate"], ["check"], ["retrieve", "m.json", "--bogus"],
                                      ["bench", "x", "--client", "http", "--out", "o.csv"]])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 1

    def test_unknown_client(self, capsys, emoji_manifest):
        assert run(capsys, "complete", emoji_manifest, "--client", "pigeon")[0] == 1

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == 0


class TestComplete:
    def test_replay_twice_identical(self, capsys, emoji_manifest):
        args = ("complete", emoji_manifest, "--hole", 1, "--client", f"replay:{FIXTURES / 'replay.jsonl'}",
                "--types", "--headers")
        first = run(capsys, *args)
        assert first[0] == 0 and run(capsys, *args) == first

    def test_record_then_replay(self, capsys, emoji_manifest, tmp_path):
        rec1, rec2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        script = f"script:{FIXTURES / 'emojipaint_two_stage.json'}"
        first = run(capsys, "complete", emoji_manifest, "--client", script, "--types", "--headers", "--record", rec1)
        second = run(capsys, "complete", emoji_manifest, "--client", f"replay:{rec1}", "--types", "--headers",
                     "--record", rec2)
        assert first == second
        assert rec1.read_text(encoding="utf-8") == rec2.read_text(encoding="utf-8")
        assert "errors per round: [1, 0]" in first[2]

    def test_client_error_exit_three(self, capsys, emoji_manifest):
        code, _, err = run(capsys, "complete", emoji_manifest, "--client", "http", "--api-base",
                           "http://127.0.0.1:9")
        assert code == 3 and "client error" in err

    def test_missing_replay_file(self, capsys, emoji_manifest, tmp_path):
        assert run(capsys, "complete", emoji_manifest, "--client", f"replay:{tmp_path / 'x'}")[0] == 3


class TestBench:
    def test_writes_csv_and_summary(self, capsys, tmp_path):
        out, js = tmp_path / "r.csv", tmp_path / "s.json"
        code, stdout, _ = run(capsys, "bench", shipped_tasks_dir(), "--trials", 1, "--client",
                              f"replay:{FIXTURES / 'replay.jsonl'}", "--out", out, "--configs", "T|H|E,-|-|-",
                              "--json", js)
        assert code == 0
        assert len(out.read_text().splitlines()) == 1 + 3 * 2
        assert stdout.splitlines()[0].split()[:4] == ["config", "counter", "emojipaint", "todo"]
        assert len(json.loads(js.read_text())) == 2

    def test_invalid_task_is_domain_error(self, capsys, tmp_path):
        d = tmp_path / "tasks" / "emojipaint"
        shutil.copytree(shipped_tasks_dir() / "emojipaint", d)
        (d / "reference.sl").write_text("fun (m, a) -> m + 1 end")
        code = run(capsys, "bench", d.parent, "--trials", 1, "--client", "replay:" + str(FIXTURES / "replay.jsonl"),
                   "--out", tmp_path / "r.csv")[0]
        assert code == 2

    def test_bad_configs(self, capsys, tmp_path):
        code = run(capsys, "bench", shipped_tasks_dir(), "--trials", 1, "--client", "http", "--out",
                   tmp_path / "r.csv", "--configs", "X|Y")[0]
        assert code == 1


def test_console_script_entry_point(emoji_manifest):
    proc = subprocess.run([sys.executable, "-m", "holectx", "retrieve", str(emoji_manifest)],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "The expected type of the hole is: (Model, Action) -> Model"
