"""Summary tables over trial records."""

from __future__ import annotations

import csv
import io
import json
from statistics import fmean
from typing import Sequence

from .runner import TrialRecord


class EmptyRecords(ValueError):
    pass


def _ordered(values):
    return list(dict.fromkeys(values))


def summary_rows(records: Sequence[TrialRecord]) -> list[dict]:
    """One row per config: per-task and overall mean fraction of tests
    passed, and mean characters sent, received, and wall time."""
    if not records:
        raise EmptyRecords("no records to summarize")
    tasks = _ordered(r.task for r in records)
    rows = []
    for config in _ordered(r.config for r in records):
        mine = [r for r in records if r.config == config]
        per_task = {}
        for t in tasks:
            xs = [r.fraction for r in mine if r.task == t]
            per_task[t] = fmean(xs) if xs else None
        rows.append({
            "config": config,
            "tasks": per_task,
            "overall": fmean(r.fraction for r in mine),
            "chars_sent": fmean(r.chars_sent for r in mine),
            "chars_received": fmean(r.chars_received for r in mine),
            "wall_ms": fmean(r.wall_ms for r in mine),
            "trials": len(mine),
        })
    return rows


def _pct(x) -> str:
    return "-" if x is None else f"{100 * x:.0f}%"


def summarize(records: Sequence[TrialRecord]) -> str:
    rows = summary_rows(records)
    tasks = list(rows[0]["tasks"])
    header = ["config"] + tasks + ["overall", "sent", "received", "wall_ms"]
    table = [header]
    for r in rows:
        table.append(
            [r["config"]] + [_pct(r["tasks"][t]) for t in tasks]
            + [_pct(r["overall"]), f"{r['chars_sent']:.0f}", f"{r['chars_received']:.0f}", f"{r['wall_ms']:.0f}"]
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for n, row in enumerate(table):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def summary_json(records: Sequence[TrialRecord]) -> str:
    return json.dumps(summary_rows(records), indent=2)


def read_records(text: str) -> list[TrialRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        epr = tuple(int(x) for x in row["errors_per_round"].split(";") if x)
        out.append(TrialRecord(
            row["task"], row["config"], int(row["trial"]), int(row["tests_passed"]), int(row["tests_total"]),
            int(row["rounds"]), epr, int(row["chars_sent"]), int(row["chars_received"]), int(row["wall_ms"]),
        ))
    return out
