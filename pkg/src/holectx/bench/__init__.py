"""MVU-style completion benchmark: tasks, baselines, ablation runner, reports."""

from .baselines import combined_corpus, exhaustive_context, lexical_retrieve
from .report import EmptyRecords, read_records, summarize, summary_json
from .runner import (
    FEATURE_CONFIGS, AblationConfig, TrialError, TrialRecord, parse_configs, records_csv, run_matrix,
    run_trial,
)
from .tasks import MissingFile, Task, load_task, load_tasks, shipped_tasks_dir, verify_report, verify_task

__all__ = [
    "AblationConfig", "EmptyRecords", "FEATURE_CONFIGS", "MissingFile", "Task", "TrialError", "TrialRecord",
    "combined_corpus", "exhaustive_context", "lexical_retrieve", "load_task", "load_tasks", "parse_configs",
    "read_records", "records_csv", "run_matrix", "run_trial", "shipped_tasks_dir", "summarize",
    "summary_json", "verify_report", "verify_task",
]
