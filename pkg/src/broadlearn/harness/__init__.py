"""Experiment harness: dataset I/O, schedules, persistence, benchmarks, CLI."""

from .bench import BenchResult, bench
from .config import ExperimentConfig, Step, load_config, parse_config
from .data import Dataset, load_dataset
from .persist import load_state, save_state
from .runner import UpdateReport, render_table, run_schedule, write_csv
from .synth import make_surrogate, write_surrogate_csv

__all__ = [
    "BenchResult",
    "Dataset",
    "ExperimentConfig",
    "Step",
    "UpdateReport",
    "bench",
    "load_config",
    "load_dataset",
    "load_state",
    "make_surrogate",
    "parse_config",
    "render_table",
    "run_schedule",
    "save_state",
    "write_csv",
    "write_surrogate_csv",
]
