"""Scenario orchestration, metrics, trace persistence and plots."""

from .io import export_summary, export_trace, iterations_to_99_from_csv, read_summary, read_trace_csv, trace_summary
from .metrics import (
    iterations_to_fraction,
    mean_guarantee_eps,
    measurement_bound,
    normalized_throughput,
    outage_frequency,
    weighted_average,
)
from .runner import CSV_COLUMNS, Trace, draw_antennas, run_scenario, tune_constant_step
from .scenario import (
    ALGORITHMS,
    SCHEMA_VERSION,
    ChannelConfig,
    NoiseConfig,
    Scenario,
    ScenarioError,
    load_scenario,
    save_scenario,
)

__all__ = [
    "ALGORITHMS",
    "CSV_COLUMNS",
    "SCHEMA_VERSION",
    "ChannelConfig",
    "NoiseConfig",
    "Scenario",
    "ScenarioError",
    "Trace",
    "draw_antennas",
    "export_summary",
    "export_trace",
    "iterations_to_99_from_csv",
    "iterations_to_fraction",
    "load_scenario",
    "mean_guarantee_eps",
    "measurement_bound",
    "normalized_throughput",
    "outage_frequency",
    "read_summary",
    "read_trace_csv",
    "run_scenario",
    "save_scenario",
    "trace_summary",
    "tune_constant_step",
    "weighted_average",
]
