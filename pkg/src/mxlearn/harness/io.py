"""Trace persistence: CSV rows and a JSON summary.

CSV columns, in order: ``n, R_n, Rbar_n, r_n, fw_gap, fenchel, wall_ms``.
Floats are written with ``repr`` so they parse back to the same values.
"""

import csv
import json

import numpy as np

from .metrics import iterations_to_fraction
from .runner import CSV_COLUMNS

__all__ = ["export_trace", "read_trace_csv", "trace_summary", "export_summary", "read_summary",
           "iterations_to_99_from_csv"]


def export_trace(trace, path):
    """Write the per-iteration CSV; an empty trace yields the header only."""
    rows = trace.records() if trace is not None else []
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([row[0], *(repr(v) for v in row[1:])])


def read_trace_csv(path):
    """Parse a trace CSV into a list of tuples in column order."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected columns {header}")
        return [(int(r[0]), *(float(v) for v in r[1:])) for r in reader]


def _finite_or_none(x):
    return float(x) if x is not None and np.isfinite(x) else None


def trace_summary(trace):
    """Scenario echo, ``R_max``, ``R_0`` and iterations to 99 % of ``R_max``."""
    summary = {
        "scenario": trace.scenario,
        "antennas": list(trace.M),
        "R_max": _finite_or_none(trace.R_max),
        "R_0": float(trace.R_0),
        "L": float(trace.L),
        "iterations": int(len(trace) - 1),
        "final_R": float(trace.R[-1]),
        "final_fw_gap": float(trace.fw_gap[-1]),
        "iterations_to_99": trace.iterations_to(0.99),
    }
    if trace.R_oracle is not None:
        summary["mean_R"] = float(np.mean(trace.R[1:])) if len(trace) > 1 else float(trace.R[0])
        summary["mean_R_uniform"] = float(np.mean(trace.R_uniform[1:])) if len(trace) > 1 else trace.R_0
        summary["mean_R_oracle"] = _finite_or_none(np.mean(trace.R_oracle[1:]) if len(trace) > 1 else np.nan)
        summary["R_uniform"] = [float(x) for x in trace.R_uniform]
        summary["R_oracle"] = [_finite_or_none(x) for x in trace.R_oracle]
    return summary


def export_summary(trace, path):
    with open(path, "w") as fh:
        json.dump(trace_summary(trace), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_summary(path):
    with open(path) as fh:
        return json.load(fh)


def iterations_to_99_from_csv(path, R_max):
    """Recompute the summary's iterations-to-99 % from a CSV file."""
    rows = read_trace_csv(path)
    return iterations_to_fraction([r[1] for r in rows], R_max, 0.99)

