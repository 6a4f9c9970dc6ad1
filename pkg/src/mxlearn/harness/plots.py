"""Standalone SVG figures for the three experiment families.

* static convergence: normalized throughput ``r_n`` per algorithm;
* noisy feedback: sum rate per algorithm against the sum capacity;
* fading: learned, uniform and per-step optimal rates over time.

Rates are stored in nats and displayed in bits.
"""

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import read_summary, read_trace_csv  # noqa: E402

__all__ = ["Series", "series_from_trace", "series_from_files", "emit_plots"]

_BITS = 1.0 / np.log(2.0)


@dataclass
class Series:
    label: str
    R: np.ndarray
    r: np.ndarray
    R_max: float = np.nan
    R_uniform: np.ndarray = None
    R_oracle: np.ndarray = None
    period: float = None


def _label(scenario):
    label = scenario["algorithm"].upper()
    noise = scenario.get("noise", {})
    if noise.get("kind") == "synthetic":
        label += f" (eta={noise['eta']:g})"
    return label


def _period(scenario):
    ch = scenario.get("channel", {})
    return ch.get("period") if ch.get("mode") == "jakes" else None


def series_from_trace(trace, label=None):
    return Series(label or _label(trace.scenario), trace.R, trace.r, trace.R_max,
                  trace.R_uniform if trace.R_oracle is not None else None, trace.R_oracle,
                  _period(trace.scenario))


def series_from_files(csv_path, summary_path, label=None):
    rows = np.array(read_trace_csv(csv_path), dtype=float).reshape(-1, 7)
    summary = read_summary(summary_path)
    R_max = summary.get("R_max")
    unif = summary.get("R_uniform")
    orc = summary.get("R_oracle")
    return Series(
        label or _label(summary["scenario"]),
        rows[:, 1],
        rows[:, 3],
        np.nan if R_max is None else R_max,
        None if unif is None else np.array(unif, dtype=float),
        None if orc is None else np.array([np.nan if x is None else x for x in orc], dtype=float),
        _period(summary["scenario"]),
    )


def _save(fig, path):
    # fixed metadata keeps the SVG bytes reproducible
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def emit_plots(series, outdir, stem="figure"):
    """Write the figures that apply to ``series`` and return their paths.

    Fading series produce ``<stem>_fading.svg``; the others produce
    ``<stem>_throughput.svg`` and ``<stem>_rate.svg``.
    """
    plt.rcParams["svg.hashsalt"] = "mxlearn"
    os.makedirs(outdir, exist_ok=True)
    paths = []
    fading = [s for s in series if s.R_oracle is not None]
    static = [s for s in series if s.R_oracle is None]
    if static:
        fig, ax = plt.subplots(figsize=(6, 4))
        for s in static:
            ax.plot(np.arange(s.r.size), s.r, label=s.label)
        ax.set_xlabel("iteration")
        ax.set_ylabel("normalized throughput $R_n / R_0$")
        ax.grid(alpha=0.3)
        ax.legend()
        paths.append(_save(fig, os.path.join(outdir, f"{stem}_throughput.svg")))

        fig, ax = plt.subplots(figsize=(6, 4))
        for s in static:
            ax.plot(np.arange(s.R.size), s.R * _BITS, label=s.label)
        caps = [s.R_max for s in static if np.isfinite(s.R_max)]
        if caps:
            ax.axhline(caps[0] * _BITS, color="k", ls="--", lw=1, label="sum capacity")
        ax.set_xlabel("iteration")
        ax.set_ylabel("sum rate (bit/s/Hz)")
        ax.grid(alpha=0.3)
        ax.legend()
        paths.append(_save(fig, os.path.join(outdir, f"{stem}_rate.svg")))
    if fading:
        fig, ax = plt.subplots(figsize=(6, 4))
        for s in fading:
            t = np.arange(s.R.size) * (s.period or 1.0)
            ax.plot(t, s.R * _BITS, label=s.label)
            ax.plot(t, s.R_uniform * _BITS, ls=":", label=f"{s.label}: uniform")
            if np.any(np.isfinite(s.R_oracle)):
                ax.plot(t, s.R_oracle * _BITS, ls="--", label=f"{s.label}: capacity")
        ax.set_xlabel("time (s)" if fading[0].period else "iteration")
        ax.set_ylabel("sum rate (bit/s/Hz)")
        ax.grid(alpha=0.3)
        ax.legend()
        paths.append(_save(fig, os.path.join(outdir, f"{stem}_fading.svg")))
    return paths
