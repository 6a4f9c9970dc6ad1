"""Command-line interface.

Subcommands::

    mxlearn run SCENARIO -o DIR        one trace (CSV + JSON summary)
    mxlearn sweep SCENARIO -o DIR      seeds x parameter grid
    mxlearn compare SCENARIO -o DIR    several algorithms on shared channels and noise
    mxlearn report SUMMARY... -o DIR   SVG figures from saved traces

Every trace is written as ``<stem>.csv`` next to ``<stem>.json``.
"""

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .io import export_summary, export_trace, trace_summary
from .plots import emit_plots, series_from_files, series_from_trace
from .runner import run_scenario
from .scenario import ALGORITHMS, Scenario, ScenarioError, load_scenario

__all__ = ["main", "build_parser", "parse_seeds", "apply_override"]


def parse_seeds(text):
    """``"0-4"`` -> ``[0, 1, 2, 3, 4]``; ``"1,5,9"`` -> ``[1, 5, 9]``."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds or min(seeds) < 0:
        raise argparse.ArgumentTypeError(f"invalid seed list {text!r}")
    return seeds


def apply_override(scenario, key, value):
    """Return ``scenario`` with dotted field ``key`` set to ``value``
    (a JSON literal, or a bare string)."""
    d = scenario.to_dict()
    try:
        value = json.loads(value)
    except json.JSONDecodeError:
        pass
    target = d
    parts = key.split(".")
    for p in parts[:-1]:
        if not isinstance(target.get(p), dict):
            raise ScenarioError(key, "not a nested field")
        target = target[p]
    target[parts[-1]] = value
    return Scenario.from_dict(d)


def _grid(specs):
    axes = []
    for spec in specs or []:
        key, _, values = spec.partition("=")
        if not values:
            raise ScenarioError(key, "grid needs KEY=V1,V2,...")
        axes.append([(key, v) for v in values.split(",")])
    return list(itertools.product(*axes)) if axes else [()]


def _write(trace, outdir, stem):
    export_trace(trace, os.path.join(outdir, f"{stem}.csv"))
    export_summary(trace, os.path.join(outdir, f"{stem}.json"))


def _job(args):
    scenario_dict, timing = args
    return run_scenario(Scenario.from_dict(scenario_dict), timing=timing)


def _run_all(scenarios, jobs, timing):
    payload = [(s.to_dict(), timing) for s in scenarios]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_job, payload))
    return [_job(p) for p in payload]


def _stats(traces):
    its = [t.iterations_to(0.99) for t in traces]
    reached = [i for i in its if i is not None]
    return {
        "runs": len(traces),
        "reached_99": len(reached),
        "median_iterations_to_99": float(np.median(reached)) if reached else None,
        "median_final_fw_gap": float(np.median([t.fw_gap[-1] for t in traces])),
        "mean_final_R": float(np.mean([t.R[-1] for t in traces])),
        "std_final_R": float(np.std([t.R[-1] for t in traces])),
    }


def cmd_run(args):
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = scenario.replace(seed=args.seed)
    os.makedirs(args.output, exist_ok=True)
    trace = run_scenario(scenario, timing=args.timing)
    _write(trace, args.output, args.stem)
    if args.plots:
        emit_plots([series_from_trace(trace)], args.output, args.stem)
    print(json.dumps({k: v for k, v in trace_summary(trace).items() if k not in ("scenario", "R_uniform", "R_oracle")}))
    return 0


def cmd_sweep(args):
    base = load_scenario(args.scenario)
    os.makedirs(args.output, exist_ok=True)
    report = []
    for combo in _grid(args.grid):
        scenario = base
        for key, value in combo:
            scenario = apply_override(scenario, key, value)
        scenarios = [scenario.replace(seed=s) for s in args.seeds]
        traces = _run_all(scenarios, args.jobs, args.timing)
        tag = "_".join(f"{k.replace('.', '-')}={v}" for k, v in combo) or "base"
        for s, t in zip(args.seeds, traces):
            _write(t, args.output, f"{tag}_seed{s}")
        entry = {"parameters": dict(combo), **_stats(traces)}
        report.append(entry)
        print(json.dumps(entry))
    with open(os.path.join(args.output, "sweep.json"), "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_compare(args):
    base = load_scenario(args.scenario)
    os.makedirs(args.output, exist_ok=True)
    report = {}
    first = {}
    for algo in args.algorithms:
        scenarios = [base.replace(algorithm=algo, seed=s) for s in args.seeds]
        traces = _run_all(scenarios, args.jobs, args.timing)
        for s, t in zip(args.seeds, traces):
            _write(t, args.output, f"{algo}_seed{s}")
        report[algo] = _stats(traces)
        first[algo] = traces[0]
        print(json.dumps({"algorithm": algo, **report[algo]}))
    with open(os.path.join(args.output, "compare.json"), "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    if args.plots:
        emit_plots([series_from_trace(t, a.upper()) for a, t in first.items()], args.output, "compare")
    return 0


def cmd_report(args):
    series = []
    for path in args.summaries:
        stem, _ = os.path.splitext(path)
        series.append(series_from_files(stem + ".csv", stem + ".json"))
    for p in emit_plots(series, args.output, args.stem):
        print(p)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="mxlearn", description="Matrix exponential learning simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeds=True):
        p.add_argument("scenario", help="scenario JSON file")
        p.add_argument("-o", "--output", required=True, help="output directory")
        p.add_argument("--timing", action="store_true", help="record wall-clock time per iteration")
        if seeds:
            p.add_argument("--seeds", type=parse_seeds, default=[0], help="e.g. 0-19 or 1,4,7")
            p.add_argument("-j", "--jobs", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("run", help="run one scenario")
    common(p, seeds=False)
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--stem", default="trace")
    p.add_argument("--plots", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="seed and parameter grid")
    common(p)
    p.add_argument("--grid", action="append", metavar="KEY=V1,V2",
                   help="scenario field to vary (dotted for nested, e.g. noise.eta); repeatable")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="several algorithms on shared channels and noise")
    common(p)
    p.add_argument("--algorithms", type=lambda s: s.split(","), default=["mxl", "iwf", "swf"],
                   help=f"comma-separated subset of {','.join(ALGORITHMS)}")
    p.add_argument("--plots", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="SVG figures from saved traces")
    p.add_argument("summaries", nargs="+", help="JSON summaries (the CSV with the same stem is read too)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--stem", default="figure")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "algorithms", None):
        bad = [a for a in args.algorithms if a not in ALGORITHMS]
        if bad:
            parser.error(f"unknown algorithm(s): {', '.join(bad)}")
    try:
        return args.func(args)
    except (ScenarioError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
