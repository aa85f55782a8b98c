"""Command-line front end.

Subcommands: ``synth``, ``hotspots``, ``simulate``, ``compare``. Exit codes:
0 success, 1 usage or configuration error, 2 data or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

import numpy as np

from . import report
from .config import KEYS, ExperimentConfig, parse_value
from .errors import ConfigInvalid, DataError, NoUsableCandidate
from .hotspots import (build_grid, optimize_grid_size, personal_weights, public_weights,
                       visited_ratio)
from .sim.engine import EVENT_COLUMNS, run
from .sim.synth import synth_from_spec
from .traces import Trace, detect_stay_points, format_log, read_log

log = logging.getLogger("hoten")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_keys(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=argparse.SUPPRESS, metavar="PATH",
                        help="flat key = value config file")
    for key, (conv, _default, help_) in KEYS.items():
        flags = [f"--{key.replace('_', '-')}"]
        if "_" in key:
            flags.append(f"--{key}")
        kwargs = dict(dest=f"key_{key}", default=argparse.SUPPRESS, help=help_)
        if conv.__name__ == "_bool":
            # switches take no value so they never swallow the subcommand
            parser.add_argument(*flags, action="store_const", const="true", **kwargs)
            parser.add_argument(*(f"--no-{f[2:]}" for f in flags), action="store_const",
                                const="false", dest=f"key_{key}", default=argparse.SUPPRESS,
                                help=argparse.SUPPRESS)
        else:
            parser.add_argument(*flags, metavar=key.upper(), **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hoten", description=__doc__.splitlines()[0])
    _add_keys(parser)
    parser.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, help_ in (("synth", "write synthetic GPS traces"),
                        ("hotspots", "hotspot grid, weights, Hurst fit, visited ratios"),
                        ("simulate", "run the routing protocols over the TTL sweep"),
                        ("compare", "compare metrics files and check expected orderings")):
        p = sub.add_parser(name, help=help_)
        _add_keys(p)
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        if name == "compare":
            p.add_argument("metrics", nargs="+", help="metrics.csv files")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {}
    for attr, value in vars(args).items():
        if attr.startswith("key_"):
            key = attr[4:]
            overrides[key] = parse_value(key, value)
    return ExperimentConfig.load(getattr(args, "config", None), overrides)


def load_traces(config: ExperimentConfig) -> list[Trace]:
    if config.require_source() == "synth":
        return synth_from_spec(config.synth_spec())
    traces: list[Trace] = []
    seen = set()
    for path in config["traces"]:
        for tr in read_log(path):
            if tr.node_id in seen:
                raise DataError(f"node {tr.node_id!r} appears in more than one trace file")
            seen.add(tr.node_id)
            traces.append(tr)
    return traces


def _safe_name(node: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", node)


def cmd_synth(config: ExperimentConfig) -> list[Path]:
    traces = synth_from_spec(config.synth_spec())
    path = config.out_dir / "traces.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_log(traces), encoding="utf-8")
    print(f"wrote {len(traces)} traces to {path}")
    return [path]


def cmd_hotspots(config: ExperimentConfig) -> list[Path]:
    traces = load_traces(config)
    stay = config.stay_params()
    stays = {tr.node_id: detect_stay_points(tr, stay) for tr in traces}
    everything = [p for pts in stays.values() for p in pts]
    if not everything:
        raise DataError("no stay points detected in any trace")
    fixed = config["grid_size"]
    try:
        fit = optimize_grid_size(everything, config["grid_candidates"])
    except NoUsableCandidate:
        if fixed is None:
            raise
        fit = None
    d = fixed if fixed is not None else fit.d_optimized
    grid = build_grid(everything, d)
    out = config.out_dir
    files = [
        report.write_csv(out / "grid.csv", report.GRID_COLUMNS, report.grid_rows(grid)),
        report.write_csv(out / "public_weights.csv", ("cell_index", "weight"),
                         report.weight_rows(public_weights(everything, grid))),
        report.write_csv(out / "hurst_fit.csv", ("d", "h"), report.hurst_rows(fit)),
    ]
    ratios = []
    for node in sorted(stays):
        w = personal_weights(stays[node], grid)
        files.append(report.write_csv(out / "personal_weights" / f"{_safe_name(node)}.csv",
                                      ("cell_index", "weight"), report.weight_rows(w)))
        ratio = visited_ratio(w, config["confidence"]) if stays[node] else None
        ratios.append((node, ratio))
    known = [r for _, r in ratios if r is not None]
    ratios.append(("mean", float(np.mean(known)) if known else None))
    files.append(report.write_csv(out / "visited_ratio.csv", ("node_id", "visited_ratio"), ratios))
    print(f"grid d={report.fmt(d)} K={grid.K}; {len(everything)} stay points from "
          f"{len(traces)} nodes; mean visited ratio {report.fmt(ratios[-1][1])}")
    return files


def cmd_simulate(config: ExperimentConfig) -> list[Path]:
    protocols = config.protocols()
    sims = {p: config.sim_config(p) for p in protocols}
    traces = load_traces(config)
    out = config.out_dir
    results, files = [], []
    for proto in protocols:
        res = run(sims[proto], traces, record=config["events"])
        results.append(res)
        for ttl, rows in res.event_logs.items():
            files.append(report.write_csv(out / "events" / f"{proto}_ttl{report.fmt(ttl)}.csv",
                                          EVENT_COLUMNS, rows))
    rows = report.metrics_rows(results)
    files.insert(0, report.write_csv(out / "metrics.csv", report.METRIC_COLUMNS, rows))
    print(report.format_table(report.METRIC_COLUMNS, rows))
    return files


def cmd_compare(config: ExperimentConfig, paths) -> list[Path]:
    missing = [p for p in paths if not Path(p).is_file()]
    if missing:
        raise DataError(f"metrics file not found: {', '.join(map(str, missing))}")
    table = report.load_metric_tables(paths)
    out = config.out_dir
    comp = report.comparison_rows(table)
    checks = report.directional_checks(table)
    files = [
        report.write_csv(out / "comparison.csv", report.COMPARISON_COLUMNS, comp),
        report.write_csv(out / "checks.csv", report.CHECK_COLUMNS, checks),
    ]
    print(report.format_table(report.CHECK_COLUMNS, checks))
    return files


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        config = config_from_args(args)
        if args.command == "synth":
            cmd_synth(config)
        elif args.command == "hotspots":
            cmd_hotspots(config)
        elif args.command == "simulate":
            cmd_simulate(config)
        else:
            cmd_compare(config, args.metrics)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hoten: error: {exc}", file=sys.stderr)
        return 1
    except ConfigInvalid as exc:
        print(f"hoten: config error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"hoten: data error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
