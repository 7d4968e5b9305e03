"""Command line entry point ``pce-sde``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import list_experiments, resolve_config
from .runner import run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pce-sde", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config and write CSV results")
    run.add_argument("config", help="path to a TOML config, or the name of a bundled experiment")
    run.add_argument("--out", default="results", help="output directory (default: results)")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.add_argument("--nodes", type=int, default=None, help="override the quadrature size")
    run.add_argument("--parallel", action="store_true", help="solve node ODEs in a thread pool")

    sub.add_parser("list-experiments", help="list bundled experiment configs")

    plot = sub.add_parser("plot", help="plot a results CSV")
    plot.add_argument("csv", help="results CSV written by 'run'")
    plot.add_argument("--format", default="svg", choices=("svg", "png", "pdf"))
    plot.add_argument("--out", default=None, help="output file (default: next to the CSV)")
    return parser


def _cmd_run(args) -> int:
    cfg = resolve_config(args.config).with_overrides(
        seed=args.seed, nodes=args.nodes, parallel=True if args.parallel else None)
    report = run_experiment(cfg)
    out = Path(args.out)
    path = report.write(out, cfg.name)
    if cfg.kind == "comparison":
        report.write_relative_times(out / f"{cfg.name}.timing.csv")
    print(path)
    return 0


def _cmd_list(args) -> int:
    for name in list_experiments():
        cfg = resolve_config(name)
        print(f"{name}\t{cfg.kind}\t{cfg.description}")
    return 0


def _cmd_plot(args) -> int:
    from .plot import plot_csv

    print(plot_csv(args.csv, fmt=args.format, out=args.out))
    return 0


COMMANDS = {"run": _cmd_run, "list-experiments": _cmd_list, "plot": _cmd_plot}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Exception as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        print(json.dumps(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
