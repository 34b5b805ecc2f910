"""Command line entry point: ``zerocert <subcommand> [options]``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .extremal import ExtremalProblem, InfeasibleProblem, greedy_optimize
from .runner import TASKS, ConfigError, RunConfig, emit_report, parse_overrides, run

EXIT_CONFIG = 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat 'dotted.key = value' file")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("table", "records"), help="output format (default records)")

    p = argparse.ArgumentParser(prog="zerocert", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("verify-cond2", parents=[common], help="grid certification of the kernel inequality")
    c.add_argument("--step-a", type=float)
    c.add_argument("--step-b", type=float)
    c.add_argument("--step-t", type=float)
    c.add_argument("--margin", type=float)
    c.add_argument("--workers", type=int)
    c.add_argument("--region", choices=("1", "2", "3", "handoff", "all"), default="all")

    sub.add_parser("density-table", parents=[common], help="weighted-sum table, case-1 context, zero schedule")

    e = sub.add_parser("extremal", help="budget-constrained maximization")
    esub = e.add_subparsers(dest="action", required=True)
    solve = esub.add_parser("solve", parents=[common], help="solve one problem given as JSON")
    solve.set_defaults(format=None)

    k = sub.add_parser("case-analysis", parents=[common], help="case bounds and the final verdict")
    k.add_argument("--case", choices=("1-6", "7", "8", "all"), default="all")
    k.add_argument("--sensitivity", nargs="*", metavar="NAME=VALUE",
                   help="override chain inputs; bare flag inflates c1 to 0.08")

    sub.add_parser("reproduce-paper", parents=[common], help="every task, full report")
    sub.add_parser("reproduce", parents=[common], help="alias of reproduce-paper")
    return p


def _base_config(args) -> RunConfig:
    if args.config is None:
        return RunConfig()
    try:
        text = args.config.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.config}: {exc}") from exc
    return RunConfig.from_text(text)


def _configure(args) -> RunConfig:
    cfg = _base_config(args)
    changes: dict = {}
    cmd = args.command
    if cmd == "verify-cond2":
        changes["tasks"] = ("cond2",)
        for opt, attr in (("step_a", "cond2_step_a"), ("step_b", "cond2_step_b"), ("step_t", "cond2_step_t"),
                          ("margin", "cond2_margin"), ("workers", "cond2_workers")):
            if getattr(args, opt) is not None:
                changes[attr] = getattr(args, opt)
        if args.region != "all":
            changes["cond2_regions"] = (args.region,)
    elif cmd == "density-table":
        changes["tasks"] = ("density",)
    elif cmd == "case-analysis":
        changes["tasks"] = ("cases",)
        changes["cases_select"] = (args.case,)
        if args.sensitivity is not None:
            changes["sensitivity"] = parse_overrides(args.sensitivity or ["c1=0.08"])
    elif cmd in ("reproduce-paper", "reproduce"):
        changes["tasks"] = TASKS
    if args.out is not None:
        changes["out"] = str(args.out)
    if args.format is not None:
        changes["format"] = args.format
    return dataclasses.replace(cfg, **changes)


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _solve(args) -> int:
    if args.config is None:
        raise ConfigError("extremal solve needs --config FILE with a problem record")
    try:
        problem = ExtremalProblem.from_dict(json.loads(args.config.read_text()))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, InfeasibleProblem) as exc:
        raise ConfigError(f"bad problem record: {exc}") from exc
    config = greedy_optimize(problem)
    _write(json.dumps({"problem": problem.to_dict(), "configuration": config.to_dict()}, indent=2) + "\n",
           str(args.out) if args.out else None)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "extremal":
            return _solve(args)
        cfg = _configure(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = run(cfg)
    _write(emit_report(report, cfg.format), cfg.out)
    for err in report.task_errors:
        print(f"task error: {err}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
