"""Command line: ``ifsbench {check,transfer,cover,run,validate}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..symbolic.covers import fischer_cover
from ..symbolic.shifts import GraphBacked, shift_from_dict
from .builtins import BUILTINS, builtin_config
from .config import ConfigError, parse_config
from .emit import FORMATS, emit_report
from .ops import CHECK, TRANSFER, UTIL, OPS
from .runner import exit_code, run_experiment

EXIT_CONFIG = 3


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config (JSON)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--horizon-scale", type=float, default=1.0,
                        help="multiply every horizon parameter")
    p = argparse.ArgumentParser(prog="ifsbench",
                                description="Probe specification, shadowing, mixing and periodicity "
                                            "of generalized iterated function systems.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="run the checker tasks of a config")
    sub.add_parser("transfer", parents=[common], help="run the transfer tasks of a config")
    sub.add_parser("cover", parents=[common], help="print the Fischer cover of the config's subshift")
    run = sub.add_parser("run", parents=[common], help="run a built-in experiment")
    run.add_argument("builtin", choices=sorted(BUILTINS))
    sub.add_parser("validate", parents=[common], help="validate a config and exit")
    return p


def _load(args):
    if not args.config:
        raise ConfigError(["--config is required"])
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"cannot read {args.config}: {exc}"]) from None
    config = parse_config(text)
    return config.with_seed(args.seed) if args.seed is not None else config


def _write(text, out):
    if out is None:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            config = builtin_config(args.builtin)
            if args.seed is not None:
                config = config.with_seed(args.seed)
        else:
            config = _load(args)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        print(f"config {config.name!r} is valid ({len(config.tasks)} tasks)")
        return 0

    if args.command == "cover":
        shift = shift_from_dict(dict(config.data["subshift"], alphabet=config.data["alphabet"])
                                if config.data["subshift"].get("type") != "morse-cover"
                                else config.data["subshift"])
        if not isinstance(shift, GraphBacked):
            print("config error: the subshift has no finite graph presentation", file=sys.stderr)
            return EXIT_CONFIG
        cover = fischer_cover(shift.presentation)
        text = (json.dumps(cover.to_dict(), indent=2) + "\n") if args.format == "json" else cover.to_dot()
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0

    categories = {"check": [CHECK, UTIL], "transfer": [TRANSFER, UTIL], "run": None}[args.command]
    if categories is not None and not any(OPS[t["op"]][0] in categories for t in config.tasks):
        print(f"config error: no {args.command} tasks in the config", file=sys.stderr)
        return EXIT_CONFIG
    report = run_experiment(config, args.workers, args.horizon_scale, categories)
    _write(emit_report(report, args.format, args.out), args.out)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
