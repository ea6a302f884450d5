"""Command-line interface: ``nonherm <experiment> --config <path> [--out] [--seed]``.

Exit codes: 0 success, 1 training finished without reaching its target
cost, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__
from .config import EXPERIMENTS, parse_config
from .errors import ConfigError, NonhermError
from .experiments import run_experiment

EXIT_OK = 0
EXIT_TARGET_MISSED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonherm",
        description="Reproduce non-Hermitian qubit experiments as deterministic CSV files.",
    )
    parser.add_argument("--version", action="version", version=f"nonherm {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--config", required=True, help="path to the JSON config")
        cmd.add_argument("--out", default=None, help="output CSV path (overrides config output_path)")
        cmd.add_argument("--seed", type=int, default=None, help="seed override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {args.config} is not valid JSON: {exc}") from exc
        cfg = parse_config(doc)
        if cfg.experiment != args.experiment:
            raise ConfigError(
                f"config is for experiment {cfg.experiment!r} but {args.experiment!r} was requested"
            )
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
            doc = dict(doc, seed=args.seed)
        result = run_experiment(cfg, doc, out_path=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonhermError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    print(f"wrote {result.rows_written} rows to {result.output_path}")
    if cfg.experiment == "train":
        reached = result.extra.get("target_reached", False)
        print(f"target cost {'reached' if reached else 'NOT reached'}")
        if not reached:
            return EXIT_TARGET_MISSED
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
