"""Command line entry point: ``qpsim run | sweep | validate``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .harness import ConfigError, EnsembleError, _convert, _FIELD_TYPES, load_config, write_outputs


def _cmd_run(args) -> None:
    config = load_config(args.config)
    for path in write_outputs(config, args.out, args.workers):
        print(path)


def _cmd_sweep(args) -> None:
    config = load_config(args.config)
    if args.param not in _FIELD_TYPES:
        raise ConfigError(f"unknown sweep parameter {args.param!r}")
    for raw in (v.strip() for v in args.values.split(",")):
        if not raw:
            continue
        try:
            value = _convert(args.param, raw)
        except ValueError:
            raise ConfigError(f"{args.param}: cannot parse {raw!r}") from None
        cfg = replace(config, **{args.param: value})
        for path in write_outputs(cfg, Path(args.out) / f"{args.param}={raw}", args.workers):
            print(path)


def _cmd_validate(args) -> None:
    sys.stdout.write(load_config(args.config).to_text())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpsim", description="Projective-simulation learning experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=_cmd_run)

    sweep = sub.add_parser("sweep", help="run one experiment per parameter value")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--param", required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--out", default="sweep")
    sweep.add_argument("--workers", type=int, default=1)
    sweep.set_defaults(func=_cmd_sweep)

    validate = sub.add_parser("validate", help="check a config and print it with defaults filled in")
    validate.add_argument("--config", required=True)
    validate.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, EnsembleError, OSError) as e:
        print(f"qpsim: error: {e}", file=sys.stderr)
        return 1
    return 0
