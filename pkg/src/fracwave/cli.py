"""Command-line front end.

    fracwave <kind> --config <path> [--out <path>] [--format json|csv] [--jobs n]

Exit codes: 0 when every check passed, 1 when any check failed, 2 on
usage or I/O errors.  FRACWAVE_JOBS is the fallback for --jobs.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import KINDS, parse_config
from .errors import ConfigError, FracwaveError
from .harness import emit_report, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracwave",
        description="Verification harness for the interval time-fractional wave solver.")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=None, help="output path ('-' for stdout)")
        p.add_argument("--format", default=None, choices=("json", "csv"))
        p.add_argument("--jobs", type=int, default=None, help="parallel workers")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, kind=args.kind)
        if args.jobs is not None:
            cfg.jobs = args.jobs
        elif os.environ.get("FRACWAVE_JOBS"):
            try:
                cfg.jobs = max(1, int(os.environ["FRACWAVE_JOBS"]))
            except ValueError:
                raise ConfigError(
                    f"FRACWAVE_JOBS: not an integer: {os.environ['FRACWAVE_JOBS']!r}")
        if args.out is not None:
            cfg.out = args.out
        if args.format is not None:
            cfg.format = args.format
        payload, passed = run_experiment(cfg)
        emit_report(payload, cfg.format, cfg.out)
    except ConfigError as exc:
        print(f"fracwave: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fracwave: i/o error: {exc}", file=sys.stderr)
        return 2
    except FracwaveError as exc:
        print(f"fracwave: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out != "-":
        print(f"{'PASS' if passed else 'FAIL'}: report written to {cfg.out}")
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
