"""Command line entry point: ``verify --config cfg.json --suite all ...``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, ConventionUnpinned
from .harness import SUITES, emit, load_config, run
from .harness.runner import with_seed, with_suites


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Run randomized verification suites.")
    p.add_argument("--config", required=True, help="JSON scenario file")
    p.add_argument("--suite", default="all", help="suite name, comma list or 'all'")
    p.add_argument("--seed", type=_u64, default=None, help="overrides the config seed")
    p.add_argument("--out", default="-", help="report path ('-' for stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--ledger", default=None, help="convention ledger path")
    p.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    p.add_argument("--residuals", action="store_true", help="embed per-trial residuals in JSON output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.suite != "all":
            names = [s.strip() for s in args.suite.split(",") if s.strip()]
            bad = [s for s in names if s not in SUITES]
            if bad:
                raise ConfigError(f"unknown suite(s) {bad}; choose from {list(SUITES)} or 'all'")
            cfg = with_suites(cfg, names)
        if args.seed is not None:
            cfg = with_seed(cfg, args.seed)
        ledger = args.ledger or cfg.ledger or "conventions.json"
        report = run(cfg, ledger)
    except (ConfigError, ConventionUnpinned) as exc:
        print(f"verify: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = emit(report, args.format, include_timing=args.timing, residuals=args.residuals)
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            Path(args.out).write_text(text)
    except OSError as exc:
        print(f"verify: cannot write report: {exc}", file=sys.stderr)
        return 3
    status = "PASS" if report.passed else "FAIL"
    print(f"verify: {status} ({len(report.checks)} checks, {report.wall_time_s:.1f}s)", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
