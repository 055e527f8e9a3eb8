"""Command-line entry point.

    simulate --config <path> [--scenario <name>] [--sweep <key>=<v1,v2,...>]
             [--seed <int>] [--reps <int>] [--out <path>] [--trace <path>]

Exit code 0 on success; 2 with a diagnostic on configuration errors.
"""

import argparse
import sys

from .core import ConfigError
from .config import SWEEPABLE, parse_config, paper_default
from .experiments import (
    CSV_HEADER,
    SCENARIOS,
    run_plain,
    run_scenario,
    run_sweep,
    trace_csv,
)


def _parse_sweep(spec):
    key, sep, raw_values = spec.partition("=")
    key = key.strip()
    if not sep or not raw_values:
        raise ConfigError(f"--sweep expects <key>=<v1,v2,...>, got {spec!r}")
    if key not in SWEEPABLE:
        raise ConfigError(f"unknown sweep parameter '{key}'")
    values = [SWEEPABLE[key](v.strip()) for v in raw_values.split(",")]
    return key, values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Blockchain-enabled network AoI simulator",
    )
    parser.add_argument("--config", help="config file (key = value lines)")
    parser.add_argument("--scenario", choices=SCENARIOS, help="preset sweep to run")
    parser.add_argument("--sweep", metavar="KEY=V1,V2,...", help="sweep one config key")
    parser.add_argument("--seed", type=int, help="override master_seed")
    parser.add_argument("--reps", type=int, help="override replications")
    parser.add_argument("--out", help="write the result CSV here (default stdout)")
    parser.add_argument("--trace", help="write a per-transaction debug CSV here")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        else:
            cfg = paper_default()
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.reps is not None:
            overrides["replications"] = args.reps
        if overrides:
            cfg = cfg.replace(**overrides)

        if args.scenario and args.sweep:
            raise ConfigError("--scenario and --sweep are mutually exclusive")
        if args.scenario:
            csv_text = run_scenario(args.scenario, base=cfg)
        elif args.sweep:
            key, values = _parse_sweep(args.sweep)
            rows, _ = run_sweep(cfg, key, values)
            csv_text = CSV_HEADER + "\n" + "\n".join(rows) + "\n"
        else:
            csv_text = run_plain(cfg)

        if args.trace is not None:
            if args.scenario or args.sweep:
                raise ConfigError("--trace applies to plain runs only")
            with open(args.trace, "w") as fh:
                fh.write(trace_csv(cfg))
    except (ConfigError, OSError) as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return 2

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
