"""Command line entry point.

    difflink simulate [--config FILE] [--set key=value ...] [--out DIR]
    difflink compare --a CSV --b CSV [--algo-a NAME] [--algo-b NAME] [--tail 0.2]

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, load_config
from .harness import read_curves_csv, run_experiment
from .metrics import compare_curves

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _parser():
    p = argparse.ArgumentParser(prog="difflink")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    sim.add_argument("--config", help="JSON config file")
    sim.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config entry (repeatable, dotted keys)")
    sim.add_argument("--out", help="output directory (overrides output_dir)")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--scenario", choices=["static", "time_varying"])
    sim.add_argument("--algorithms", help="comma-separated subset of atc,esls,sils")
    sim.add_argument("--workers", type=int)
    sim.add_argument("-v", "--verbose", action="store_true")

    cmp_ = sub.add_parser("compare", help="steady-state gain of curve b over curve a")
    cmp_.add_argument("--a", required=True, help="learning-curve CSV")
    cmp_.add_argument("--b", required=True, help="learning-curve CSV")
    cmp_.add_argument("--algo-a", help="algorithm to read from --a")
    cmp_.add_argument("--algo-b", help="algorithm to read from --b")
    cmp_.add_argument("--tail", type=float, default=0.2)
    return p


def _pick(curves, name, path):
    if name is None:
        if len(curves) != 1:
            raise ConfigError(path, f"holds {sorted(curves)}; choose one with --algo-a/--algo-b")
        return next(iter(curves.values()))
    if name not in curves:
        raise ConfigError(path, f"no algorithm {name!r} (has {sorted(curves)})")
    return curves[name]


def _simulate(args):
    overrides = list(args.set)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.scenario:
        overrides.append(f'scenario="{args.scenario}"')
    if args.algorithms:
        names = [a.strip() for a in args.algorithms.split(",") if a.strip()]
        overrides.append("algorithms=" + ",".join(f'"{a}"' for a in names).join("[]"))
    if args.workers is not None:
        overrides.append(f"workers={args.workers}")
    cfg = load_config(args.config, overrides)
    result = run_experiment(cfg, args.out)
    for name, db in result.steady_state().items():
        print(f"{name:5s} steady-state EMSE {db:8.2f} dB")


def _compare(args):
    a = _pick(read_curves_csv(args.a), args.algo_a, args.a)
    b = _pick(read_curves_csv(args.b), args.algo_b, args.b)
    print(f"{compare_curves(a.emse_db, b.emse_db, args.tail):.6f}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False)
                        else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "simulate":
            _simulate(args)
        else:
            _compare(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
