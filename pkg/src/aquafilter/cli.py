"""Command-line entry points: simulate, sweep, verify.

Exit codes: 0 success, 2 configuration error, 3 numerical blowup,
4 verification failure.  Set AQUAFILTER_LOG=debug|info|warning to adjust
log verbosity (output content is unaffected).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time as _time

from . import io as afio
from .discretize import GridSpec
from .experiments import classify_clogging, run_simulation, sweep_transition
from .stepping import NumericalBlowupError
from .verification import SUITES, run_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_VERIFY = 4

log = logging.getLogger("aquafilter")


def _setup_logging():
    level = os.environ.get("AQUAFILTER_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _load(config_path):
    try:
        cfg = afio.load_config(config_path)
    except afio.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    for item in cfg.applied_defaults:
        log.info("default applied: %s", item)
    return cfg


def cmd_simulate(args) -> int:
    cfg = _load(args.config)
    try:
        initial = cfg.initial_state()
    except (afio.ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    config_hash = afio.write_config_echo(cfg, f"{args.out}/config_echo.toml") \
        if _ensure_out(args.out) else ""
    t0 = _time.perf_counter()
    try:
        record = run_simulation(cfg.model, cfg.grid, cfg.time, initial)
    except NumericalBlowupError as exc:
        print(f"numerical blowup: {exc}", file=sys.stderr)
        if exc.record is not None:
            afio.emit_run(exc.record, args.out, classification=None,
                          seed=cfg.seed, config_hash=config_hash)
        return EXIT_BLOWUP
    wall = _time.perf_counter() - t0
    cls = classify_clogging(record, cfg.threshold)
    afio.emit_run(record, args.out, classification=cls, seed=cfg.seed,
                  config_hash=config_hash, wall_time=wall)
    print(f"simulate: t_end={cfg.time.t_end} classification={cls} "
          f"growth_rate={record.final_growth_rate:.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args.config)
    if cfg.dimensional is None or not cfg.sweep_c_rho or not cfg.sweep_f:
        print("config error: sweep needs [dimensional] plus sweep.c_rho "
              "and sweep.f", file=sys.stderr)
        return EXIT_CONFIG
    _ensure_out(args.out)
    afio.write_config_echo(cfg, f"{args.out}/config_echo.toml")
    initial = None if cfg.initial.default_seed else cfg.initial_state()
    result = sweep_transition(
        cfg.dimensional, cfg.sweep_c_rho, cfg.sweep_f, cfg.grid, cfg.time,
        threshold=cfg.threshold, initial=initial,
        progress=lambda i, j, g, c: log.info(
            "cell (%d,%d): growth=%g %s", i, j, g, c))
    afio.emit_sweep(result, args.out)
    n_err = len(result.errors)
    print(f"sweep: {result.growth_rate.size} cells, {n_err} failed")
    if n_err:
        for (i, j), msg in sorted(result.errors.items()):
            print(f"  cell ({i},{j}): {msg}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_verify(args) -> int:
    names = args.suite
    unknown = set(names) - set(SUITES) - {"all"}
    if unknown:
        print(f"config error: unknown suite(s): {', '.join(sorted(unknown))}",
              file=sys.stderr)
        return EXIT_CONFIG
    if "all" in names:
        names = "all"
    reports = run_suite(names, seed=args.seed)
    lines = [str(r) for r in reports]
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        _ensure_out(args.out)
        with open(f"{args.out}/verify.txt", "w") as fh:
            fh.write(text)
    if all(r.passed for r in reports):
        print(f"verify: all {len(reports)} checks passed")
        return EXIT_OK
    failed = sum(not r.passed for r in reports)
    print(f"verify: {failed} of {len(reports)} checks FAILED", file=sys.stderr)
    return EXIT_VERIFY


def _ensure_out(out) -> bool:
    if out is None:
        return False
    os.makedirs(out, exist_ok=True)
    return True


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aquafilter",
        description="Aquarium-filtration clogging model: simulation, "
                    "transition sweeps, and numerical verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one simulation from a config")
    p_sim.add_argument("--config", required=True, help="TOML config file")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a clogging-transition sweep")
    p_sweep.add_argument("--config", required=True, help="TOML config file")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ver = sub.add_parser("verify", help="run numerical verification suites")
    p_ver.add_argument("--suite", action="append", required=True,
                       choices=sorted(SUITES) + ["all"],
                       help="suite name (repeatable) or 'all'")
    p_ver.add_argument("--seed", type=int, default=0,
                       help="seed for randomized checks")
    p_ver.add_argument("--out", default=None, help="optional output directory")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
