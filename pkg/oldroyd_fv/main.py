"""
oldroyd-fv - command line driver

    python -m oldroyd_fv list
    python -m oldroyd_fv verify vortex_domination
    python -m oldroyd_fv run configs/vortex.ini --out out/vortex --snapshot-every 100

Exit codes: 0 verdict passed, 1 verdict failed (or the run broke down),
2 usage or configuration error.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from .errors import ConfigError, OldroydError, ScenarioError
from .io import (
    SnapshotWriter,
    load_config,
    validate,
    write_bounds,
    write_diagnostics,
    write_snapshot,
    write_verdict,
)
from .scenarios import PRESETS, RunResult, build, run

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _banner(title: str):
    print("=" * 60)
    print(title)
    print("=" * 60)


def _report(result: RunResult):
    verdict = result.verdict
    print(f"\nClaim: {verdict.claim}")
    print("\nMeasurements:")
    for key, value in verdict.measurements.items():
        print(f"  • {key}: {value:.6g}")
    print("\nChecks:")
    for check in verdict.checks:
        mark = "✓" if check["passed"] else "✗"
        print(f"  {mark} {check['check']}  (measured {check['value']})")
    print()
    if verdict.passed:
        print(f"✓ {verdict.scenario}: PASS")
    else:
        print(f"✗ {verdict.scenario}: FAIL")


def _write_outputs(result: RunResult, out_dir: str, diagnostics_every: int = 1):
    write_diagnostics(result.history, os.path.join(out_dir, "diagnostics.csv"), diagnostics_every)
    write_snapshot(result.final_state, os.path.join(out_dir, "snapshot_final.txt"))
    write_verdict(result.verdict, os.path.join(out_dir, "verdict.json"))
    if result.bounds is not None:
        write_bounds(result.bounds, os.path.join(out_dir, "bounds.csv"))
    print(f"→ outputs written to {out_dir}")


def list_mode() -> int:
    _banner("Scenario presets")
    for name in PRESETS:
        sc = build(name)
        print(f"  • {name}")
        print(f"      {sc.claim}")
        print(f"      {sc.grid.describe()}, {sc.kind} run")
    print()
    return EXIT_PASS


def verify_mode(name: str, out_dir: Optional[str] = None) -> int:
    sc = build(name)
    _banner(f"Verifying {name}")
    print(f"→ {sc.grid.describe()}, {sc.kind} run")
    result = run(sc)
    _report(result)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        _write_outputs(result, out_dir)
    return EXIT_PASS if result.verdict.passed else EXIT_FAIL


def run_mode(path: str, out_dir: Optional[str], until: Optional[float],
             snapshot_every: Optional[int]) -> int:
    config = load_config(path)
    if until is not None:
        config.overrides.pop("scenario.n_steps", None)
        config.overrides["scenario.end_time"] = until
    if snapshot_every is not None:
        config.snapshot_every = snapshot_every
    if out_dir:
        config.output_dir = out_dir
    validate(config)

    sc = build(config.scenario, config.overrides)
    target = config.resolved_output_dir()
    os.makedirs(target, exist_ok=True)

    _banner(f"Running {sc.name}")
    print(f"→ {sc.grid.describe()}, {sc.kind} run")
    print(f"→ output directory: {target}")
    snapshots = SnapshotWriter(target, config.snapshot_every)
    result = run(sc, observer=snapshots)
    if snapshots.written:
        print(f"→ {len(snapshots.written)} snapshots written")
    _report(result)
    _write_outputs(result, target, config.diagnostics_every)
    return EXIT_PASS if result.verdict.passed else EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oldroyd-fv",
        description="Finite-volume simulator and verification harness for compressible Oldroyd-B flow",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log INFO (-v) or DEBUG (-vv) messages")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the scenario described by a config file")
    p_run.add_argument("config", help="path to an INI run configuration")
    p_run.add_argument("--out", help="output directory (default: $OLDROYD_OUT_DIR or ./out)")
    p_run.add_argument("--until", type=float, help="end time, replaces the configured one")
    p_run.add_argument("--snapshot-every", type=int, help="write a snapshot every N steps")

    p_verify = sub.add_parser("verify", help="run a preset and check its verdict")
    p_verify.add_argument("scenario", help="preset name (see 'list')")
    p_verify.add_argument("--out", help="also write the run's outputs to this directory")

    sub.add_parser("list", help="list the presets and the claims they check")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_USAGE if e.code else EXIT_PASS

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "list":
            return list_mode()
        if args.command == "verify":
            return verify_mode(args.scenario, args.out)
        return run_mode(args.config, args.out, args.until, args.snapshot_every)
    except (ConfigError, ScenarioError) as e:
        print(f"✗ {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except OldroydError as e:
        print(f"\n✗ Run failed: {e}\n", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
