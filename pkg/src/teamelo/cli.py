"""Command-line front end.

Subcommands:

* ``run``     execute a preset or a custom engine run and write artifacts
* ``check``   test monotonicity of the variance-adjusted response b + sigma^2 b''
* ``analyze`` post-process previously written CSVs into a report/verdict

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(CFL/NaN), 4 a check failed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, io
from .analysis import (
    EnergySeries,
    compression_metric,
    fit_decay_rate,
    micro_macro_distance,
    regression_slope,
)
from .errors import CflError, ConfigError
from .presets import META_KEYS, PRESETS, SCHEMA, coerce, resolve_config, run_custom, run_preset
from .response import TanhResponse, check_effective_response_monotone

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CHECK_FAILED = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teamelo",
        description="Elo dynamics for teams with fluctuating strength: "
        "agent-based and transport-equation engines.",
    )
    parser.add_argument("--version", action="version", version=f"teamelo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or custom experiment")
    run.add_argument("--mode", choices=("micro", "macro", "macro2d"), help="engine for custom runs")
    run.add_argument("--preset", choices=sorted(PRESETS), help="named desk-scale experiment")
    run.add_argument("--config", help="flat key = value config file (e.g. a manifest)")
    run.add_argument("--out", default="out", help="output directory (default: ./out)")
    run.add_argument("--seed", type=int)
    run.add_argument("--nu", type=float, dest="nu_scale")
    run.add_argument("--sigma", type=float, dest="sigma_rating")
    run.add_argument("--gamma", type=float, dest="gamma_gain")
    run.add_argument("--dt", type=float, dest="dt_time")
    run.add_argument("--n-teams", type=int, dest="n_teams")
    run.add_argument("--steps", type=float, dest="n_steps", help="accepts 1e4 style values")
    run.add_argument("--realizations", type=int)
    run.add_argument("--kernel", help="all | indicator:<c> | bump")
    run.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")
    run.add_argument("--paper-scale", action="store_true", help="original experiment sizes")

    check = sub.add_parser("check", help="variance-adjusted monotonicity check")
    check.add_argument("--nu", type=float, required=True)
    check.add_argument("--sigma", type=float, required=True)
    check.add_argument("--z-lo", type=float, default=-10.0)
    check.add_argument("--z-hi", type=float, default=10.0)
    check.add_argument("--samples", type=int, default=10_001)

    analyze = sub.add_parser("analyze", help="post-process emitted CSVs")
    analyze.add_argument("--scatter", help="terminal scatter CSV from a micro run")
    analyze.add_argument("--moments", help="moment series CSV from a macro run")
    analyze.add_argument("--macro-snapshot", help="grid snapshot CSV for micro/macro distance")
    analyze.add_argument("--out", default="out", help="output directory")
    return parser


def _cmd_run(args) -> int:
    overrides: dict = {}
    if args.config:
        overrides.update(coerce(io.read_flat_config(args.config, set(SCHEMA) | META_KEYS)))
    for key in (
        "seed",
        "nu_scale",
        "sigma_rating",
        "gamma_gain",
        "dt_time",
        "n_teams",
        "realizations",
    ):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.n_steps is not None:
        overrides["n_steps"] = int(args.n_steps)
    if args.kernel is not None:
        overrides["kernel"] = args.kernel
    if args.mode is not None:
        overrides["mode"] = args.mode

    preset = args.preset or overrides.pop("preset", None) or None
    if preset == "":
        preset = None
    if preset is not None:
        outcome = run_preset(
            preset, overrides, args.out, paper_scale=args.paper_scale, threads=args.threads
        )
    else:
        config = resolve_config(None, overrides, paper_scale=args.paper_scale)
        outcome = run_custom(config, args.out, threads=args.threads)

    for name, ok, detail in outcome.checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    print(f"wrote {len(outcome.files)} files to {args.out} ({outcome.wall_time:.1f}s)")
    return EXIT_OK if outcome.all_passed else EXIT_CHECK_FAILED


def _cmd_check(args) -> int:
    b = TanhResponse(args.nu)
    report = check_effective_response_monotone(
        b, args.sigma, args.z_lo, args.z_hi, n_samples=args.samples
    )
    if report.holds:
        print(
            f"(B') holds: b + sigma^2 b'' increasing on [{args.z_lo:g}, {args.z_hi:g}] "
            f"(min slope {report.min_slope:.6g} at z = {report.argmin:.4g})"
        )
        return EXIT_OK
    print(
        f"(B') fails at z = {report.fails_at:.4g}: "
        f"min slope {report.min_slope:.6g} at z = {report.argmin:.4g}"
    )
    return EXIT_CHECK_FAILED


def _cmd_analyze(args) -> int:
    if not (args.scatter or args.moments):
        raise ConfigError("analyze needs --scatter and/or --moments")
    io.ensure_outdir(args.out)
    rows: list[tuple] = []
    checks: list[tuple[str, bool, str]] = []
    if args.scatter:
        scatter = io.read_scatter(args.scatter)
        slope = regression_slope(scatter["theta"], scatter["rating_mean"])
        comp = compression_metric(scatter["theta"], scatter["rating_mean"])
        rows += [("regression_slope", slope), ("compression_metric", comp)]
        if args.macro_snapshot:
            grid = io.read_grid_snapshot(args.macro_snapshot)
            dist = micro_macro_distance(scatter["theta"], scatter["rating_mean"], grid)
            rows.append(("micro_macro_distance", dist))
    if args.moments:
        table = io.read_moments(args.moments)
        worst = float(np.diff(table["var_r"]).max()) if table["var_r"].size > 1 else 0.0
        checks.append(
            (
                "recentered m2_r nonincreasing",
                worst <= 1e-12,
                f"largest increase = {worst:.3e}",
            )
        )
        rows.append(("m2_r_largest_increase", worst))
        if "energy" in table:
            series = EnergySeries(table["t"], table["energy"])
            rate = fit_decay_rate(series)
            rows.append(("energy_fitted_rate", rate))
            diffs = np.diff(table["energy"])
            mono = bool(np.all(diffs <= 1e-12 * max(table["energy"][0], 1.0)))
            checks.append(
                ("relative energy nonincreasing", mono, f"largest increase = {diffs.max():.3e}")
            )
    io.write_csv(f"{args.out}/report.csv", ("metric", "value"), rows)
    io.write_verdict(f"{args.out}/verdict.txt", checks)
    for name, ok, detail in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    for metric, value in rows:
        print(f"{metric} = {value:.6g}")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_analyze(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CflError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
