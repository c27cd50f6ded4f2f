"""Named experiment presets reproducing the reference experiments at desk scale.

Each preset resolves to a flat key = value configuration (see io.py) that
fully determines the run; ``--paper-scale`` swaps in the full-size
parameters (N = 200..500 teams, 1e6..2e6 steps, grid spacing 5e-2,
dt = 1e-5), which take hours instead of seconds.  The full-size gamma is
chosen through the micro-to-macro time map (effective_macro_time) so both
engines cover comparable mean-field horizons.

Presets:

* r1 / r2            micro runs of the two roster setups
* fig4-uniform       3-D transport run from uniform data
* fig5-sweep         matched micro + reduced-macro runs, sigma in {0, 1}
* fig7-nu-sweep      micro Gaussian runs, nu in {1, 0.1, 0.01}, sigma = 2

run_preset executes engines, writes all artifact CSVs plus a manifest,
runs the matching analysis checks, and returns them for exit-code logic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import __version__, _kernels, io
from .analysis import compression_metric, micro_macro_distance, regression_slope
from .errors import ConfigError
from .grid import DensityGrid
from .kernels import kernel_from_spec
from .macro import MacroConfig, run_macro
from .micro import LineupMode, MicroConfig, effective_macro_time, run_micro, run_micro_gaussian
from .population import build_gaussian_population, build_setup_r1, build_setup_r2

__all__ = ["SCHEMA", "META_KEYS", "PRESETS", "resolve_config", "run_preset", "run_custom"]

# every legal config key with its value type; unknown keys are rejected
SCHEMA: dict[str, type] = {
    "mode": str,  # micro | macro | macro2d
    "preset": str,
    "seed": int,
    "population": str,  # r1 | r2 | gaussian (micro runs)
    "nu_scale": float,
    "sigma_rating": float,
    "gamma_gain": float,
    "dt_time": float,
    "t_end_time": float,
    "macro_dt_time": float,
    "n_teams": int,
    "n_steps": int,
    "matches_per_step": int,
    "realizations": int,
    "kernel": str,
    "lineup_mode": str,
    "snapshot_stride": int,
    "paper_scale": int,
    "n_theta_cells": int,
    "n_sigma_cells": int,
    "n_r_cells": int,
    "theta_lo_rating": float,
    "theta_hi_rating": float,
    "sigma_lo_spread": float,
    "sigma_hi_spread": float,
    "r_lo_rating": float,
    "r_hi_rating": float,
    "cfl_safety": float,
    "refresh_stride": int,
    "initial_rating": float,
    "special_sigma_rating": float,
}

#: manifest-only keys, accepted but ignored when re-running
META_KEYS = {"code_version", "wall_time_sec", "backend", "scale_note"}

_COMMON = {
    "seed": 1,
    "kernel": "all",
    "paper_scale": 0,
}

PRESETS: dict[str, dict] = {
    "r1": {
        **_COMMON,
        "mode": "micro",
        "population": "r1",
        "n_teams": 200,
        "n_steps": 20_000,
        "matches_per_step": 25,
        "realizations": 4,
        "gamma_gain": 0.02,
        "nu_scale": 1.0,
        "dt_time": 0.1,
        "lineup_mode": LineupMode.UNIFORM_SUBSET,
        "initial_rating": 5.0,
        "snapshot_stride": 1000,
    },
    "r2": {
        **_COMMON,
        "mode": "micro",
        "population": "r2",
        "n_teams": 200,
        "n_steps": 20_000,
        "matches_per_step": 25,
        "realizations": 4,
        "gamma_gain": 0.02,
        "nu_scale": 1.0,
        "dt_time": 0.1,
        "lineup_mode": LineupMode.UNIFORM_SUBSET,
        "initial_rating": 7.0,
        "special_sigma_rating": 2.0,
        "snapshot_stride": 1000,
    },
    "fig4-uniform": {
        **_COMMON,
        "mode": "macro",
        "nu_scale": 1.0,
        "macro_dt_time": 0.005,
        "t_end_time": 1.0,
        "n_theta_cells": 40,
        "n_sigma_cells": 10,
        "n_r_cells": 40,
        "theta_lo_rating": 0.0,
        "theta_hi_rating": 10.0,
        "sigma_lo_spread": 0.0,
        "sigma_hi_spread": 1.0,
        "r_lo_rating": 0.0,
        "r_hi_rating": 10.0,
        "cfl_safety": 0.9,
        "refresh_stride": 1,
        "snapshot_stride": 20,
    },
    "fig5-sweep": {
        **_COMMON,
        "mode": "micro",  # orchestrates both engines
        "population": "gaussian",
        "n_teams": 100,
        "n_steps": 6000,
        "matches_per_step": 25,
        "realizations": 4,
        "gamma_gain": 0.02,
        "nu_scale": 0.5,
        "dt_time": 0.1,
        "lineup_mode": LineupMode.GAUSSIAN_DRAW,
        "theta_lo_rating": 4.0,
        "theta_hi_rating": 10.0,
        "initial_rating": 7.0,
        "macro_dt_time": 0.02,
        "n_theta_cells": 30,
        "n_r_cells": 60,
        "r_lo_rating": 4.0,
        "r_hi_rating": 10.0,
        "cfl_safety": 0.9,
        "refresh_stride": 1,
        "snapshot_stride": 1000,
    },
    "fig7-nu-sweep": {
        **_COMMON,
        "mode": "micro",
        "population": "gaussian",
        "n_teams": 100,
        "n_steps": 100_000,
        "matches_per_step": 25,
        "realizations": 3,
        "gamma_gain": 0.02,
        "sigma_rating": 2.0,
        "nu_scale": 0.1,  # the sweep runs {1, 0.1, 0.01} regardless
        "dt_time": 0.1,
        "lineup_mode": LineupMode.GAUSSIAN_DRAW,
        "theta_lo_rating": 4.0,
        "theta_hi_rating": 10.0,
        "initial_rating": 7.0,
        "snapshot_stride": 500,
    },
}

_PAPER_OVERRIDES: dict[str, dict] = {
    "r1": {
        "n_steps": 2_000_000,
        "realizations": 50,
        "gamma_gain": 1e-5,
        "snapshot_stride": 100_000,
    },
    "r2": {
        "n_steps": 2_000_000,
        "realizations": 50,
        "gamma_gain": 1e-5,
        "snapshot_stride": 100_000,
    },
    "fig4-uniform": {
        "macro_dt_time": 1e-5,
        "t_end_time": 5.0,
        "n_theta_cells": 200,
        "n_sigma_cells": 20,
        "n_r_cells": 200,
        "snapshot_stride": 50_000,
    },
    "fig5-sweep": {
        "n_teams": 500,
        "n_steps": 1_000_000,
        "realizations": 50,
        "gamma_gain": 1e-4,
        "n_theta_cells": 120,
        "n_r_cells": 120,
        "macro_dt_time": 1e-5,
        "snapshot_stride": 100_000,
    },
    "fig7-nu-sweep": {
        "n_teams": 500,
        "n_steps": 1_000_000,
        "realizations": 50,
        "gamma_gain": 1e-4,
        "snapshot_stride": 20_000,
    },
}


def coerce(entries: dict[str, str]) -> dict:
    """Type raw string entries per SCHEMA; unknown keys are errors."""
    out = {}
    for key, value in entries.items():
        if key in META_KEYS:
            continue
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[key] = SCHEMA[key](value)
        except ValueError:
            raise ConfigError(f"config key {key!r}: cannot parse {value!r} as {SCHEMA[key].__name__}") from None
    return out


def resolve_config(preset: str | None, overrides: dict, paper_scale: bool = False) -> dict:
    """Merge preset defaults, paper-scale overrides and explicit flags."""
    config: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        config.update(PRESETS[preset])
        config["preset"] = preset
        if paper_scale:
            config.update(_PAPER_OVERRIDES[preset])
            config["paper_scale"] = 1
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        config[key] = SCHEMA[key](value)
    if "mode" not in config:
        raise ConfigError("no preset and no mode given; nothing to run")
    return config


@dataclass
class PresetOutcome:
    """Artifacts and check verdicts of one executed run."""

    config: dict
    files: list[str]
    checks: list[tuple[str, bool, str]]
    wall_time: float

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def _require(config: dict, *keys: str):
    missing = [key for key in keys if key not in config]
    if missing:
        raise ConfigError(f"missing config keys for mode {config.get('mode')!r}: {missing}")


def _micro_config(config: dict, snapshot_default: int = 0) -> MicroConfig:
    _require(config, "n_steps", "gamma_gain", "nu_scale")
    return MicroConfig(
        n_steps=config["n_steps"],
        gamma=config["gamma_gain"],
        nu=config["nu_scale"],
        n_teams=config.get("n_teams"),
        dt=config.get("dt_time", 0.1),
        matches_per_step=config.get("matches_per_step", 25),
        realizations=config.get("realizations", 50),
        kernel=kernel_from_spec(config.get("kernel", "all")),
        lineup_mode=config.get("lineup_mode", LineupMode.UNIFORM_SUBSET),
        seed=config.get("seed", 0),
        snapshot_stride=config.get("snapshot_stride", snapshot_default),
    )


def _build_population(config: dict):
    population = config.get("population", "gaussian")
    n = config.get("n_teams", 100)
    seed = config.get("seed", 0)
    if population == "r1":
        return build_setup_r1(n, seed=seed, initial_rating=config.get("initial_rating", 5.0))
    if population == "r2":
        return build_setup_r2(
            n,
            seed=seed,
            special_sigma=config.get("special_sigma_rating", 2.0),
            initial_rating=config.get("initial_rating", 5.0),
        )
    if population == "gaussian":
        thetas = np.linspace(
            config.get("theta_lo_rating", 4.0),
            config.get("theta_hi_rating", 10.0),
            n,
        )
        return build_gaussian_population(
            thetas,
            config.get("sigma_rating", 0.0),
            initial_rating=config.get("initial_rating"),
        )
    raise ConfigError(f"unknown population {population!r}")


def _macro_grid(config: dict, two_d: bool) -> DensityGrid:
    _require(config, "theta_lo_rating", "theta_hi_rating", "r_lo_rating", "r_hi_rating",
             "n_theta_cells", "n_r_cells")
    if not two_d:
        _require(config, "sigma_lo_spread", "sigma_hi_spread", "n_sigma_cells")
    tb = (config["theta_lo_rating"], config["theta_hi_rating"])
    rb = (config["r_lo_rating"], config["r_hi_rating"])
    if two_d:
        return DensityGrid.uniform(
            (tb, rb),
            (config["n_theta_cells"], config["n_r_cells"]),
            sigma_const=config.get("sigma_rating", 0.0),
        )
    sb = (config["sigma_lo_spread"], config["sigma_hi_spread"])
    return DensityGrid.uniform(
        (tb, sb, rb),
        (config["n_theta_cells"], config["n_sigma_cells"], config["n_r_cells"]),
    )


def _macro_config(config: dict) -> MacroConfig:
    _require(config, "t_end_time", "nu_scale")
    return MacroConfig(
        t_end=config["t_end_time"],
        nu=config["nu_scale"],
        dt=config.get("macro_dt_time", config.get("dt_time", 1e-5)),
        sigma_const=config.get("sigma_rating", 0.0),
        kernel=kernel_from_spec(config.get("kernel", "all")),
        cfl_safety=config.get("cfl_safety", 0.9),
        snapshot_stride=config.get("snapshot_stride", 0),
        refresh_stride=config.get("refresh_stride", 1),
    )


def _write_manifest(out, config, wall_time):
    entries = dict(config)
    preset = config.get("preset")
    if preset in _PAPER_OVERRIDES:
        if config.get("paper_scale"):
            entries["scale_note"] = "paper-scale sizes"
        else:
            ref = "; ".join(f"{k}={v}" for k, v in _PAPER_OVERRIDES[preset].items())
            entries["scale_note"] = f"desk scale; --paper-scale restores {ref}"
    entries["code_version"] = __version__
    entries["backend"] = _kernels.BACKEND
    entries["wall_time_sec"] = round(wall_time, 3)
    io.write_flat_config(f"{out}/manifest.txt", entries, header="teamelo run manifest")


def _run_micro_artifacts(config, out, threads):
    pop = _build_population(config)
    cfg = _micro_config(config)
    result = run_micro(pop, cfg, threads=threads)
    files = [f"{out}/trajectory.csv", f"{out}/scatter.csv"]
    io.write_trajectories(files[0], result)
    io.write_scatter(files[1], result)
    return result, files


def _run_macro_artifacts(config, out, two_d):
    grid = _macro_grid(config, two_d)
    cfg = _macro_config(config)
    result = run_macro(grid, cfg)
    files = [
        f"{out}/moments.csv",
        f"{out}/snapshot_final.csv",
        f"{out}/marginal_theta.csv",
        f"{out}/marginal_r.csv",
    ]
    io.write_moments(files[0], result)
    io.write_grid_snapshot(files[1], result.final)
    io.write_marginals(files[2], files[3], result.final)
    return result, files


def run_custom(config: dict, out: str, threads: int = 1) -> PresetOutcome:
    """Run a preset-less engine configuration and write its artifacts."""
    io.ensure_outdir(out)
    start = time.time()
    mode = config["mode"]
    if mode == "micro":
        _, files = _run_micro_artifacts(config, out, threads)
    elif mode in ("macro", "macro2d"):
        _, files = _run_macro_artifacts(config, out, two_d=(mode == "macro2d"))
    else:
        raise ConfigError(f"unknown mode {mode!r}")
    wall = time.time() - start
    _write_manifest(out, config, wall)
    return PresetOutcome(config, files + [f"{out}/manifest.txt"], [], wall)


def run_preset(name: str, overrides: dict, out: str, paper_scale=False, threads=1) -> PresetOutcome:
    """Execute a named preset with overrides; returns artifacts and checks."""
    config = resolve_config(name, overrides, paper_scale=paper_scale)
    io.ensure_outdir(out)
    start = time.time()
    files: list[str] = []
    checks: list[tuple[str, bool, str]] = []

    if name in ("r1", "r2"):
        result, files = _run_micro_artifacts(config, out, threads)
        comp = compression_metric(result.thetas, result.rating_mean)
        checks.append(
            ("compression_metric < 0", comp < 0.0, f"compression_metric = {comp:.4f}")
        )
        if name == "r2":
            for label, idx in (("Germany", -2), ("Brazil", -1)):
                under = result.rating_mean[idx] < result.thetas[idx]
                checks.append(
                    (
                        f"{label} under-performs",
                        bool(under),
                        f"rating {result.rating_mean[idx]:.3f} vs theta {result.thetas[idx]:.1f}",
                    )
                )
    elif name == "fig4-uniform":
        result, files = _run_macro_artifacts(config, out, two_d=False)
        var_r = np.array([m.var_r for m in result.moments])
        worst = float(np.diff(var_r).max()) if var_r.size > 1 else 0.0
        checks.append(
            (
                "recentered m2_r nonincreasing",
                worst <= 1e-12,
                f"largest per-step increase = {worst:.3e}",
            )
        )
        drift = abs(result.moments[-1].mass - result.moments[0].mass) / result.moments[0].mass
        checks.append(("mass conserved", drift <= 1e-9, f"relative drift = {drift:.3e}"))
    elif name == "fig5-sweep":
        checks, files = _run_fig5(config, out, threads)
    elif name == "fig7-nu-sweep":
        checks, files = _run_fig7(config, out, threads)
    else:
        raise ConfigError(f"unknown preset {name!r}")

    report_rows = [(label, int(ok), detail) for label, ok, detail in checks]
    if report_rows:
        io.write_csv(f"{out}/report.csv", ("check", "passed", "detail"), report_rows)
        io.write_verdict(f"{out}/verdict.txt", checks)
        files += [f"{out}/report.csv", f"{out}/verdict.txt"]
    wall = time.time() - start
    _write_manifest(out, config, wall)
    files.append(f"{out}/manifest.txt")
    return PresetOutcome(config, files, checks, wall)


def _run_fig5(config, out, threads):
    """Matched micro/macro pair per sigma; checks sup-distance <= 0.5."""
    checks, files = [], []
    thetas = np.linspace(config["theta_lo_rating"], config["theta_hi_rating"], config["n_teams"])
    cfg = _micro_config(config)
    for sigma in (0.0, 1.0):
        tag = f"sigma{sigma:g}"
        micro = run_micro_gaussian(
            cfg, thetas, sigma, initial_rating=config["initial_rating"], threads=threads
        )
        t_eff = effective_macro_time(cfg, config["n_teams"])
        grid = DensityGrid(
            (
                (config["theta_lo_rating"], config["theta_hi_rating"]),
                (config["r_lo_rating"], config["r_hi_rating"]),
            ),
            (config["n_theta_cells"], config["n_r_cells"]),
            sigma_const=sigma,
        )
        j0 = int(np.argmin(np.abs(grid.r_centers - config["initial_rating"])))
        grid.values[:, j0] = 1.0
        grid.normalize()
        mcfg = MacroConfig(
            t_end=t_eff,
            nu=config["nu_scale"],
            dt=config["macro_dt_time"],
            sigma_const=sigma,
            kernel=kernel_from_spec(config["kernel"]),
            cfl_safety=config["cfl_safety"],
        )
        macro = run_macro(grid, mcfg)
        scatter_path = f"{out}/micro_scatter_{tag}.csv"
        snap_path = f"{out}/macro_snapshot_{tag}.csv"
        io.write_scatter(scatter_path, micro)
        io.write_grid_snapshot(snap_path, macro.final)
        files += [scatter_path, snap_path]
        dist = micro_macro_distance(thetas, micro.rating_mean, macro.final)
        checks.append(
            (
                f"micro/macro distance ({tag}) <= 0.5",
                dist <= 0.5,
                f"sup bin distance = {dist:.3f} at t = {t_eff:g}",
            )
        )
    return checks, files


def _run_fig7(config, out, threads):
    """nu sweep at sigma = 2: slope ordering and convergence-time ordering."""
    checks, files = [], []
    thetas = np.linspace(config["theta_lo_rating"], config["theta_hi_rating"], config["n_teams"])
    sigma = config.get("sigma_rating", 2.0)
    slopes, conv_times = {}, {}
    for nu in (1.0, 0.1, 0.01):
        cfg = _micro_config({**config, "nu_scale": nu})
        result = run_micro_gaussian(
            cfg, thetas, sigma, initial_rating=config["initial_rating"], threads=threads
        )
        tag = f"nu{nu:g}"
        path = f"{out}/scatter_{tag}.csv"
        io.write_scatter(path, result)
        files.append(path)
        mean_traj = result.mean_ratings_over_time()
        slope_series = np.array(
            [regression_slope(thetas, mean_traj[k]) for k in range(1, len(result.times))]
        )
        slopes[nu] = float(slope_series[-1])
        terminal = slope_series[-1]
        reached = np.flatnonzero(slope_series >= 0.9 * terminal)
        conv_times[nu] = float(result.times[1 + reached[0]]) if reached.size else float("inf")
    io.write_csv(
        f"{out}/slopes.csv",
        ("nu", "slope", "convergence_time"),
        [(nu, slopes[nu], conv_times[nu]) for nu in (1.0, 0.1, 0.01)],
    )
    files.append(f"{out}/slopes.csv")
    checks.append(
        (
            "slope ordering slope(1) < slope(0.1) <= slope(0.01)",
            slopes[1.0] < slopes[0.1] <= slopes[0.01],
            f"slopes = {slopes[1.0]:.3f}, {slopes[0.1]:.3f}, {slopes[0.01]:.3f}",
        )
    )
    checks.append(
        (
            "slope(0.01) ~ 1",
            abs(slopes[0.01] - 1.0) <= 0.15,
            f"slope(nu=0.01) = {slopes[0.01]:.3f}",
        )
    )
    checks.append(
        (
            "slower convergence for smaller nu",
            conv_times[0.01] > conv_times[0.1],
            f"t_conv(0.01) = {conv_times[0.01]:g} vs t_conv(0.1) = {conv_times[0.1]:g}",
        )
    )
    return checks, files
