"""CSV and manifest I/O.

All numeric output uses repr (shortest round-trip form), so re-running a
seeded experiment reproduces byte-identical files.  Grid snapshot files
carry their geometry in a leading comment so they can be read back
without outside information.

The run configuration format is flat ``key = value`` text with explicit
units baked into key names (dt_time, r_lo_rating, ...); unknown keys are
errors, not warnings, since a silently ignored typo corrupts a numerical
experiment.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError
from .grid import DensityGrid

__all__ = [
    "fmt",
    "write_csv",
    "write_trajectories",
    "write_scatter",
    "read_scatter",
    "write_grid_snapshot",
    "read_grid_snapshot",
    "write_marginals",
    "write_moments",
    "read_moments",
    "write_flat_config",
    "read_flat_config",
    "write_verdict",
]


def fmt(x) -> str:
    """Shortest round-trip text for a number (ints stay ints)."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header, rows):
    """Write rows of numbers/strings with a header line."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(x if isinstance(x, str) else fmt(x) for x in row) + "\n")


def write_trajectories(path, result):
    """Trajectory CSV: (realization, t, team_id, theta, sigma_est, rating)."""
    thetas, sigmas = result.thetas, result.sigmas

    def rows():
        for rec in result.records():
            for team in range(rec.rating.size):
                yield (
                    rec.realization,
                    rec.time,
                    team,
                    thetas[team],
                    sigmas[team],
                    rec.rating[team],
                )

    write_csv(path, ("realization", "t", "team_id", "theta", "sigma_est", "rating"), rows())


def write_scatter(path, result):
    """Terminal scatter CSV: (team_id, theta, sigma_est, rating_mean, rating_std)."""
    rows = zip(
        range(result.thetas.size),
        result.thetas,
        result.sigmas,
        result.rating_mean,
        result.rating_std,
    )
    write_csv(path, ("team_id", "theta", "sigma_est", "rating_mean", "rating_std"), rows)


def read_scatter(path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    data = np.atleast_1d(data)
    return {name: np.asarray(data[name]) for name in data.dtype.names}


def write_grid_snapshot(path, grid: DensityGrid):
    """Snapshot CSV: (theta, sigma, r, f) or (theta, r, f) plus geometry comment."""
    bounds = ";".join(f"{fmt(lo)}:{fmt(hi)}" for lo, hi in grid.bounds)
    shape = ";".join(str(n) for n in grid.shape)
    with open(path, "w") as fh:
        fh.write(f"# teamelo-grid bounds={bounds} shape={shape} sigma_const={fmt(grid.sigma_const)}\n")
        if grid.is_2d:
            fh.write("theta,r,f\n")
            for l, th in enumerate(grid.theta_centers):
                for j, r in enumerate(grid.r_centers):
                    fh.write(f"{fmt(th)},{fmt(r)},{fmt(grid.values[l, j])}\n")
        else:
            fh.write("theta,sigma,r,f\n")
            for l, th in enumerate(grid.theta_centers):
                for m, sg in enumerate(grid.sigma_centers):
                    for j, r in enumerate(grid.r_centers):
                        fh.write(f"{fmt(th)},{fmt(sg)},{fmt(r)},{fmt(grid.values[l, m, j])}\n")


def read_grid_snapshot(path) -> DensityGrid:
    with open(path) as fh:
        head = fh.readline().strip()
    if not head.startswith("# teamelo-grid"):
        raise ConfigError(f"{path} is not a grid snapshot (missing geometry comment)")
    meta = dict(part.split("=", 1) for part in head[len("# teamelo-grid ") :].split())
    bounds = tuple(tuple(map(float, pair.split(":"))) for pair in meta["bounds"].split(";"))
    shape = tuple(int(n) for n in meta["shape"].split(";"))
    values = np.loadtxt(path, delimiter=",", skiprows=2, usecols=len(shape))
    grid = DensityGrid(bounds, shape, values.reshape(shape), sigma_const=float(meta["sigma_const"]))
    return grid


def write_marginals(path_theta, path_r, grid: DensityGrid):
    """Marginal CSVs: (axis value, marginal density)."""
    th, th_density = grid.theta_marginal()
    write_csv(path_theta, ("theta", "density"), zip(th, th_density))
    r, r_density = grid.r_marginal()
    write_csv(path_r, ("r", "density"), zip(r, r_density))


def write_moments(path, result):
    """Moment series CSV: (t, mass, m1_r, m2_r[, energy], extended moments)."""
    table = result.moment_table()
    names = ["t", "mass", "m1_r", "m2_r"]
    if "energy" in table:
        names.append("energy")
    names += ["m1_theta", "m2_theta", "m2_sigma2", "var_r", "var_theta"]
    cols = [table[name] for name in names]
    write_csv(path, names, zip(*cols))


def read_moments(path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    data = np.atleast_1d(data)
    return {name: np.asarray(data[name]) for name in data.dtype.names}


def write_flat_config(path, entries: dict, header: str | None = None):
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        for key, value in entries.items():
            if isinstance(value, bool):
                value = int(value)
            fh.write(f"{key} = {value if isinstance(value, str) else fmt(value)}\n")


def read_flat_config(path, known_keys) -> dict[str, str]:
    """Parse flat key = value text; any unknown key is a ConfigError."""
    entries: dict[str, str] = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known_keys:
                raise ConfigError(f"{path}:{n}: unknown config key {key!r}")
            if key in entries:
                raise ConfigError(f"{path}:{n}: duplicate config key {key!r}")
            entries[key] = value
    return entries


def write_verdict(path, lines):
    with open(path, "w") as fh:
        for name, passed, detail in lines:
            status = "PASS" if passed else "FAIL"
            fh.write(f"{status} {name}: {detail}\n")


def ensure_outdir(path) -> str:
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write-probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise ConfigError(f"output directory {path!r} is not writable: {exc}") from exc
    return path
