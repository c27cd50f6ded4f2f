"""Post-processing: moments, relative energy, decay-rate and scatter checks.

The macroscopic conservation/decay statements are checked on grid
moments via midpoint quadrature; the phenomenology of the micro engine
(compression of ratings toward the center, slope of rating on strength,
micro/macro agreement) is quantified on terminal (theta, rating)
scatters.

The guaranteed-decay comparison uses the coercivity (inf-slope) variants
of the theorem constants: the relative energy must fall at least as fast
as E(0) * exp(-2 w_min (L_min + sigma^2 L2_min) t) whenever the
variance-adjusted response b + sigma^2 b'' is increasing on the support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import DensityGrid
from .kernels import InteractionKernel
from .response import ResponseFunction, check_effective_response_monotone, slope_bounds

__all__ = [
    "MomentReport",
    "MOMENT_FIELDS",
    "compute_moments",
    "empirical_moments",
    "relative_energy",
    "EnergySeries",
    "DecayCheck",
    "fit_decay_rate",
    "check_energy_decay",
    "regression_slope",
    "compression_metric",
    "micro_macro_distance",
    "scatter_to_grid",
]

MOMENT_FIELDS = (
    "mass",
    "m1_r",
    "m2_r",
    "m1_theta",
    "m2_theta",
    "m2_sigma2",
    "var_r",
    "var_theta",
)


@dataclass(frozen=True, slots=True)
class MomentReport:
    """Raw and recentered moments of a team density at one time.

    Kept slotted: long runs hold one report per step.
    """

    t: float
    mass: float
    m1_r: float
    m2_r: float
    m1_theta: float
    m2_theta: float
    m2_sigma2: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass!r}")
        if self.m2_r < self.m1_r**2 / self.mass - 1e-12:
            raise ValueError("m2_r violates the Cauchy-Schwarz lower bound")

    @property
    def var_r(self) -> float:
        """Second r-moment after recentering (m1_r -> 0)."""
        return self.m2_r - self.m1_r**2 / self.mass

    @property
    def var_theta(self) -> float:
        return self.m2_theta - self.m1_theta**2 / self.mass


def compute_moments(grid: DensityGrid, t: float = 0.0) -> MomentReport:
    """Midpoint-quadrature moments of a density grid."""
    vol = grid.cell_volume
    values = grid.values
    r = grid.r_centers
    theta = grid.theta_centers
    r_mass = values.sum(axis=tuple(range(grid.ndim - 1))) * vol
    theta_mass = values.sum(axis=tuple(range(1, grid.ndim))) * vol
    mass = float(r_mass.sum())
    if grid.is_2d:
        m2_sigma2 = grid.sigma_const**2 * mass
    else:
        sigma_mass = values.sum(axis=(0, 2)) * vol
        m2_sigma2 = float(sigma_mass @ grid.sigma_centers**2)
    return MomentReport(
        t=t,
        mass=mass,
        m1_r=float(r_mass @ r),
        m2_r=float(r_mass @ r**2),
        m1_theta=float(theta_mass @ theta),
        m2_theta=float(theta_mass @ theta**2),
        m2_sigma2=m2_sigma2,
    )


def empirical_moments(thetas, sigmas, ratings, t: float = 0.0) -> MomentReport:
    """Moments of a finite team population (each team has mass 1/N)."""
    thetas = np.asarray(thetas, dtype=float)
    sigmas = np.asarray(sigmas, dtype=float)
    ratings = np.asarray(ratings, dtype=float)
    n = thetas.size
    return MomentReport(
        t=t,
        mass=1.0,
        m1_r=float(ratings.mean()),
        m2_r=float((ratings**2).mean()),
        m1_theta=float(thetas.mean()),
        m2_theta=float((thetas**2).mean()),
        m2_sigma2=float((sigmas**2).mean()) if n else 0.0,
    )


def relative_energy(grid: DensityGrid) -> float:
    """E = integral (r - theta)^2 f over a 2-D grid."""
    if not grid.is_2d:
        raise ValueError("relative energy is defined on the reduced 2-D grid; reduce first")
    gap = grid.theta_centers[:, None] - grid.r_centers[None, :]
    return float((gap**2 * grid.values).sum() * grid.cell_volume)


@dataclass
class EnergySeries:
    """Relative-energy samples with fitted and theorem decay rates."""

    times: np.ndarray
    energies: np.ndarray
    fitted_rate: float | None = None
    theorem_rate: float | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.energies = np.asarray(self.energies, dtype=float)
        if self.times.shape != self.energies.shape or self.times.ndim != 1:
            raise ValueError("times and energies must be matching 1-d arrays")
        if np.any(self.energies < 0):
            raise ValueError("relative energy cannot be negative")


@dataclass(frozen=True)
class DecayCheck:
    """Verdict of the guaranteed-exponential-decay comparison."""

    assumption_holds: bool
    monotone: bool
    fitted_rate: float | None
    bound_rate: float | None
    bound_satisfied: bool | None
    detail: str


def fit_decay_rate(series: EnergySeries, floor_ratio: float = 1e-8) -> float:
    """Least-squares decay rate of log E(t), ignoring the float-noise tail."""
    e0 = series.energies[0]
    keep = series.energies > floor_ratio * e0
    t, e = series.times[keep], series.energies[keep]
    if t.size < 2:
        raise ValueError("not enough samples above the fit floor")
    slope = np.polyfit(t, np.log(e), 1)[0]
    return float(-slope)


def check_energy_decay(
    series: EnergySeries,
    b: ResponseFunction,
    w: InteractionKernel,
    support,
    sigma: float,
    slack: float = 0.05,
    monotone_tol: float = 1e-12,
) -> DecayCheck:
    """Check monotone decay and the exponential bound on an energy series.

    ``support`` is the (lo, hi) range jointly covered by theta and r, so
    the response arguments live in [lo - hi, hi - lo].  When the
    variance-adjusted response fails to be increasing there, no bound is
    asserted and the check reports the violation instead.
    """
    if series.times.size < 3:
        raise ValueError("need at least 3 energy samples")
    lo, hi = float(support[0]), float(support[1])
    z_lo, z_hi = lo - hi, hi - lo
    mono = check_effective_response_monotone(b, sigma, z_lo, z_hi)
    e = series.energies
    diffs = np.diff(e)
    is_monotone = bool(np.all(diffs <= monotone_tol * max(e[0], 1.0)))
    if not mono.holds:
        return DecayCheck(
            assumption_holds=False,
            monotone=is_monotone,
            fitted_rate=None,
            bound_rate=None,
            bound_satisfied=None,
            detail=(
                "assumption violated; decay not guaranteed "
                f"(b + sigma^2 b'' slope {mono.min_slope:.3e} at z={mono.argmin:.3g})"
            ),
        )
    bounds = slope_bounds(b, z_lo, z_hi)
    w_min = w.min_over(z_lo, z_hi)
    bound_rate = 2.0 * w_min * (bounds.min_b1 + sigma**2 * bounds.min_b3)
    series.theorem_rate = bound_rate
    fitted = fit_decay_rate(series)
    series.fitted_rate = fitted
    envelope = e[0] * np.exp(-bound_rate * series.times) * (1.0 + slack)
    satisfied = bool(np.all(e <= envelope))
    return DecayCheck(
        assumption_holds=True,
        monotone=is_monotone,
        fitted_rate=fitted,
        bound_rate=bound_rate,
        bound_satisfied=satisfied,
        detail=(
            f"fitted rate {fitted:.4g} vs guaranteed {bound_rate:.4g} "
            f"(w_min={w_min:.3g}, slack {slack:.0%})"
        ),
    )


def regression_slope(thetas, ratings) -> float:
    """Ordinary least-squares slope of rating on theta."""
    thetas = np.asarray(thetas, dtype=float)
    ratings = np.asarray(ratings, dtype=float)
    if thetas.size < 2 or np.ptp(thetas) == 0.0:
        raise ValueError("regression needs at least two distinct theta values")
    dt = thetas - thetas.mean()
    return float(dt @ (ratings - ratings.mean()) / (dt @ dt))


def compression_metric(thetas, ratings) -> float:
    """mean sign(theta - mean theta) * (rating - theta).

    Negative values mean ratings are squeezed toward the center: strong
    teams rated below their strength, weak teams above.
    """
    thetas = np.asarray(thetas, dtype=float)
    ratings = np.asarray(ratings, dtype=float)
    if thetas.size == 0:
        raise ValueError("empty scatter")
    return float(np.mean(np.sign(thetas - thetas.mean()) * (ratings - thetas)))


def micro_macro_distance(micro_thetas, micro_ratings, macro_grid: DensityGrid) -> float:
    """sup over theta-bins of |mean micro rating - macro E[r | theta]|.

    The micro terminal scatter is binned into the macro theta cells;
    bins with no micro teams or no macro mass are skipped.
    """
    if not macro_grid.is_2d:
        raise ValueError("micro/macro comparison expects the reduced 2-D grid")
    thetas = np.asarray(micro_thetas, dtype=float)
    ratings = np.asarray(micro_ratings, dtype=float)
    lo, hi = macro_grid.bounds[0]
    n_bins = macro_grid.shape[0]
    dtheta = macro_grid.deltas[0]
    bins = np.clip(((thetas - lo) / dtheta).astype(int), 0, n_bins - 1)
    _, macro_mean = macro_grid.conditional_mean_r()
    worst = None
    for l in range(n_bins):
        sel = bins == l
        if not np.any(sel) or not np.isfinite(macro_mean[l]):
            continue
        gap = abs(float(ratings[sel].mean()) - float(macro_mean[l]))
        worst = gap if worst is None else max(worst, gap)
    if worst is None:
        raise ValueError("no theta bin holds both micro teams and macro mass")
    return worst


def scatter_to_grid(thetas, ratings, bounds, shape) -> DensityGrid:
    """Histogram a (theta, rating) scatter into a normalized 2-D grid."""
    thetas = np.asarray(thetas, dtype=float)
    ratings = np.asarray(ratings, dtype=float)
    grid = DensityGrid(bounds, shape)
    (t_lo, t_hi), (r_lo, r_hi) = grid.bounds
    hist, _, _ = np.histogram2d(
        thetas, ratings, bins=grid.shape, range=[[t_lo, t_hi], [r_lo, r_hi]]
    )
    grid.values[...] = hist
    return grid.normalize()
