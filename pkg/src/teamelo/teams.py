"""Team rosters, line-up sampling, and observable team moments.

A team is a roster of M player strengths from which a line-up of m
distinct players is fielded per match; the per-match team strength is
the sum of the fielded players' (pre-scaled) strengths.  Over uniformly
random line-ups that strength is a bounded random variable with

    theta  = (m/M) * sum(rho)                      (mean)
    sigma^2 = m * (M-m)/(M-1) * pvar(rho)          (variance)

where pvar is the population variance of the roster.  Teams whose
per-match strength is drawn from a normal law N(theta, sigma^2) are
represented by GaussianStrength instead of an explicit roster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = [
    "TeamRoster",
    "GaussianStrength",
    "TeamState",
    "EnumerationTooLargeError",
    "lineup_strengths",
    "estimate_team_moments",
]

#: default ceiling on enumerated line-ups per team
LINEUP_ENUMERATION_CAP = 200_000


class EnumerationTooLargeError(ValueError):
    """Raised when full line-up enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class TeamState:
    """Observable triple of a team: mean strength, spread, current rating."""

    theta: float
    sigma: float
    rating: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.theta, self.sigma, self.rating))):
            raise ValueError(f"TeamState fields must be finite: {self}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma!r}")


class TeamRoster:
    """M player strengths with a fixed line-up size m, stored sorted ascending."""

    def __init__(self, strengths, lineup_size: int):
        arr = np.sort(np.asarray(strengths, dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("strengths must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("strengths must be finite")
        m = int(lineup_size)
        if not 1 <= m <= arr.size:
            raise ValueError(f"lineup_size must be in [1, {arr.size}], got {lineup_size!r}")
        self.strengths = arr
        self.lineup_size = m

    @property
    def n_players(self) -> int:
        return int(self.strengths.size)

    @property
    def lineup_count(self) -> int:
        return math.comb(self.n_players, self.lineup_size)

    @property
    def theta(self) -> float:
        """Mean per-match strength over uniform line-ups."""
        return self.lineup_size / self.n_players * float(self.strengths.sum())

    @property
    def sigma(self) -> float:
        """Std dev of per-match strength (without-replacement sum formula)."""
        M, m = self.n_players, self.lineup_size
        if M == 1 or m == M:
            return 0.0
        pvar = float(np.var(self.strengths))
        return math.sqrt(m * (M - m) / (M - 1) * pvar)

    def state(self, rating: float) -> TeamState:
        return TeamState(self.theta, self.sigma, rating)

    def scaled_deviations(self, eps: float) -> "TeamRoster":
        """New roster with player deviations from the mean scaled by eps."""
        mean = self.strengths.mean()
        return TeamRoster(mean + eps * (self.strengths - mean), self.lineup_size)

    def __repr__(self):
        return f"TeamRoster(M={self.n_players}, m={self.lineup_size}, theta={self.theta:.4g})"


@dataclass(frozen=True)
class GaussianStrength:
    """Team whose per-match strength is drawn from N(theta, sigma^2)."""

    theta: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.sigma)):
            raise ValueError(f"GaussianStrength fields must be finite: {self}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma!r}")


def lineup_strengths(roster: TeamRoster, cap: int = LINEUP_ENUMERATION_CAP) -> np.ndarray:
    """All C(M, m) per-match strengths of a roster, in enumeration order.

    Raises EnumerationTooLargeError when C(M, m) > cap.
    """
    count = roster.lineup_count
    if count > cap:
        raise EnumerationTooLargeError(
            f"C({roster.n_players}, {roster.lineup_size}) = {count} line-ups exceed the "
            f"enumeration cap {cap}; use the Taylor approximation or sampling instead"
        )
    idx = np.fromiter(
        (i for combo in combinations(range(roster.n_players), roster.lineup_size) for i in combo),
        dtype=np.intp,
        count=count * roster.lineup_size,
    ).reshape(count, roster.lineup_size)
    return roster.strengths[idx].sum(axis=1)


def sample_lineup_strengths(roster: TeamRoster, n_draws: int, rng: np.random.Generator):
    """n_draws per-match strengths from uniformly random line-ups."""
    M, m = roster.n_players, roster.lineup_size
    # column argsort of iid uniforms = independent random permutations
    perm = np.argsort(rng.random((n_draws, M)), axis=1)[:, :m]
    return roster.strengths[perm].sum(axis=1)


def estimate_team_moments(
    roster: TeamRoster,
    n_draws: int,
    rng: np.random.Generator,
    enumeration_cap: int = 50_000,
) -> tuple[float, float]:
    """(theta_hat, sigma_hat) of the per-match strength.

    Enumerates exactly when the roster has at most ``enumeration_cap``
    line-ups, otherwise Monte Carlo over ``n_draws`` uniform line-ups.
    """
    if n_draws < 2:
        raise ValueError(f"n_draws must be >= 2, got {n_draws!r}")
    if roster.lineup_count <= enumeration_cap:
        xs = lineup_strengths(roster, cap=enumeration_cap)
    else:
        xs = sample_lineup_strengths(roster, n_draws, rng)
    return float(xs.mean()), float(xs.std())
