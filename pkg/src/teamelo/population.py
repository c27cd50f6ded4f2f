"""Team populations for the agent-based simulator.

Two football-inspired presets build N teams of M = 23 players fielding
m = 11 per match, with player strengths pre-scaled by 1/11:

* setup R1: team i draws its strengths uniformly from
  (1/11) * [5 - 5(i-1)/N, 5 + 5(i-1)/N]; every team has mean strength
  theta ~ 5 while the line-up spread sigma grows with i (team 1 is
  perfectly deterministic).

* setup R2: teams 1..N-2 draw strengths (1/11) * (4 + 6(i-1)/(N-3) + eta)
  with standard-normal eta, so theta climbs from ~4 to ~10 at roughly
  constant sigma; the last two teams are outliers with theta = 10 and 9
  and a configurable, larger per-match spread.

Initial ratings are a constant (the dynamics are translation invariant,
so the value is immaterial; 5 is the midpoint of the default strength
domain [0, 10]).
"""

from __future__ import annotations

import numpy as np

from .teams import GaussianStrength, TeamRoster

__all__ = [
    "Population",
    "build_setup_r1",
    "build_setup_r2",
    "build_gaussian_population",
]

DEFAULT_INITIAL_RATING = 5.0


class Population:
    """N teams (rosters or Gaussian-strength) with their current ratings."""

    def __init__(self, members, initial_rating: float = DEFAULT_INITIAL_RATING):
        if not members:
            raise ValueError("population needs at least one team")
        self.members = list(members)
        self.ratings = np.full(len(self.members), float(initial_rating))
        self.ids = np.arange(len(self.members))
        self.thetas = np.array([m.theta for m in self.members])
        self.sigmas = np.array([m.sigma for m in self.members])

    @property
    def n_teams(self) -> int:
        return len(self.members)

    def shifted(self, rating_shift: float = 0.0, theta_shift: float = 0.0) -> "Population":
        """Copy with ratings and/or Gaussian means shifted by constants.

        Only Gaussian-strength members support theta_shift (roster
        strengths shift per player, which moves theta by m * c instead).
        """
        members = self.members
        if theta_shift:
            members = [
                GaussianStrength(m.theta + theta_shift, m.sigma)
                if isinstance(m, GaussianStrength)
                else m
                for m in members
            ]
            if any(isinstance(m, TeamRoster) for m in self.members):
                raise ValueError("theta_shift only applies to Gaussian-strength populations")
        pop = Population(members, initial_rating=0.0)
        pop.ratings = self.ratings + rating_shift
        return pop


def build_setup_r1(
    n_teams: int = 200,
    seed: int = 0,
    n_players: int = 23,
    lineup_size: int = 11,
    initial_rating: float = DEFAULT_INITIAL_RATING,
) -> Population:
    """Equal-strength teams with spread increasing in the team index."""
    if n_teams < 1:
        raise ValueError(f"n_teams must be >= 1, got {n_teams!r}")
    rng = np.random.default_rng(seed)
    members = []
    for i in range(1, n_teams + 1):
        half_width = 5.0 * (i - 1) / n_teams
        lo, hi = (5.0 - half_width) / 11.0, (5.0 + half_width) / 11.0
        if i == 1:
            strengths = np.full(n_players, 5.0 / 11.0)
        else:
            strengths = rng.uniform(lo, hi, size=n_players)
        members.append(TeamRoster(strengths, lineup_size))
    return Population(members, initial_rating=initial_rating)


def build_setup_r2(
    n_teams: int = 200,
    seed: int = 0,
    special_sigma: float = 2.0,
    n_players: int = 23,
    lineup_size: int = 11,
    initial_rating: float = DEFAULT_INITIAL_RATING,
) -> Population:
    """Strength ladder from ~4 to ~10 plus two high-variance outliers.

    The outliers (indices N-1 and N) have exact means 10 and 9 with the
    configurable per-match spread ``special_sigma``.
    """
    if n_teams < 3:
        raise ValueError(f"setup R2 needs at least 3 teams, got {n_teams!r}")
    if special_sigma < 0:
        raise ValueError(f"special_sigma must be >= 0, got {special_sigma!r}")
    rng = np.random.default_rng(seed)
    n_regular = n_teams - 2
    members = []
    for i in range(1, n_regular + 1):
        base = 4.0 + 6.0 * (i - 1) / max(n_regular - 1, 1)
        eta = rng.standard_normal(n_players)
        members.append(TeamRoster((base + eta) / 11.0, lineup_size))
    members.append(GaussianStrength(10.0, special_sigma))
    members.append(GaussianStrength(9.0, special_sigma))
    return Population(members, initial_rating=initial_rating)


def build_gaussian_population(
    thetas, sigma: float, initial_rating: float | None = None
) -> Population:
    """Teams with fixed means and a common Gaussian per-match spread."""
    thetas = np.asarray(thetas, dtype=float)
    if initial_rating is None:
        initial_rating = 0.5 * (thetas.min() + thetas.max())
    members = [GaussianStrength(float(t), float(sigma)) for t in thetas]
    return Population(members, initial_rating=initial_rating)
