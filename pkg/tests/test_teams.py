import math

import numpy as np
import pytest

from teamelo.teams import (
    EnumerationTooLargeError,
    GaussianStrength,
    TeamRoster,
    TeamState,
    estimate_team_moments,
    lineup_strengths,
    sample_lineup_strengths,
)

import oracles


class TestTeamRoster:
    def test_strengths_stored_sorted(self):
        roster = TeamRoster([3.0, 1.0, 2.0], 2)
        assert list(roster.strengths) == [1.0, 2.0, 3.0]

    def test_validation(self):
        with pytest.raises(ValueError):
            TeamRoster([], 1)
        with pytest.raises(ValueError):
            TeamRoster([1.0, 2.0], 3)
        with pytest.raises(ValueError):
            TeamRoster([1.0, float("nan")], 1)

    def test_moment_formulas_match_enumeration(self, rng):
        for _ in range(20):
            M = int(rng.integers(2, 8))
            m = int(rng.integers(1, M + 1))
            roster = TeamRoster(rng.uniform(0, 2, M), m)
            mean_ref, std_ref = oracles.enumerate_lineup_stats(list(roster.strengths), m)
            assert roster.theta == pytest.approx(mean_ref, abs=1e-12)
            assert roster.sigma == pytest.approx(std_ref, abs=1e-12)

    def test_spec_example_0_0_3(self):
        roster = TeamRoster([0.0, 0.0, 3.0], 2)
        assert sorted(lineup_strengths(roster)) == [0.0, 3.0, 3.0]
        assert roster.theta == pytest.approx(2.0)
        assert roster.sigma**2 == pytest.approx(2.0)

    def test_scaled_deviations(self):
        roster = TeamRoster([1.0, 3.0], 1)
        shrunk = roster.scaled_deviations(0.5)
        assert list(shrunk.strengths) == [1.5, 2.5]
        assert shrunk.theta == pytest.approx(roster.theta)


class TestLineupEnumeration:
    def test_pascal_triangle_oracle_agrees_with_comb(self):
        assert oracles.pascal_binomial(23, 11) == 1_352_078
        assert math.comb(23, 11) == 1_352_078
        assert TeamRoster(np.zeros(23), 11).lineup_count == 1_352_078

    def test_cap_raises(self):
        roster = TeamRoster(np.arange(23, dtype=float), 11)
        with pytest.raises(EnumerationTooLargeError):
            lineup_strengths(roster, cap=10_000)


class TestEstimateTeamMoments:
    def test_constant_roster_zero_spread(self, rng):
        roster = TeamRoster(np.full(8, 1.5), 3)
        theta, sigma = estimate_team_moments(roster, 100, rng)
        assert sigma == pytest.approx(0.0, abs=1e-12)
        assert theta == pytest.approx(4.5, abs=1e-12)

    def test_full_lineup_exact(self, rng):
        roster = TeamRoster([0.5, 1.25, 2.0], 3)
        theta, sigma = estimate_team_moments(roster, 100, rng)
        assert theta == 3.75
        assert sigma == 0.0

    def test_enumeration_path_is_exact(self, rng):
        roster = TeamRoster([0.0, 0.0, 3.0], 2)
        theta, sigma = estimate_team_moments(roster, 10, rng)  # 3 lineups <= cap
        assert theta == pytest.approx(2.0, abs=1e-12)
        assert sigma == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_sampling_path_within_three_standard_errors(self, rng):
        roster = TeamRoster([0.0, 0.0, 3.0], 2)
        n = 20_000
        theta, sigma = estimate_team_moments(roster, n, rng, enumeration_cap=1)
        se_mean = math.sqrt(2.0 / n)
        assert abs(theta - 2.0) <= 3 * se_mean
        assert abs(sigma - math.sqrt(2.0)) <= 3 * se_mean  # conservative for the std

    def test_sampler_statistics(self, rng):
        roster = TeamRoster([1.0, 2.0, 4.0, 8.0], 2)
        xs = sample_lineup_strengths(roster, 50_000, rng)
        assert xs.mean() == pytest.approx(roster.theta, abs=4 * roster.sigma / math.sqrt(50_000))

    def test_needs_two_draws(self, rng):
        with pytest.raises(ValueError):
            estimate_team_moments(TeamRoster([1.0, 2.0], 1), 1, rng)


class TestStateTypes:
    def test_team_state_validation(self):
        with pytest.raises(ValueError):
            TeamState(0.0, -1.0, 0.0)
        with pytest.raises(ValueError):
            TeamState(float("nan"), 1.0, 0.0)

    def test_gaussian_strength_validation(self):
        with pytest.raises(ValueError):
            GaussianStrength(5.0, -0.5)
        member = GaussianStrength(5.0, 2.0)
        assert member.theta == 5.0 and member.sigma == 2.0

    def test_roster_state(self):
        roster = TeamRoster([0.0, 0.0, 3.0], 2)
        state = roster.state(rating=4.0)
        assert state.theta == pytest.approx(2.0)
        assert state.rating == 4.0
