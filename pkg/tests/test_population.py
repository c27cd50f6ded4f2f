import numpy as np
import pytest
from scipy.stats import spearmanr

from teamelo.population import (
    Population,
    build_gaussian_population,
    build_setup_r1,
    build_setup_r2,
)
from teamelo.teams import GaussianStrength, TeamRoster, sample_lineup_strengths


class TestSetupR1:
    def test_first_team_is_deterministic(self):
        pop = build_setup_r1(200, seed=0)
        first = pop.members[0]
        assert np.allclose(first.strengths, 5.0 / 11.0)
        assert first.theta == pytest.approx(5.0, abs=1e-12)
        assert first.sigma == pytest.approx(0.0, abs=1e-12)

    def test_last_team_spans_widest_interval(self):
        pop = build_setup_r1(200, seed=0)
        last = pop.members[-1]
        lo, hi = last.strengths.min(), last.strengths.max()
        assert lo >= 0.0 / 11.0 and hi <= 10.0 / 11.0
        assert hi - lo > 6.0 / 11.0  # actually spread out

    def test_all_teams_have_theta_near_five(self):
        pop = build_setup_r1(200, seed=3)
        assert np.all(np.abs(pop.thetas - 5.0) < 2.0)
        assert abs(np.mean(pop.thetas) - 5.0) < 0.1

    def test_sigma_trend_monotone_in_team_index(self, rng):
        # Monte Carlo sigma estimates over 1e4 line-up draws follow the
        # construction order (rank correlation >= 0.95)
        pop = build_setup_r1(200, seed=0)
        estimates = [
            sample_lineup_strengths(member, 10_000, rng).std() for member in pop.members
        ]
        rho = spearmanr(np.arange(len(estimates)), estimates).statistic
        assert rho >= 0.95

    def test_roster_shape(self):
        pop = build_setup_r1(10, seed=0)
        assert all(m.n_players == 23 and m.lineup_size == 11 for m in pop.members)


class TestSetupR2:
    def test_outlier_means_exact(self):
        pop = build_setup_r2(200, seed=0, special_sigma=2.0)
        assert pop.members[-2] == GaussianStrength(10.0, 2.0)
        assert pop.members[-1] == GaussianStrength(9.0, 2.0)
        assert pop.thetas[-2] == 10.0 and pop.thetas[-1] == 9.0

    def test_zero_special_sigma_is_deterministic(self):
        pop = build_setup_r2(200, seed=0, special_sigma=0.0)
        assert pop.members[-2].sigma == 0.0
        assert pop.members[-1].sigma == 0.0

    def test_regular_ladder_from_four_to_ten(self):
        pop = build_setup_r2(200, seed=5)
        regular = pop.thetas[:-2]
        # theta_i = base + noise, noise sd = sqrt(23)/23 ~ 0.21
        assert abs(regular[0] - 4.0) < 1.0
        assert abs(regular[-1] - 10.0) < 1.0
        slope = np.polyfit(np.arange(regular.size), regular, 1)[0]
        assert slope > 0

    def test_outlier_sigma_exceeds_regular_sigma(self):
        pop = build_setup_r2(200, seed=5, special_sigma=2.0)
        assert pop.sigmas[-2:].min() > 3 * pop.sigmas[:-2].max()

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            build_setup_r2(2, seed=0)


class TestPopulation:
    def test_initial_ratings_constant_default(self):
        pop = build_setup_r1(5, seed=0)
        assert np.all(pop.ratings == 5.0)
        pop7 = build_setup_r1(5, seed=0, initial_rating=7.0)
        assert np.all(pop7.ratings == 7.0)

    def test_gaussian_population_midpoint_default(self):
        pop = build_gaussian_population(np.linspace(4, 10, 7), 1.0)
        assert np.all(pop.ratings == 7.0)
        assert pop.sigmas.max() == 1.0

    def test_lengths_consistent(self):
        pop = build_gaussian_population([1.0, 2.0, 3.0], 0.5)
        assert pop.n_teams == 3
        assert pop.ratings.shape == pop.thetas.shape == pop.sigmas.shape == (3,)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Population([])

    def test_shifted_copies(self):
        pop = build_gaussian_population([1.0, 2.0], 0.5, initial_rating=3.0)
        moved = pop.shifted(rating_shift=2.0, theta_shift=1.0)
        assert np.allclose(moved.ratings, 5.0)
        assert np.allclose(moved.thetas, [2.0, 3.0])
        roster_pop = Population([TeamRoster([1.0, 2.0], 1)])
        with pytest.raises(ValueError):
            roster_pop.shifted(theta_shift=1.0)
