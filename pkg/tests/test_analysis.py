import numpy as np
import pytest

from teamelo.analysis import (
    DecayCheck,
    EnergySeries,
    check_energy_decay,
    compression_metric,
    compute_moments,
    empirical_moments,
    fit_decay_rate,
    micro_macro_distance,
    regression_slope,
    relative_energy,
    scatter_to_grid,
)
from teamelo.grid import DensityGrid
from teamelo.kernels import AllPlayAll
from teamelo.response import TanhResponse


class TestRelativeEnergy:
    def test_diagonal_support_has_zero_energy(self):
        n = 10
        grid = DensityGrid(((0, 5), (0, 5)), (n, n))
        grid.values[np.arange(n), np.arange(n)] = 1.0
        grid.normalize()
        assert relative_energy(grid) == 0.0

    def test_two_cell_hand_value(self):
        # mass 1/2 at (theta, r) = (0, 1) and (1, 0): E = 1
        grid = DensityGrid(((-0.5, 1.5), (-0.5, 1.5)), (2, 2))
        grid.values[0, 1] = grid.values[1, 0] = 1.0
        grid.normalize()
        assert relative_energy(grid) == pytest.approx(1.0, abs=1e-14)

    def test_invariant_under_joint_translation(self, rng):
        values = rng.random((6, 6))
        a = DensityGrid(((0, 3), (0, 3)), (6, 6), values.copy())
        b = DensityGrid(((10, 13), (10, 13)), (6, 6), values.copy())
        assert relative_energy(a) == pytest.approx(relative_energy(b), rel=1e-12)

    def test_rejects_3d_grid(self):
        grid = DensityGrid.uniform(((0, 1), (0, 1), (0, 1)), (2, 2, 2))
        with pytest.raises(ValueError, match="reduce"):
            relative_energy(grid)


class TestMoments:
    def test_hand_quadrature_tiny_grid(self):
        grid = DensityGrid(((0, 2), (0, 2)), (2, 2))
        grid.values[0, 0] = 1.0  # theta = 0.5, r = 0.5, cellvol = 1
        grid.values[1, 1] = 1.0  # theta = 1.5, r = 1.5
        report = compute_moments(grid)
        assert report.mass == pytest.approx(2.0)
        assert report.m1_r == pytest.approx(0.5 + 1.5)
        assert report.m2_r == pytest.approx(0.25 + 2.25)
        assert report.var_r == pytest.approx(2.5 - 4.0 / 2.0)

    def test_cauchy_schwarz_guard(self):
        from teamelo.analysis import MomentReport

        with pytest.raises(ValueError):
            MomentReport(t=0, mass=1.0, m1_r=2.0, m2_r=1.0, m1_theta=0, m2_theta=0, m2_sigma2=0)

    def test_empirical_matches_grid_on_matched_data(self, rng):
        # micro teams on theta cell centers, all ratings at one r cell:
        # grid and empirical moments agree within binning error <= 2 dr
        grid = DensityGrid(((4, 10), (4, 10)), (30, 30))
        thetas = np.repeat(grid.theta_centers, 2)
        r0 = grid.r_centers[15]
        lcol = ((thetas - 4.0) / grid.deltas[0]).astype(int)
        grid.values[lcol, 15] += 1.0
        grid.normalize()
        emp = empirical_moments(thetas, np.zeros_like(thetas), np.full_like(thetas, r0))
        rep = compute_moments(grid)
        assert abs(rep.m1_r - emp.m1_r) <= 2 * grid.dr
        assert abs(rep.m1_theta - emp.m1_theta) <= 2 * grid.deltas[0]
        assert abs(rep.m2_r - emp.m2_r) <= 2 * grid.dr * abs(emp.m1_r) * 2


class TestDecayFit:
    def test_exact_exponential_recovered(self):
        t = np.linspace(0, 3, 40)
        series = EnergySeries(t, 2.5 * np.exp(-0.7 * t))
        assert fit_decay_rate(series) == pytest.approx(0.7, rel=1e-9)

    def test_noise_floor_excluded(self):
        t = np.linspace(0, 50, 200)
        e = 1.0 * np.exp(-1.0 * t)
        e[e < 1e-10] = 1e-10  # flat float-noise tail
        series = EnergySeries(t, e)
        assert fit_decay_rate(series) == pytest.approx(1.0, rel=0.05)

    def test_negative_energy_rejected(self):
        with pytest.raises(ValueError):
            EnergySeries([0, 1], [1.0, -0.1])


class TestCheckEnergyDecay:
    B = TanhResponse(0.1)

    def test_constant_series_fails_bound(self):
        t = np.linspace(0, 2, 10)
        series = EnergySeries(t, np.ones(10))
        check = check_energy_decay(series, self.B, AllPlayAll(), (4, 10), 0.0)
        assert isinstance(check, DecayCheck)
        assert check.assumption_holds
        assert check.bound_rate > 0
        assert check.bound_satisfied is False

    def test_violated_assumption_reported_without_bound(self):
        t = np.linspace(0, 2, 10)
        series = EnergySeries(t, np.exp(-t))
        check = check_energy_decay(series, TanhResponse(1.0), AllPlayAll(), (4, 10), 2.0)
        assert not check.assumption_holds
        assert check.bound_rate is None and check.bound_satisfied is None
        assert "not guaranteed" in check.detail

    def test_decaying_series_passes(self):
        t = np.linspace(0, 2, 20)
        series = EnergySeries(t, 3.0 * np.exp(-0.5 * t))
        check = check_energy_decay(series, self.B, AllPlayAll(), (4, 10), 0.0)
        assert check.monotone and check.assumption_holds
        assert check.fitted_rate == pytest.approx(0.5, rel=1e-6)
        assert check.bound_satisfied  # 0.5 beats the ~0.142 guarantee

    def test_needs_three_samples(self):
        with pytest.raises(ValueError):
            check_energy_decay(
                EnergySeries([0, 1], [1, 0.5]), self.B, AllPlayAll(), (4, 10), 0.0
            )


class TestRegressionSlope:
    def test_perfect_diagonal(self):
        theta = np.linspace(0, 5, 12)
        assert regression_slope(theta, theta.copy()) == pytest.approx(1.0, abs=1e-12)

    def test_constant_ratings(self):
        assert regression_slope([1, 2, 3], [4, 4, 4]) == 0.0

    def test_closed_form_example(self):
        assert regression_slope([4, 6, 8], [5, 6, 7]) == pytest.approx(0.5, abs=1e-14)

    def test_invariant_under_rating_shift(self, rng):
        theta = rng.uniform(0, 10, 30)
        ratings = rng.uniform(0, 10, 30)
        assert regression_slope(theta, ratings + 5.0) == pytest.approx(
            regression_slope(theta, ratings), abs=1e-10
        )

    def test_degenerate_theta_rejected(self):
        with pytest.raises(ValueError):
            regression_slope([2.0, 2.0], [1.0, 3.0])
        with pytest.raises(ValueError):
            regression_slope([2.0], [1.0])


class TestCompressionMetric:
    def test_ratings_equal_strengths(self):
        theta = np.array([1.0, 2.0, 5.0])
        assert compression_metric(theta, theta.copy()) == 0.0

    def test_full_compression(self):
        theta = np.array([1.0, 3.0, 8.0])
        ratings = np.full(3, theta.mean())
        assert compression_metric(theta, ratings) == pytest.approx(
            -np.mean(np.abs(theta - theta.mean()))
        )

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            compression_metric([], [])


class TestMicroMacroDistance:
    def test_zero_against_self_histogram(self, rng):
        thetas = rng.uniform(4, 10, 400)
        ratings = rng.uniform(4, 10, 400)
        grid = scatter_to_grid(thetas, ratings, ((4, 10), (4, 10)), (12, 12))
        # per-bin micro means vs the histogram's conditional means: the
        # histogram loses within-cell placement, worth at most one cell
        dist = micro_macro_distance(thetas, ratings, grid)
        assert dist <= grid.dr

    def test_zero_when_scatter_sits_on_cell_centers(self):
        grid = DensityGrid(((4, 10), (4, 10)), (6, 6))
        thetas = grid.theta_centers.copy()
        ratings = grid.r_centers.copy()
        lcol = np.arange(6)
        grid.values[lcol, lcol] = 1.0
        grid.normalize()
        assert micro_macro_distance(thetas, ratings, grid) == pytest.approx(0.0, abs=1e-12)

    def test_shifted_field_distance_one(self):
        # macro field deliberately shifted by +1 in r (= 2 cells)
        grid = DensityGrid(((4, 10), (4, 10)), (12, 12))
        thetas = grid.theta_centers.copy()
        ratings = grid.r_centers.copy()
        lcol = np.arange(12)
        shifted = np.clip(lcol + 2, 0, 11)
        grid.values[lcol, shifted] = 1.0
        grid.normalize()
        dist = micro_macro_distance(thetas[:-2], ratings[:-2], grid)
        assert dist == pytest.approx(1.0, abs=1e-12)

    def test_empty_overlap_rejected(self):
        grid = DensityGrid(((4, 10), (4, 10)), (6, 6))
        grid.values[0, 0] = 1.0
        grid.normalize()
        with pytest.raises(ValueError):
            micro_macro_distance([9.9], [5.0], grid)  # micro bin has no macro mass

    def test_rejects_3d(self):
        grid = DensityGrid.uniform(((0, 1), (0, 1), (0, 1)), (2, 2, 2))
        with pytest.raises(ValueError):
            micro_macro_distance([0.5], [0.5], grid)
