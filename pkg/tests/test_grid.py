import numpy as np
import pytest

from teamelo.grid import DensityGrid, reduce_to_2d


class TestGeometry:
    def test_cell_centers_and_interfaces(self):
        grid = DensityGrid(((0, 10), (0, 1), (0, 10)), (5, 2, 4))
        assert np.allclose(grid.theta_centers, [1, 3, 5, 7, 9])
        assert np.allclose(grid.sigma_centers, [0.25, 0.75])
        assert np.allclose(grid.r_centers, [1.25, 3.75, 6.25, 8.75])
        assert np.allclose(grid.r_interfaces, [0, 2.5, 5, 7.5, 10])
        assert grid.cell_volume == pytest.approx(2.0 * 0.5 * 2.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            DensityGrid(((0, 1),), (4,))
        with pytest.raises(ValueError):
            DensityGrid(((1, 0), (0, 1)), (4, 4))
        with pytest.raises(ValueError):
            DensityGrid(((0, 1), (0, 1)), (4, 4), values=np.zeros((3, 3)))

    def test_2d_has_no_sigma_axis(self):
        grid = DensityGrid(((0, 1), (0, 1)), (2, 2))
        assert grid.is_2d
        with pytest.raises(ValueError):
            grid.sigma_centers


class TestMass:
    def test_uniform_normalized(self):
        grid = DensityGrid.uniform(((0, 10), (0, 1), (0, 10)), (40, 10, 40))
        assert grid.mass() == pytest.approx(1.0, abs=1e-12)
        assert np.all(grid.values >= 0)

    def test_normalize_rejects_empty(self):
        grid = DensityGrid(((0, 1), (0, 1)), (3, 3))
        with pytest.raises(ValueError):
            grid.normalize()

    def test_l1_distance_requires_same_geometry(self):
        a = DensityGrid.uniform(((0, 1), (0, 1)), (4, 4))
        b = DensityGrid.uniform(((0, 1), (0, 1)), (5, 5))
        with pytest.raises(ValueError):
            a.l1_distance(b)
        assert a.l1_distance(a.copy()) == 0.0

    def test_boundary_mass(self):
        grid = DensityGrid(((0, 1), (0, 1)), (2, 4))
        grid.values[:, 0] = 1.0
        expected = 2 * (0.5 * 0.25)
        assert grid.boundary_r_mass() == pytest.approx(expected)


class TestMarginals:
    def test_marginals_integrate_to_mass(self, rng):
        grid = DensityGrid(((0, 10), (0, 1), (0, 10)), (6, 3, 8), rng.random((6, 3, 8)))
        r, r_density = grid.r_marginal()
        th, th_density = grid.theta_marginal()
        assert r_density.sum() * grid.dr == pytest.approx(grid.mass(), rel=1e-12)
        assert th_density.sum() * grid.deltas[0] == pytest.approx(grid.mass(), rel=1e-12)

    def test_conditional_mean_r(self):
        grid = DensityGrid(((0, 2), (0, 2)), (2, 2))
        grid.values[0, 0] = 1.0  # theta cell 0 concentrated at r = 0.5
        grid.values[1, 1] = 1.0  # theta cell 1 concentrated at r = 1.5
        _, mean_r = grid.conditional_mean_r()
        assert np.allclose(mean_r, [0.5, 1.5])

    def test_conditional_mean_r_empty_column_is_nan(self):
        grid = DensityGrid(((0, 2), (0, 2)), (2, 2))
        grid.values[0, 0] = 1.0
        _, mean_r = grid.conditional_mean_r()
        assert np.isnan(mean_r[1])


class TestReduceTo2d:
    def test_mass_preserved(self, rng):
        grid = DensityGrid(((0, 10), (0, 1), (0, 10)), (5, 4, 6), rng.random((5, 4, 6)))
        flat = reduce_to_2d(grid, 0.5)
        assert flat.mass() == pytest.approx(grid.mass(), rel=1e-14)
        assert flat.sigma_const == 0.5
        assert flat.shape == (5, 6)

    def test_rejects_2d_input_and_bad_sigma(self):
        grid = DensityGrid(((0, 1), (0, 1)), (2, 2))
        with pytest.raises(ValueError):
            reduce_to_2d(grid, 0.5)
        grid3 = DensityGrid(((0, 1), (0, 1), (0, 1)), (2, 2, 2))
        with pytest.raises(ValueError):
            reduce_to_2d(grid3, -1.0)

    def test_sigma_zero_reduction_drops_correction(self):
        # with sigma_const = 0 the reduced drift has no b'' term at all
        from teamelo.kernels import AllPlayAll
        from teamelo.macro import velocity_at
        from teamelo.response import TanhResponse

        grid = DensityGrid(((-0.5, 1.5), (-0.5, 0.5)), (2, 1), sigma_const=0.0)
        grid.values[:, 0] = [0.5, 0.5]
        grid.normalize()
        b = TanhResponse(1.0)
        got = velocity_at(grid, b, AllPlayAll(), theta=0.0, r=0.0)
        # plain drift: 0.5 [b(0) - b(0)] + 0.5 [b(-1) - b(0)] = 0.5 b(-1)
        assert got == pytest.approx(0.5 * float(b(-1.0)), abs=1e-14)
