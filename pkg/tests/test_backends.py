"""Cross-backend equivalence: the compiled and pure-Python match loops
must produce bit-identical trajectories for every team kind and kernel."""

import numpy as np
import pytest

from teamelo import _kernels
from teamelo.kernels import AllPlayAll, IndicatorKernel, SmoothBump
from teamelo.micro import LineupMode, MicroConfig, run_micro
from teamelo.population import Population, build_gaussian_population, build_setup_r2
from teamelo.teams import TeamRoster

needs_cython = pytest.mark.skipif(
    "cython" not in _kernels.available_backends(), reason="compiled kernel not built"
)


def cfg(**kw):
    base = dict(n_steps=500, gamma=0.02, nu=0.8, matches_per_step=25, realizations=2, seed=13,
                snapshot_stride=100)
    base.update(kw)
    return MicroConfig(**base)


def both(pop, config):
    py = run_micro(pop, config, backend="python")
    cy = run_micro(pop, config, backend="cython")
    return py.trajectories, cy.trajectories


@needs_cython
class TestBitwiseEquivalence:
    def test_uniform_subset_rosters(self):
        pop = build_setup_r2(12, seed=3)  # rosters + gaussian outliers mixed
        a, b = both(pop, cfg())
        assert np.array_equal(a, b)

    def test_strength_proportional(self):
        pop = Population([TeamRoster(np.linspace(1, 3, 6), 3) for _ in range(8)])
        a, b = both(pop, cfg(lineup_mode=LineupMode.STRENGTH_PROPORTIONAL))
        assert np.array_equal(a, b)

    def test_gaussian_draw(self):
        pop = build_gaussian_population(np.linspace(4, 10, 10), 1.5)
        a, b = both(pop, cfg(lineup_mode=LineupMode.GAUSSIAN_DRAW))
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("kernel", [AllPlayAll(), IndicatorKernel(1.0), SmoothBump()])
    def test_all_kernels(self, kernel):
        pop = build_gaussian_population(np.linspace(4, 10, 10), 0.5)
        a, b = both(pop, cfg(kernel=kernel, lineup_mode=LineupMode.GAUSSIAN_DRAW))
        assert np.array_equal(a, b)


@needs_cython
def test_compiled_kernel_is_faster_smoke():
    # not a benchmark (see benchmarks/), just a sanity ratio on a real load
    import time

    pop = build_gaussian_population(np.linspace(4, 10, 50), 1.0)
    config = cfg(n_steps=4000, realizations=1, snapshot_stride=0)

    def clock(backend):
        start = time.perf_counter()
        run_micro(pop, config, backend=backend)
        return time.perf_counter() - start

    t_cy = clock("cython")
    t_py = clock("python")
    assert t_cy < t_py  # compiled path must not be slower


def test_backend_selection_api():
    assert _kernels.BACKEND in ("cython", "python")
    assert "python" in _kernels.available_backends()
    with pytest.raises(ValueError):
        _kernels.get_kernel("fortran")
