"""Two-engine simulator of team Elo dynamics with fluctuating strength.

An agent-based match simulator (teamelo.micro) and a nonlocal-transport
finite-difference solver (teamelo.macro) share the same mathematical
primitives (teamelo.response / outcomes / teams); teamelo.analysis
verifies conservation, decay and convergence properties, and
teamelo.cli runs named desk-scale experiment presets.
"""

from ._kernels import BACKEND, available_backends
from .analysis import (
    EnergySeries,
    MomentReport,
    check_energy_decay,
    compression_metric,
    compute_moments,
    micro_macro_distance,
    regression_slope,
    relative_energy,
)
from .grid import DensityGrid, reduce_to_2d
from .kernels import AllPlayAll, IndicatorKernel, SmoothBump, kernel_from_spec
from .macro import MacroConfig, assemble_velocity, godunov_step, run_macro, velocity_at
from .micro import (
    LineupMode,
    MicroConfig,
    effective_macro_time,
    run_micro,
    run_micro_gaussian,
)
from .outcomes import (
    exact_expected_outcome,
    rating_update,
    sample_outcome,
    taylor_expected_outcome,
    taylor_outcome_variance,
    win_probability,
)
from .population import (
    Population,
    build_gaussian_population,
    build_setup_r1,
    build_setup_r2,
)
from .response import (
    NumericalResponse,
    TanhResponse,
    check_effective_response_monotone,
    slope_bounds,
)
from .teams import (
    EnumerationTooLargeError,
    GaussianStrength,
    TeamRoster,
    TeamState,
    estimate_team_moments,
)

__version__ = "0.1.0"
