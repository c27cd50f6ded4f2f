"""Agent-based Elo dynamics via direct Monte Carlo (Bird-scheme) sampling.

Each time step draws a fixed number of candidate pairs uniformly at
random (no self-pairing); a candidate pair (i, j) actually plays with
probability w(R_i - R_j) / w_max (acceptance-rejection, so the pairing
rate realizes the interaction kernel w).  A played match samples both
teams' per-match strengths, draws the outcome s = +-1 with
P(+1) = (1 + b(x_i - x_j))/2, and applies the rating update with speed
gamma.  Rejected candidates consume the draw, so "matches per step"
counts candidate draws.

Realizations run on independent RNG streams spawned from the base seed
and may execute in parallel; results are reduced in realization order,
so output is independent of thread count.

The hot loop lives in a compiled kernel (pure-Python fallback selected
at import, see teamelo._kernels); both backends consume the pre-drawn
random arrays identically and give bit-identical trajectories.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import ConfigError
from .kernels import AllPlayAll, InteractionKernel
from .population import Population, build_gaussian_population
from .teams import GaussianStrength, TeamRoster

__all__ = [
    "LineupMode",
    "MicroConfig",
    "TrajectoryRecord",
    "MicroResult",
    "run_micro",
    "run_micro_gaussian",
    "effective_macro_time",
]

_MAX_CHUNK_STEPS = 1024

_KERNEL_KIND = {"all": 0, "indicator": 1, "bump": 2}


class LineupMode:
    """How a team's per-match strength is produced for roster teams."""

    UNIFORM_SUBSET = "uniform-subset"
    STRENGTH_PROPORTIONAL = "strength-proportional"
    GAUSSIAN_DRAW = "gaussian-draw"

    ALL = (UNIFORM_SUBSET, STRENGTH_PROPORTIONAL, GAUSSIAN_DRAW)


@dataclass(frozen=True)
class MicroConfig:
    """Parameters of a micro run (defaults follow the reference setups)."""

    n_steps: int
    gamma: float
    nu: float
    n_teams: int | None = None
    dt: float = 0.1
    matches_per_step: int = 25
    realizations: int = 50
    kernel: InteractionKernel = field(default_factory=AllPlayAll)
    lineup_mode: str = LineupMode.UNIFORM_SUBSET
    seed: int = 0
    snapshot_stride: int = 0  # 0: record only the initial and final state

    def __post_init__(self):
        if self.n_steps < 1:
            raise ConfigError(f"n_steps must be >= 1, got {self.n_steps!r}")
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma!r}")
        if self.nu <= 0:
            raise ConfigError(f"nu must be positive, got {self.nu!r}")
        if self.matches_per_step < 1:
            raise ConfigError(f"matches_per_step must be >= 1, got {self.matches_per_step!r}")
        if self.realizations < 1:
            raise ConfigError(f"realizations must be >= 1, got {self.realizations!r}")
        if self.lineup_mode not in LineupMode.ALL:
            raise ConfigError(f"unknown lineup_mode {self.lineup_mode!r}")
        if self.snapshot_stride < 0:
            raise ConfigError(f"snapshot_stride must be >= 0, got {self.snapshot_stride!r}")


@dataclass(frozen=True)
class TrajectoryRecord:
    """Per-team snapshot of one realization at one time."""

    realization: int
    time: float
    theta: np.ndarray
    sigma_est: np.ndarray
    rating: np.ndarray


class MicroResult:
    """Trajectories plus the realization-averaged terminal scatter."""

    def __init__(self, pop: Population, cfg: MicroConfig, times, trajectories):
        self.pop = pop
        self.cfg = cfg
        self.times = times  # (n_snaps,)
        self.trajectories = trajectories  # (realizations, n_snaps, n_teams)
        terminal = trajectories[:, -1, :]
        self.rating_mean = terminal.mean(axis=0)
        self.rating_std = terminal.std(axis=0)

    @property
    def thetas(self):
        return self.pop.thetas

    @property
    def sigmas(self):
        return self.pop.sigmas

    def records(self):
        """Iterate TrajectoryRecord per (realization, snapshot)."""
        for k in range(self.trajectories.shape[0]):
            for t_idx, t in enumerate(self.times):
                yield TrajectoryRecord(
                    realization=k,
                    time=float(t),
                    theta=self.pop.thetas,
                    sigma_est=self.pop.sigmas,
                    rating=self.trajectories[k, t_idx],
                )

    def mean_ratings_over_time(self):
        """(n_snaps, n_teams) realization-averaged rating trajectories."""
        return self.trajectories.mean(axis=0)


class _PopulationArrays:
    """Flat, kernel-ready view of a population under a line-up mode."""

    def __init__(self, pop: Population, lineup_mode: str):
        n = pop.n_teams
        kinds = np.zeros(n, dtype=np.int32)
        det_x = np.zeros(n)
        thetas = np.zeros(n)
        sigmas = np.zeros(n)
        flat = []
        offsets = np.zeros(n + 1, dtype=np.int64)
        lineup_size = 0
        for t, member in enumerate(pop.members):
            offsets[t + 1] = offsets[t]
            if isinstance(member, GaussianStrength):
                if member.sigma == 0.0:
                    kinds[t] = 0
                    det_x[t] = member.theta
                else:
                    kinds[t] = 1
                    thetas[t] = member.theta
                    sigmas[t] = member.sigma
            elif isinstance(member, TeamRoster):
                if lineup_mode == LineupMode.GAUSSIAN_DRAW:
                    raise ConfigError(
                        "lineup_mode gaussian-draw requires Gaussian-strength teams; "
                        f"team {t} is a roster"
                    )
                if member.lineup_size == member.n_players:
                    kinds[t] = 0
                    det_x[t] = float(member.strengths.sum())
                else:
                    kinds[t] = 2 if lineup_mode == LineupMode.UNIFORM_SUBSET else 3
                    if kinds[t] == 3 and np.any(member.strengths <= 0.0):
                        raise ConfigError(
                            "strength-proportional line-ups need strictly positive "
                            f"player strengths (team {t})"
                        )
                    if lineup_size and member.lineup_size != lineup_size:
                        raise ConfigError("all rosters must share one line-up size")
                    lineup_size = member.lineup_size
                    flat.append(member.strengths)
                    offsets[t + 1] = offsets[t] + member.n_players
            else:
                raise ConfigError(f"unsupported team type {type(member).__name__}")
        self.kinds = kinds
        self.det_x = det_x
        self.thetas = thetas
        self.sigmas = sigmas
        self.strengths_flat = np.concatenate(flat) if flat else np.zeros(0)
        self.offsets = offsets
        self.lineup_size = lineup_size
        self.max_roster = max((m.n_players for m in pop.members if isinstance(m, TeamRoster)), default=0)
        self.has_roster = bool(lineup_size)
        self.has_gauss = bool(np.any(kinds == 1))


def _snapshot_steps(n_steps: int, stride: int):
    """Step indices at which to record, always including 0 and n_steps."""
    if stride <= 0:
        return [0, n_steps]
    steps = list(range(0, n_steps, stride)) + [n_steps]
    return sorted(set(steps))


def _run_realization(arrays, cfg, kernel_kind, kernel_c, w_max, ratings0, seed_seq, run_chunk):
    # Random numbers are drawn in fixed-size step blocks independent of the
    # snapshot stride, so the realized trajectory depends only on the seed
    # and the physical parameters, never on recording choices.
    rng = np.random.default_rng(seed_seq)
    ratings = ratings0.copy()
    snap_steps = _snapshot_steps(cfg.n_steps, cfg.snapshot_stride)
    snaps = np.empty((len(snap_steps), ratings.size))
    snaps[0] = ratings
    scratch = np.zeros(max(arrays.max_roster, 1))
    m = max(arrays.lineup_size, 1)
    empty2 = np.zeros((0, 2))
    snap_idx = 1
    mps = cfg.matches_per_step
    for block_start in range(0, cfg.n_steps, _MAX_CHUNK_STEPS):
        block_steps = min(_MAX_CHUNK_STEPS, cfg.n_steps - block_start)
        n_cand = block_steps * mps
        u_pair = rng.random((n_cand, 2))
        u_accept = rng.random(n_cand)
        u_out = rng.random(n_cand)
        u_lineup = rng.random((n_cand, 2 * m)) if arrays.has_roster else empty2
        z_gauss = rng.standard_normal((n_cand, 2)) if arrays.has_gauss else empty2
        pos = 0
        while pos < block_steps:
            sub = min(block_steps, snap_steps[snap_idx] - block_start) - pos
            lo, hi = pos * mps, (pos + sub) * mps
            run_chunk(
                ratings,
                arrays.kinds,
                arrays.det_x,
                arrays.thetas,
                arrays.sigmas,
                arrays.strengths_flat,
                arrays.offsets,
                m,
                cfg.gamma,
                cfg.nu,
                kernel_kind,
                kernel_c,
                w_max,
                u_pair[lo:hi],
                u_accept[lo:hi],
                u_out[lo:hi],
                u_lineup[lo:hi] if arrays.has_roster else empty2,
                z_gauss[lo:hi] if arrays.has_gauss else empty2,
                scratch,
            )
            pos += sub
            if block_start + pos == snap_steps[snap_idx]:
                snaps[snap_idx] = ratings
                snap_idx += 1
    return snaps


def run_micro(
    pop: Population, cfg: MicroConfig, threads: int = 1, backend: str | None = None
) -> MicroResult:
    """Run all realizations of the Bird-scheme dynamics on a population."""
    if pop.n_teams < 2:
        raise ConfigError("need at least two teams to pair matches")
    if cfg.n_teams is not None and cfg.n_teams != pop.n_teams:
        raise ConfigError(
            f"config says n_teams={cfg.n_teams} but the population has {pop.n_teams}"
        )
    kernel_kind = _KERNEL_KIND.get(cfg.kernel.kind)
    if kernel_kind is None:
        raise ConfigError(f"kernel {cfg.kernel!r} is not supported by the micro engine")
    w_max = cfg.kernel.w_max
    if not w_max > 0:
        raise ConfigError(f"kernel with w_max = {w_max!r} cannot pair any matches")
    kernel_c = getattr(cfg.kernel, "c", 0.0)
    arrays = _PopulationArrays(pop, cfg.lineup_mode)
    run_chunk = _kernels.get_kernel(backend) if backend else _kernels.run_match_chunk

    seed_seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.realizations)
    ratings0 = np.asarray(pop.ratings, dtype=float)

    def job(k):
        return _run_realization(
            arrays, cfg, kernel_kind, kernel_c, w_max, ratings0, seed_seqs[k], run_chunk
        )

    if threads > 1 and cfg.realizations > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            all_snaps = list(pool.map(job, range(cfg.realizations)))
    else:
        all_snaps = [job(k) for k in range(cfg.realizations)]

    snap_steps = _snapshot_steps(cfg.n_steps, cfg.snapshot_stride)
    times = np.asarray(snap_steps, dtype=float) * cfg.dt
    return MicroResult(pop, cfg, times, np.stack(all_snaps))


def run_micro_gaussian(
    cfg: MicroConfig,
    thetas,
    sigma: float,
    initial_rating: float | None = None,
    threads: int = 1,
    backend: str | None = None,
) -> MicroResult:
    """Micro run where per-match strengths are drawn N(theta_n, sigma^2)."""
    pop = build_gaussian_population(thetas, sigma, initial_rating=initial_rating)
    if cfg.lineup_mode != LineupMode.GAUSSIAN_DRAW:
        cfg = replace(cfg, lineup_mode=LineupMode.GAUSSIAN_DRAW)
    return run_micro(pop, cfg, threads=threads, backend=backend)


def effective_macro_time(cfg: MicroConfig, n_teams: int) -> float:
    """Macroscopic time spanned by a micro run.

    Each candidate draw advances the mean-field clock by
    2 * gamma / (N * w_max): a given team is in the drawn pair with
    probability 2/N and its expected rating drift per played candidate is
    gamma * (w/w_max) * (<S> - b), matching dr/dt = a[f] integrated
    against a unit-mass density.
    """
    return 2.0 * cfg.gamma * cfg.matches_per_step * cfg.n_steps / (n_teams * cfg.kernel.w_max)
