"""Match outcome statistics and the rating update rule.

A match between teams i and j produces s in {-1, +1}.  Its expectation
given the per-match strengths x_i, x_j is b(x_i - x_j), realized here by

    P(s = +1) = (1 + b(x_i - x_j)) / 2

so that <s> = b holds exactly.  Ratings then move by

    r_i* = r_i + gamma * (s - b(r_i - r_j))
    r_j* = r_j + gamma * (-s - b(r_j - r_i))

which conserves r_i + r_j exactly (b is odd).

Averaging over random line-ups, the exact expected outcome is the double
sum of b over both teams' line-up sets; for large rosters the
second-order Taylor expansion in the strength fluctuations gives

    <s>      ~ b(ti - tj) + 1/2 * b''(ti - tj) * (si^2 + sj^2)
    Var[s]   ~ b'(ti - tj)^2 * (si^2 + sj^2)

in terms of the team means t and spreads s.
"""

from __future__ import annotations

import math

import numpy as np

from .response import ResponseFunction
from .teams import EnumerationTooLargeError, TeamRoster, TeamState, lineup_strengths

__all__ = [
    "rating_update",
    "win_probability",
    "sample_outcome",
    "exact_expected_outcome",
    "taylor_expected_outcome",
    "taylor_outcome_variance",
    "PAIR_ENUMERATION_CAP",
]

#: default ceiling on enumerated line-up *pairs* in exact_expected_outcome
PAIR_ENUMERATION_CAP = 1_000_000


def rating_update(
    ri: float, rj: float, s: int, gamma: float, b: ResponseFunction
) -> tuple[float, float]:
    """Post-match ratings (ri*, rj*); the pair sum is conserved exactly."""
    if not (math.isfinite(ri) and math.isfinite(rj) and math.isfinite(gamma)):
        raise ValueError(f"ratings and gamma must be finite, got {ri!r}, {rj!r}, {gamma!r}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    if s not in (-1, 1):
        raise ValueError(f"outcome must be -1 or +1, got {s!r}")
    delta = gamma * (s - float(b(ri - rj)))
    return ri + delta, rj - delta


def win_probability(b: ResponseFunction, delta: float):
    """P(s = +1) for a strength gap delta, i.e. (1 + b(delta)) / 2."""
    return 0.5 * (1.0 + b(delta))


def sample_outcome(pwin, rng: np.random.Generator):
    """Draw s = +1 with probability pwin, else -1.

    Accepts a scalar (returns int) or an array of probabilities (returns
    an int array of the same shape).
    """
    p = np.asarray(pwin, dtype=float)
    if np.any(p < 0.0) or np.any(p > 1.0) or not np.all(np.isfinite(p)):
        raise ValueError(f"pwin must lie in [0, 1], got {pwin!r}")
    u = rng.random(p.shape)
    s = np.where(u < p, 1, -1)
    if np.isscalar(pwin) or p.shape == ():
        return int(s)
    return s


def exact_expected_outcome(
    roster_i: TeamRoster,
    roster_j: TeamRoster,
    b: ResponseFunction,
    pair_cap: int = PAIR_ENUMERATION_CAP,
) -> float:
    """<s> by full enumeration of both teams' line-up sets.

    Line-ups are independent and uniform, so <s> is the mean of
    b(x_i - x_j) over all C(M_i, m_i) * C(M_j, m_j) pairs.  Raises
    EnumerationTooLargeError when the pair count exceeds pair_cap.
    """
    ci, cj = roster_i.lineup_count, roster_j.lineup_count
    if ci * cj > pair_cap:
        raise EnumerationTooLargeError(
            f"{ci} x {cj} line-up pairs exceed the enumeration cap {pair_cap}; "
            "use taylor_expected_outcome instead"
        )
    xi = lineup_strengths(roster_i, cap=pair_cap)
    xj = lineup_strengths(roster_j, cap=pair_cap)
    return float(np.mean(b(xi[:, None] - xj[None, :])))


def taylor_expected_outcome(ti: TeamState, tj: TeamState, b: ResponseFunction) -> float:
    """Second-order approximation b(dt) + 1/2 b''(dt) (si^2 + sj^2)."""
    dt = ti.theta - tj.theta
    return float(b(dt)) + 0.5 * float(b.d2(dt)) * (ti.sigma**2 + tj.sigma**2)


def taylor_outcome_variance(ti: TeamState, tj: TeamState, b: ResponseFunction) -> float:
    """Second-order outcome variance b'(dt)^2 (si^2 + sj^2)."""
    dt = ti.theta - tj.theta
    return float(b.d1(dt)) ** 2 * (ti.sigma**2 + tj.sigma**2)
