"""Independent reference implementations used to freeze expected values.

Everything here is deliberately written against different machinery than
the package (mpmath arithmetic, itertools enumeration, explicit ODE
stepping) so the tests never compare an implementation against itself.
"""

from __future__ import annotations

from itertools import combinations

import mpmath as mp
import numpy as np


def tanh_ref(z, nu=1.0, dps=40):
    """High-precision tanh(nu z) via mpmath."""
    with mp.workdps(dps):
        return float(mp.tanh(mp.mpf(nu) * mp.mpf(z)))


def fd_derivative(z, order, nu=1.0, h=1e-5, dps=50):
    """Central finite differences of tanh(nu z) in high-precision arithmetic.

    At step h = 1e-5 the truncation error is ~1e-10 relative while the
    mpmath evaluation removes the float64 cancellation, so the result is
    good to far better than 1e-6 for orders 1..3.
    """
    with mp.workdps(dps):
        nu_mp, z_mp, h_mp = mp.mpf(nu), mp.mpf(z), mp.mpf(h)

        def f(x):
            return mp.tanh(nu_mp * x)

        if order == 1:
            val = (f(z_mp + h_mp) - f(z_mp - h_mp)) / (2 * h_mp)
        elif order == 2:
            val = (f(z_mp + h_mp) - 2 * f(z_mp) + f(z_mp - h_mp)) / h_mp**2
        elif order == 3:
            val = (
                f(z_mp + 2 * h_mp) - 2 * f(z_mp + h_mp) + 2 * f(z_mp - h_mp) - f(z_mp - 2 * h_mp)
            ) / (2 * h_mp**3)
        else:
            raise ValueError(order)
        return float(val)


def enumerate_expected_outcome(strengths_i, m_i, strengths_j, m_j, nu=1.0):
    """Brute-force <s>: explicit double loop over all line-up pairs."""
    import math

    total = 0.0
    count = 0
    for combo_i in combinations(strengths_i, m_i):
        xi = sum(combo_i)
        for combo_j in combinations(strengths_j, m_j):
            total += math.tanh(nu * (xi - sum(combo_j)))
            count += 1
    return total / count


def enumerate_lineup_stats(strengths, m):
    """(mean, std) of the line-up strength by explicit enumeration."""
    sums = [sum(c) for c in combinations(strengths, m)]
    arr = np.asarray(sums, dtype=float)
    return float(arr.mean()), float(arr.std())


def ode_rating_gap(delta_theta, gamma, nu, n_matches, substeps=20):
    """Integrate d(gap)/dn = 2 gamma (tanh(nu dtheta) - tanh(nu gap)) by RK4.

    Returns the rating gap after n_matches pair matches, starting from 0.
    """
    import math

    target = math.tanh(nu * delta_theta)

    def rhs(gap):
        return 2.0 * gamma * (target - math.tanh(nu * gap))

    gap = 0.0
    h = 1.0 / substeps
    for _ in range(n_matches * substeps):
        k1 = rhs(gap)
        k2 = rhs(gap + 0.5 * h * k1)
        k3 = rhs(gap + 0.5 * h * k2)
        k4 = rhs(gap + h * k3)
        gap += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return gap


def pascal_binomial(n, k):
    """C(n, k) from an explicitly built Pascal triangle."""
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[k]


def energy_decay_oracle(e0, rate, times):
    """Closed-form solution of E' = -rate * E (the guaranteed envelope)."""
    return e0 * np.exp(-rate * np.asarray(times))
