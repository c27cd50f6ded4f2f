"""Odd response functions mapping strength/rating gaps to expected outcomes.

The model is built around an odd, bounded, strictly increasing response
b(z) with |b| < 1; the canonical choice is b(z) = tanh(nu*z) with a
positive scaling constant nu.  Derivatives up to third order are needed:
the second derivative enters the variance correction of the expected
match outcome, and the third derivative controls whether the
variance-adjusted response

    g(z) = b(z) + sigma^2 * b''(z)

stays monotonically increasing, which is the smallness condition under
which ratings provably converge to strengths.

For tanh the closed forms are

    b'(z)   = nu * sech(nu z)^2
    b''(z)  = -2 nu^2 * tanh(nu z) * sech(nu z)^2
    b'''(z) = -2 nu^3 * sech(nu z)^2 * (sech(nu z)^2 - 2 tanh(nu z)^2)

and g is increasing iff 1 + nu^2 sigma^2 (4 - 6 sech(nu z)^2) > 0 for all z.
Other response functions can be supplied as plain callables; their
derivatives are then approximated by central finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ResponseFunction",
    "TanhResponse",
    "NumericalResponse",
    "MonotonicityReport",
    "check_effective_response_monotone",
    "SlopeBounds",
    "slope_bounds",
]


def _require_finite(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {value!r}")


class ResponseFunction:
    """Base interface: odd, bounded, increasing b with derivatives d1..d3.

    All evaluators accept scalars or ndarrays and broadcast like ufuncs.
    """

    def __call__(self, z):
        raise NotImplementedError

    def d1(self, z):
        raise NotImplementedError

    def d2(self, z):
        raise NotImplementedError

    def d3(self, z):
        raise NotImplementedError


class TanhResponse(ResponseFunction):
    """b(z) = tanh(nu*z) with analytic derivatives."""

    def __init__(self, nu: float):
        if not (math.isfinite(nu) and nu > 0):
            raise ValueError(f"nu must be a positive finite real, got {nu!r}")
        self.nu = float(nu)

    def __repr__(self):
        return f"TanhResponse(nu={self.nu!r})"

    def __call__(self, z):
        return np.tanh(self.nu * np.asarray(z, dtype=float))

    def d1(self, z):
        t = np.tanh(self.nu * np.asarray(z, dtype=float))
        return self.nu * (1.0 - t * t)

    def d2(self, z):
        t = np.tanh(self.nu * np.asarray(z, dtype=float))
        return -2.0 * self.nu**2 * t * (1.0 - t * t)

    def d3(self, z):
        t = np.tanh(self.nu * np.asarray(z, dtype=float))
        s2 = 1.0 - t * t  # sech^2
        return -2.0 * self.nu**3 * s2 * (s2 - 2.0 * t * t)


class NumericalResponse(ResponseFunction):
    """Wraps an arbitrary odd response; derivatives by central differences.

    The step is chosen per derivative order to balance truncation against
    cancellation in float64.
    """

    def __init__(self, func: Callable, h1: float = 1e-6, h2: float = 1e-4, h3: float = 1e-3):
        self.func = func
        self.h1, self.h2, self.h3 = h1, h2, h3

    def __call__(self, z):
        return np.asarray(self.func(np.asarray(z, dtype=float)), dtype=float)

    def d1(self, z):
        z = np.asarray(z, dtype=float)
        h = self.h1
        return (self(z + h) - self(z - h)) / (2.0 * h)

    def d2(self, z):
        z = np.asarray(z, dtype=float)
        h = self.h2
        return (self(z + h) - 2.0 * self(z) + self(z - h)) / (h * h)

    def d3(self, z):
        z = np.asarray(z, dtype=float)
        h = self.h3
        return (self(z + 2 * h) - 2.0 * self(z + h) + 2.0 * self(z - h) - self(z - 2 * h)) / (
            2.0 * h**3
        )


@dataclass(frozen=True)
class MonotonicityReport:
    """Outcome of the variance-adjusted monotonicity check."""

    holds: bool
    fails_at: float | None
    min_slope: float
    argmin: float


def check_effective_response_monotone(
    b: ResponseFunction,
    sigma: float,
    z_lo: float,
    z_hi: float,
    n_samples: int = 10_001,
) -> MonotonicityReport:
    """Check that g(z) = b(z) + sigma^2 b''(z) is increasing on [z_lo, z_hi].

    Samples g'(z) = b'(z) + sigma^2 b'''(z) on a uniform grid and reports
    the first violating z, if any.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma!r}")
    if not z_lo < z_hi:
        raise ValueError(f"need z_lo < z_hi, got [{z_lo!r}, {z_hi!r}]")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples!r}")
    z = np.linspace(z_lo, z_hi, n_samples)
    gprime = np.asarray(b.d1(z) + sigma**2 * b.d3(z))
    i_min = int(np.argmin(gprime))
    violations = np.flatnonzero(gprime < 0.0)
    if violations.size:
        first = float(z[violations[0]])
        return MonotonicityReport(False, first, float(gprime[i_min]), float(z[i_min]))
    return MonotonicityReport(True, None, float(gprime[i_min]), float(z[i_min]))


@dataclass(frozen=True)
class SlopeBounds:
    """Sup/inf slope constants of b and b'' over an interval.

    lip_b / lip_b2 are the Lipschitz constants (sup |b'|, sup |b'''|);
    min_b1 / min_b3 are the matching coercivity constants (inf b', inf b'''),
    used for guaranteed-decay-rate checks.
    """

    lip_b: float
    lip_b2: float
    min_b1: float
    min_b3: float


def slope_bounds(
    b: ResponseFunction, z_lo: float, z_hi: float, n_samples: int = 10_001
) -> SlopeBounds:
    """sup and inf of b' and b''' on a dense uniform grid over [z_lo, z_hi]."""
    if z_hi < z_lo:
        raise ValueError(f"need z_lo <= z_hi, got [{z_lo!r}, {z_hi!r}]")
    _require_finite("interval", (z_lo, z_hi))
    if z_hi == z_lo:
        z = np.array([z_lo])
    else:
        z = np.linspace(z_lo, z_hi, n_samples)
    d1 = np.asarray(b.d1(z))
    d3 = np.asarray(b.d3(z))
    return SlopeBounds(
        lip_b=float(np.max(np.abs(d1))),
        lip_b2=float(np.max(np.abs(d3))),
        min_b1=float(np.min(d1)),
        min_b3=float(np.min(d3)),
    )
