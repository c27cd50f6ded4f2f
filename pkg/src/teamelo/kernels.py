"""Pairing-rate kernels: even, nonnegative weights on the rating gap.

The kernel w(r - r') sets the rate at which two teams are paired for a
match.  Three variants are supported:

* all-play-all:  w == 1 (every candidate pairing is played),
* indicator:     w = 1 if |r - r'| <= c else 0 (only close ratings compete),
* smooth bump:   w = exp(log(2) / (1 + (r - r')^2)) - 1, a strictly
                 positive mollified version of the indicator.

All variants have w_max = w(0) = 1, which the micro engine uses for
acceptance-rejection pairing.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError

__all__ = [
    "InteractionKernel",
    "AllPlayAll",
    "IndicatorKernel",
    "SmoothBump",
    "kernel_from_spec",
]


class InteractionKernel:
    """Even nonnegative weight w on rating gaps, with known sup w."""

    #: identifier used by the compiled micro kernel and the CLI
    kind: str = ""

    def __call__(self, x):
        raise NotImplementedError

    @property
    def w_max(self) -> float:
        raise NotImplementedError

    def min_over(self, lo: float, hi: float, n_samples: int = 10_001) -> float:
        """inf of w over gap values in [lo, hi] (dense grid)."""
        x = np.linspace(lo, hi, n_samples)
        return float(np.min(self(x)))

    def spec(self) -> str:
        """Round-trippable text form (see kernel_from_spec)."""
        return self.kind


class AllPlayAll(InteractionKernel):
    """w == 1: every drawn pair plays."""

    kind = "all"

    def __call__(self, x):
        return np.ones_like(np.asarray(x, dtype=float))

    @property
    def w_max(self) -> float:
        return 1.0

    def min_over(self, lo, hi, n_samples=10_001):
        return 1.0

    def __repr__(self):
        return "AllPlayAll()"


class IndicatorKernel(InteractionKernel):
    """w = 1 on |x| <= c, else 0: only teams within rating distance c play."""

    kind = "indicator"

    def __init__(self, c: float):
        if not (math.isfinite(c) and c > 0):
            raise ValueError(f"rating distance c must be positive, got {c!r}")
        self.c = float(c)

    def __call__(self, x):
        return (np.abs(np.asarray(x, dtype=float)) <= self.c).astype(float)

    @property
    def w_max(self) -> float:
        return 1.0

    def spec(self) -> str:
        return f"indicator:{self.c!r}"

    def __repr__(self):
        return f"IndicatorKernel(c={self.c!r})"


class SmoothBump(InteractionKernel):
    """w(x) = exp(log2 / (1 + x^2)) - 1, smooth, positive, w(0) = 1."""

    kind = "bump"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(math.log(2.0) / (1.0 + x * x)) - 1.0

    @property
    def w_max(self) -> float:
        return 1.0

    def __repr__(self):
        return "SmoothBump()"


def kernel_from_spec(text: str) -> InteractionKernel:
    """Parse ``all``, ``indicator:<c>`` or ``bump`` into a kernel."""
    text = text.strip()
    if text == "all":
        return AllPlayAll()
    if text == "bump":
        return SmoothBump()
    if text.startswith("indicator:"):
        try:
            c = float(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad indicator distance in kernel spec {text!r}") from None
        return IndicatorKernel(c)
    raise ConfigError(f"unknown kernel spec {text!r}; expected all|indicator:<c>|bump")
