"""Shared exception types (CLI exit codes map onto these)."""

from __future__ import annotations

__all__ = ["ConfigError", "CflError"]


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class CflError(RuntimeError):
    """Explicit time step violates the CFL stability bound.

    Carries the offending velocity magnitude and the largest admissible
    step so callers can clip and retry.
    """

    def __init__(self, max_velocity: float, dt: float, dt_admissible: float):
        self.max_velocity = max_velocity
        self.dt = dt
        self.dt_admissible = dt_admissible
        super().__init__(
            f"CFL violation: dt={dt:.3e} with max |a|={max_velocity:.3e} "
            f"exceeds the stability bound; need dt <= {dt_admissible:.3e}"
        )
