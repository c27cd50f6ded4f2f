"""Cell-centered density grids for the team-distribution transport solver.

A grid discretizes the team density f on (theta, r) or (theta, sigma, r)
with uniform cell-centered axes; the last axis is always the rating r,
the only direction with transport.  Values are densities (not masses):
the total mass is sum(values) * cell_volume.

A 2-D grid carries the constant per-match spread ``sigma_const`` that
enters the reduced drift kernel b(dtheta) + sigma^2 b''(dtheta) - b(dr).
"""

from __future__ import annotations

import numpy as np

__all__ = ["DensityGrid", "reduce_to_2d"]


def _centers(lo: float, hi: float, n: int) -> np.ndarray:
    delta = (hi - lo) / n
    return lo + delta * (np.arange(n) + 0.5)


class DensityGrid:
    """Nonnegative density on a uniform (theta[, sigma], r) grid."""

    def __init__(self, bounds, shape, values=None, sigma_const: float = 0.0):
        bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        shape = tuple(int(n) for n in shape)
        if len(bounds) != len(shape) or len(shape) not in (2, 3):
            raise ValueError("bounds/shape must describe 2 or 3 axes (theta[, sigma], r)")
        for (lo, hi), n in zip(bounds, shape):
            if not (hi > lo and n >= 1):
                raise ValueError(f"bad axis: bounds ({lo}, {hi}) with {n} cells")
        self.bounds = bounds
        self.shape = shape
        self.sigma_const = float(sigma_const)
        if values is None:
            self.values = np.zeros(shape)
        else:
            values = np.asarray(values, dtype=float)
            if values.shape != shape:
                raise ValueError(f"values shape {values.shape} != grid shape {shape}")
            self.values = values

    # -- construction helpers -------------------------------------------------

    @classmethod
    def uniform(cls, bounds, shape, sigma_const: float = 0.0) -> "DensityGrid":
        """Uniform density, normalized to unit mass."""
        grid = cls(bounds, shape, sigma_const=sigma_const)
        grid.values[...] = 1.0
        return grid.normalize()

    def copy(self, values=None) -> "DensityGrid":
        return DensityGrid(
            self.bounds,
            self.shape,
            self.values.copy() if values is None else values,
            sigma_const=self.sigma_const,
        )

    # -- geometry --------------------------------------------------------------

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def is_2d(self) -> bool:
        return self.ndim == 2

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.bounds, self.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.deltas))

    @property
    def dr(self) -> float:
        return self.deltas[-1]

    @property
    def theta_centers(self) -> np.ndarray:
        return _centers(*self.bounds[0], self.shape[0])

    @property
    def sigma_centers(self) -> np.ndarray:
        if self.is_2d:
            raise ValueError("2-D grid has no sigma axis")
        return _centers(*self.bounds[1], self.shape[1])

    @property
    def r_centers(self) -> np.ndarray:
        return _centers(*self.bounds[-1], self.shape[-1])

    @property
    def r_interfaces(self) -> np.ndarray:
        lo, hi = self.bounds[-1]
        return np.linspace(lo, hi, self.shape[-1] + 1)

    # -- measures ----------------------------------------------------------------

    def mass(self) -> float:
        return float(self.values.sum() * self.cell_volume)

    def normalize(self) -> "DensityGrid":
        """Scale values in place to unit mass; returns self."""
        total = self.mass()
        if total <= 0:
            raise ValueError("cannot normalize a grid with nonpositive mass")
        self.values /= total
        return self

    def boundary_r_mass(self) -> float:
        """Mass in the first and last r-cell layer (zero-flux sanity check)."""
        return float((self.values[..., 0].sum() + self.values[..., -1].sum()) * self.cell_volume)

    def l1_distance(self, other: "DensityGrid") -> float:
        if other.shape != self.shape or other.bounds != self.bounds:
            raise ValueError("grids must share geometry for an L1 distance")
        return float(np.abs(self.values - other.values).sum() * self.cell_volume)

    # -- marginals ----------------------------------------------------------------

    def r_marginal(self) -> tuple[np.ndarray, np.ndarray]:
        """(r centers, density) after integrating all other axes out."""
        other = tuple(range(self.ndim - 1))
        vol_other = np.prod([d for d in self.deltas[:-1]])
        return self.r_centers, self.values.sum(axis=other) * vol_other

    def theta_marginal(self) -> tuple[np.ndarray, np.ndarray]:
        other = tuple(range(1, self.ndim))
        vol_other = np.prod([d for d in self.deltas[1:]])
        return self.theta_centers, self.values.sum(axis=other) * vol_other

    def conditional_mean_r(self) -> tuple[np.ndarray, np.ndarray]:
        """(theta centers, E[r | theta]); NaN where the theta column is empty."""
        col_mass = self.values.sum(axis=1) if self.ndim == 3 else self.values
        weights = col_mass.sum(axis=-1)
        num = col_mass @ self.r_centers
        with np.errstate(invalid="ignore", divide="ignore"):
            mean = np.where(weights > 0, num / weights, np.nan)
        return self.theta_centers, mean


def reduce_to_2d(grid3d: DensityGrid, sigma_const: float) -> DensityGrid:
    """Integrate the sigma axis out and attach the constant-sigma kernel value.

    Mass is preserved exactly; the returned (theta, r) grid drives the
    reduced model whose drift uses sigma_const in place of the sigma
    integral.
    """
    if grid3d.is_2d:
        raise ValueError("grid is already 2-D")
    if sigma_const < 0:
        raise ValueError(f"sigma_const must be >= 0, got {sigma_const!r}")
    dsigma = grid3d.deltas[1]
    values = grid3d.values.sum(axis=1) * dsigma
    return DensityGrid(
        (grid3d.bounds[0], grid3d.bounds[2]),
        (grid3d.shape[0], grid3d.shape[2]),
        values,
        sigma_const=sigma_const,
    )
