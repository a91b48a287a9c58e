"""Stieltjes inversion: density and CDF curves on a real grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .canonical import CanonicalProblem

# Tiny negative densities are rounding noise; anything worse means the
# transform is off the Herglotz branch.
_NEGATIVE_DENSITY_TOL = 1e-12

# Minimum CDF mass required at the right grid edge.
MIN_RIGHT_EDGE_MASS = 0.97


@dataclass(frozen=True)
class SpectralCurve:
    """CDF and/or density values on an ascending real grid."""

    grid: np.ndarray
    cdf: np.ndarray | None = None
    density: np.ndarray | None = None
    epsilon: float = 0.0
    label: str = ""

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        object.__setattr__(self, "grid", grid)
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly ascending")
        if self.cdf is not None:
            cdf = np.asarray(self.cdf, dtype=float)
            object.__setattr__(self, "cdf", cdf)
            if cdf.shape != grid.shape:
                raise ValueError("cdf length must match grid")
            if np.any(np.diff(cdf) < -1e-9) or cdf.min() < -1e-9 or cdf.max() > 1 + 1e-9:
                raise ValueError("cdf must be nondecreasing within [0, 1]")
        if self.density is not None:
            dens = np.asarray(self.density, dtype=float)
            object.__setattr__(self, "density", dens)
            if dens.shape != grid.shape:
                raise ValueError("density length must match grid")
            if dens.min() < -_NEGATIVE_DENSITY_TOL:
                raise ValueError("density must be nonnegative")

    @property
    def spacing(self) -> float:
        return float(np.median(np.diff(self.grid)))


def default_epsilon(grid: np.ndarray) -> float:
    """Resolution-matched smoothing width: twice the grid spacing."""
    grid = np.asarray(grid, dtype=float)
    return 2.0 * float(np.median(np.diff(grid)))


def density_curve(stieltjes, grid, epsilon: float, label: str = "") -> SpectralCurve:
    """density(x) = (1/pi) Im S(x + i*epsilon) pointwise over the grid."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    grid = np.asarray(grid, dtype=float)
    dens = np.empty_like(grid)
    for k, x in enumerate(grid):
        try:
            s = stieltjes(complex(x, epsilon))
        except Exception as exc:
            raise RuntimeError(f"Stieltjes evaluation failed at x={x}: {exc}") from exc
        dens[k] = s.imag / np.pi
    if dens.min() < -_NEGATIVE_DENSITY_TOL:
        raise ValueError(
            f"negative density {dens.min():.3e}: transform is off the Herglotz branch"
        )
    np.clip(dens, 0.0, None, out=dens)
    return SpectralCurve(grid=grid, density=dens, epsilon=float(epsilon), label=label)


def cdf_from_density(curve: SpectralCurve) -> SpectralCurve:
    """Trapezoid-integrate a density curve into a clipped CDF curve."""
    cdf = cumulative_trapezoid(curve.density, curve.grid, initial=0.0)
    cdf = np.clip(cdf, 0.0, 1.0)
    if cdf[-1] < MIN_RIGHT_EDGE_MASS:
        raise ValueError(
            f"CDF reaches only {cdf[-1]:.4f} at the right grid edge; widen the "
            f"grid or decrease epsilon"
        )
    return SpectralCurve(grid=curve.grid, cdf=cdf, density=curve.density,
                         epsilon=curve.epsilon, label=curve.label)


def cdf_curve(stieltjes, grid, epsilon: float, label: str = "") -> SpectralCurve:
    """CDF by trapezoid integration of the smoothed density from the left edge."""
    return cdf_from_density(density_curve(stieltjes, grid, epsilon, label=label))


def auto_grid(problem: CanonicalProblem, points: int = 2000, margin: float = 0.1) -> np.ndarray:
    """Uniform grid covering all branch values with variance-scaled margins."""
    if points < 16:
        raise ValueError("grid needs at least 16 points")
    w = margin + 4.0 * np.sqrt(problem.variance_sum)
    lo = problem.branch_values.min() - w
    hi = problem.branch_values.max() + w
    return np.linspace(lo, hi, points)
