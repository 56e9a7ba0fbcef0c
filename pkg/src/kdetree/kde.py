"""One-dimensional Gaussian kernel density estimation.

The estimate at a point ``z`` is ``(1 / (n h)) * sum_i K((z - x_i) / h)``
with the Gaussian kernel ``K(y) = exp(-y^2 / 2) / sqrt(2 pi)``. The
bandwidth ``h`` follows Silverman's rule of thumb, with a fallback to the
plain standard-deviation form when the inter-quartile range is zero
(heavily concentrated samples):

    h = 0.9 * min(sigma, IQR / 1.34) * n ** (-1/5)    if IQR != 0
    h = 0.9 * sigma * n ** (-1/5)                     otherwise

``sigma`` is the sample standard deviation with divisor ``n - 1`` (defined
as 0 for a single observation); quartiles interpolate linearly at the
fractional positions ``p * (n - 1)`` over the sorted sample.

Mode structure is read off a dense evaluation grid: :func:`evaluate_grid`
samples the density at equally spaced points and :func:`find_extrema`
marks local maxima and minima, collapsing flat runs to their first index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class KdeModel:
    """Sorted sample plus its bandwidth. ``bandwidth == 0`` marks a
    degenerate (non-evaluable) model."""

    sample: np.ndarray
    bandwidth: float

    def __post_init__(self):
        sample = np.asarray(self.sample, dtype=float)
        sample.setflags(write=False)
        object.__setattr__(self, "sample", sample)

    @property
    def n(self) -> int:
        return self.sample.size


@dataclass(frozen=True)
class DensityGrid:
    """Density evaluated on a strictly increasing grid, with its extrema.

    ``mode_count`` is the number of local maxima (the ``k`` of a k-modal
    estimate); maxima and minima indices interleave.
    """

    points: np.ndarray
    densities: np.ndarray
    maxima_indices: np.ndarray
    minima_indices: np.ndarray
    mode_count: int


def silverman_bandwidth(sample) -> float:
    """Rule-of-thumb bandwidth for a 1-D sample (see module docstring).

    Returns 0 for constant samples and single observations; callers treat a
    zero bandwidth as "attribute not usable" rather than an error here.
    """
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise ValueError("cannot compute a bandwidth from an empty sample")
    n = x.size
    if n == 1 or x.min() == x.max():
        return 0.0  # exact, where np.std would leave float dust
    sigma = float(np.std(x, ddof=1))
    q1, q3 = np.quantile(x, [0.25, 0.75])
    iqr = float(q3 - q1)
    if iqr != 0.0:
        return 0.9 * min(sigma, iqr / 1.34) * n ** (-1 / 5)
    return 0.9 * sigma * n ** (-1 / 5)


def fit(sample) -> KdeModel:
    """Sort the sample and attach its Silverman bandwidth."""
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise ValueError("cannot fit a density on an empty sample")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    x = np.sort(x)
    return KdeModel(x, silverman_bandwidth(x))


def evaluate(model: KdeModel, z):
    """Density of `model` at `z` (scalar or array; shape is preserved)."""
    if model.bandwidth <= 0.0:
        raise ValueError("model has zero bandwidth and cannot be evaluated")
    h = model.bandwidth
    zs = np.asarray(z, dtype=float)
    u = (zs[..., None] - model.sample) / h
    dens = np.exp(-0.5 * u * u).sum(axis=-1) / (model.n * h * _SQRT_2PI)
    if zs.ndim == 0:
        return float(dens)
    return dens


def evaluate_grid(model: KdeModel, lo: float, hi: float, grid_points: int) -> DensityGrid:
    """Evaluate `model` on `grid_points` equally spaced points over [lo, hi]."""
    if model.bandwidth <= 0.0:
        raise ValueError("model has zero bandwidth and cannot be evaluated")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if grid_points < 16:
        raise ValueError(f"grid_points must be >= 16, got {grid_points}")
    points = np.linspace(lo, hi, grid_points)
    densities = evaluate(model, points)
    maxima, minima = find_extrema(densities)
    return DensityGrid(points, densities, maxima, minima, mode_count=len(maxima))


def find_extrema(densities) -> tuple[np.ndarray, np.ndarray]:
    """Indices of local maxima and minima of a sampled curve.

    An interior index is a maximum when the curve strictly rises into it and
    does not rise out of it (so a flat plateau registers once, at its first
    point); minima are symmetric. A boundary index counts only when it is
    strictly above (below) its single neighbour.
    """
    d = np.asarray(densities, dtype=float)
    g = d.size
    if g < 3:
        raise ValueError(f"need at least 3 grid points, got {g}")
    mid = d[1:-1]
    interior = np.arange(1, g - 1)
    maxima = interior[(mid > d[:-2]) & (mid >= d[2:])]
    minima = interior[(mid < d[:-2]) & (mid <= d[2:])]
    if d[0] > d[1]:
        maxima = np.concatenate(([0], maxima))
    elif d[0] < d[1]:
        minima = np.concatenate(([0], minima))
    if d[-1] > d[-2]:
        maxima = np.concatenate((maxima, [g - 1]))
    elif d[-1] < d[-2]:
        minima = np.concatenate((minima, [g - 1]))
    return maxima.astype(int), minima.astype(int)
