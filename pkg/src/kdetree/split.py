"""Interval splitting of one attribute at one tree node.

Candidate target intervals come out of a four-step pipeline over the
attribute's density estimate:

(a) *clip*: threshold the density at ``gamma * max`` and keep the maximal
    grid runs above the threshold;
(b) *revise*: when the estimate has more modes than surviving intervals,
    cut intervals at significant interior minima -- a minimum is
    significant when its density is at most ``alpha`` times the lower of
    its two flanking maxima;
(c) *assess*: drop intervals supported by fewer training values than the
    floor ``max(ceil(beta * n_root), min_leaf)`` (no floor when beta is 0);
(d) *shrink*: tighten every interval to the exact [min, max] of the
    training values it contains, discarding empty ones.

Candidates are scored with a Gini-style impurity proxy that pretends each
node carries as many uniformly spread virtual outliers as it has target
instances: an interval of width ``w`` inside a node range of width ``W``
receives ``n' = n_t * w / W`` virtual outliers and contributes
``n_i * n' / (n_i + n')``. Lower totals indicate purer children.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kde


@dataclass(frozen=True)
class Interval:
    """Closed interval [low, high] in attribute units."""

    low: float
    high: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise ValueError(f"interval bounds must be finite: [{self.low}, {self.high}]")
        if self.low > self.high:
            raise ValueError(f"interval low > high: [{self.low}, {self.high}]")

    @property
    def width(self) -> float:
        return self.high - self.low

    def contains(self, value: float) -> bool:
        return self.low <= value <= self.high


@dataclass(frozen=True)
class SplitParams:
    """Knobs of the splitting pipeline plus node-support bookkeeping.

    ``n_root`` is the size of the full training set (the support floor is
    relative to it, not to the current node).
    """

    gamma: float
    alpha: float
    beta: float
    n_root: int
    min_leaf: int = 5
    grid_points: int = 512

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0 <= self.beta < 1:
            raise ValueError(f"beta must be in [0, 1), got {self.beta}")
        if self.n_root < 1:
            raise ValueError(f"n_root must be >= 1, got {self.n_root}")
        if self.min_leaf < 1:
            raise ValueError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.grid_points < 16:
            raise ValueError(f"grid_points must be >= 16, got {self.grid_points}")


@dataclass(frozen=True)
class SplitCandidate:
    """Scored outcome of the pipeline for one attribute at one node.

    ``target_intervals`` are disjoint and sorted; ``counts`` are the
    per-interval target supports; ``interval_total`` also counts the
    complement gaps (the implicit outlier branches) inside the node range.
    """

    attribute: int
    target_intervals: tuple[Interval, ...]
    counts: tuple[int, ...]
    proxy: float
    interval_total: int


def support_floor(params: SplitParams) -> int:
    """Minimum training support an interval must keep (0 when beta is 0)."""
    if params.beta == 0:
        return 0
    return max(math.ceil(params.beta * params.n_root), params.min_leaf)


def clip(grid: kde.DensityGrid, gamma: float) -> list[Interval]:
    """Maximal grid runs with density >= gamma * max, as closed intervals."""
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    dens = grid.densities
    tau = gamma * float(dens.max())
    keep = np.flatnonzero(dens >= tau)
    breaks = np.flatnonzero(np.diff(keep) > 1)
    starts = np.concatenate(([keep[0]], keep[breaks + 1]))
    ends = np.concatenate((keep[breaks], [keep[-1]]))
    return [
        Interval(float(grid.points[a]), float(grid.points[b]))
        for a, b in zip(starts, ends)
    ]


def revise(intervals: list[Interval], grid: kde.DensityGrid, alpha: float) -> list[Interval]:
    """Cut intervals at significant interior minima when modes outnumber them.

    Revision only runs while the interval count is below the estimate's mode
    count. Within an interval, a grid minimum is significant when both
    flanking maxima lie inside the interval and the minimum's density is at
    most ``alpha`` times the lower flanking maximum. Each cut shares its
    abscissa with both resulting parts; shrinking re-tightens the bounds.
    """
    k = grid.mode_count
    if k <= 1 or len(intervals) >= k:
        return list(intervals)
    points = grid.points
    dens = grid.densities
    maxima = grid.maxima_indices
    out: list[Interval] = []
    for iv in intervals:
        a = int(np.searchsorted(points, iv.low))
        b = int(np.searchsorted(points, iv.high))
        cuts: list[float] = []
        for mi in grid.minima_indices:
            if not a < mi < b:
                continue
            pos = np.searchsorted(maxima, mi)
            left = maxima[pos - 1] if pos > 0 else None
            right = maxima[pos] if pos < len(maxima) else None
            if left is None or right is None or left < a or right > b:
                continue
            if dens[mi] <= alpha * min(dens[left], dens[right]):
                cuts.append(float(points[mi]))
        lo = iv.low
        for cut in cuts:
            out.append(Interval(lo, cut))
            lo = cut
        out.append(Interval(lo, iv.high))
    return out


def assess(intervals: list[Interval], values, params: SplitParams) -> list[Interval]:
    """Drop intervals whose training support falls below the floor."""
    floor = support_floor(params)
    if floor == 0:
        return list(intervals)
    v = np.asarray(values, dtype=float)
    return [iv for iv in intervals if _count_members(iv, v) >= floor]


def shrink(intervals: list[Interval], values) -> list[Interval]:
    """Tighten intervals to the exact [min, max] of their member values.

    Intervals containing no values are removed; the result stays disjoint
    and sorted.
    """
    v = np.asarray(values, dtype=float)
    out = []
    for iv in intervals:
        members = v[(v >= iv.low) & (v <= iv.high)]
        if members.size == 0:
            continue
        out.append(Interval(float(members.min()), float(members.max())))
    return out


def impurity_proxy(counts, intervals, node_range: Interval, n_t: int) -> float:
    """Gini-style score of a division under the virtual-outlier assumption.

    Each target interval receives ``n' = n_t * width / node_width`` virtual
    outliers and contributes ``n_i * n' / (n_i + n')``; zero-support terms
    contribute nothing. Lower is purer.
    """
    node_width = node_range.high - node_range.low
    if node_width <= 0:
        raise ValueError("node range has zero width; attribute is not divisible")
    total = 0.0
    for n_i, iv in zip(counts, intervals):
        n_virtual = n_t * (iv.high - iv.low) / node_width
        if n_i + n_virtual == 0:
            continue
        total += n_i * n_virtual / (n_i + n_virtual)
    return total


def propose_split(values, attribute: int, params: SplitParams,
                  node_range: Interval | None = None) -> SplitCandidate | None:
    """Run the full pipeline for one attribute and score the outcome.

    Returns ``None`` when the attribute cannot produce intervals (zero
    bandwidth, or every interval dropped). `node_range` is the node's
    current extent along the attribute, used by the impurity proxy; it
    defaults to the [min, max] of `values`.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("cannot propose a split on an empty value set")
    model = kde.fit(v)
    if model.bandwidth <= 0:
        return None
    h = model.bandwidth
    grid = kde.evaluate_grid(model, float(v.min()) - h, float(v.max()) + h,
                             params.grid_points)
    intervals = clip(grid, params.gamma)
    intervals = revise(intervals, grid, params.alpha)
    intervals = assess(intervals, v, params)
    if not intervals:
        return None
    intervals = shrink(intervals, v)
    if not intervals:
        return None
    counts = tuple(_count_members(iv, v) for iv in intervals)
    if node_range is None:
        node_range = Interval(float(v.min()), float(v.max()))
    proxy = impurity_proxy(counts, intervals, node_range, n_t=v.size)
    return SplitCandidate(
        attribute=attribute,
        target_intervals=tuple(intervals),
        counts=counts,
        proxy=proxy,
        interval_total=len(intervals) + _gap_count(intervals, node_range),
    )


def _count_members(iv: Interval, v: np.ndarray) -> int:
    return int(np.count_nonzero((v >= iv.low) & (v <= iv.high)))


def _gap_count(intervals: list[Interval], node_range: Interval) -> int:
    gaps = 0
    edge = node_range.low
    for iv in intervals:
        if iv.low > edge:
            gaps += 1
        edge = iv.high
    if node_range.high > edge:
        gaps += 1
    return gaps
