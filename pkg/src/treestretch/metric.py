"""Finite metrics, Euclidean point sets and routing costs.

A :class:`Metric` is always normalized: distances are rescaled so that the
smallest off-diagonal entry is 2.  With that convention every cluster of
diameter below 1 is a single point, which is what the level-0 stage of the
hierarchical decomposition relies on.  Stretch ratios do not depend on the
scale, and ``Metric.scale`` keeps the multiplier so results can be reported
in the caller's units.

Routing costs count each unordered pair once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .cutlib import SortedValues
from .errors import (
    Asymmetric,
    CenterNotInSubset,
    DimensionMismatch,
    DuplicatePoints,
    EmptySubset,
    IndexOutOfRange,
    NegativeDistance,
    NonFinite,
    NonSquare,
    NonZeroDiagonal,
    OverlappingSubsets,
    TriangleViolation,
    ZeroOffDiagonal,
)

TRIANGLE_RTOL = 1e-9
SYMMETRY_RTOL = 1e-12
MIN_DISTANCE = 2.0


@dataclass(frozen=True, eq=False)
class Metric:
    dist: np.ndarray
    scale: float = 1.0

    @property
    def n(self) -> int:
        return int(self.dist.shape[0])

    def unscale(self, x):
        """Convert a normalized length back to input units."""
        return x / self.scale


@dataclass(frozen=True, eq=False)
class PointSet:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DimensionMismatch(f"expected an (n, d) array of points, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DimensionMismatch("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        return int(self.points.shape[1])


@dataclass(frozen=True)
class BoundingBox:
    low: np.ndarray
    high: np.ndarray

    @property
    def sides(self) -> np.ndarray:
        return self.high - self.low

    @property
    def l_max(self) -> float:
        return float(self.sides.max())

    @property
    def longest_axis(self) -> int:
        # argmax returns the first maximum: ties go to the smallest axis
        return int(np.argmax(self.sides))

    def contains(self, pts) -> bool:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return bool(np.all(pts >= self.low) and np.all(pts <= self.high))


def bounding_box(points) -> BoundingBox:
    pts = points.points if isinstance(points, PointSet) else np.atleast_2d(np.asarray(points, float))
    return BoundingBox(pts.min(axis=0), pts.max(axis=0))


def validate_metric(raw) -> Metric:
    """Check metric axioms and rescale so the closest pair sits at distance 2."""
    d = np.asarray(raw, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise NonSquare(d.shape)
    bad = np.argwhere(~np.isfinite(d))
    if bad.size:
        raise NonFinite(*map(int, bad[0]))
    n = d.shape[0]

    asym = np.abs(d - d.T) > SYMMETRY_RTOL * np.maximum(np.abs(d), np.abs(d.T))
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        raise Asymmetric(min(i, j), max(i, j))
    d = (d + d.T) / 2

    neg = np.argwhere(d < 0)
    if neg.size:
        i, j = map(int, neg[0])
        raise NegativeDistance(min(i, j), max(i, j))
    diag = np.flatnonzero(np.diag(d) != 0)
    if diag.size:
        raise NonZeroDiagonal(int(diag[0]))
    off = ~np.eye(n, dtype=bool)
    zero = np.argwhere((d == 0) & off)
    if zero.size:
        i, j = map(int, zero[0])
        raise ZeroOffDiagonal(min(i, j), max(i, j))

    _check_triangle(d)

    if n == 1:
        return Metric(np.zeros((1, 1)), 1.0)
    scale = MIN_DISTANCE / d[off].min()
    scaled = d * scale
    # rounding in d * scale can land one ulp under the floor
    scaled[off] = np.maximum(scaled[off], MIN_DISTANCE)
    return Metric(scaled, float(scale))


def _check_triangle(d: np.ndarray) -> None:
    n = d.shape[0]
    first = None
    for via in range(n):
        detour = d[:, via, None] + d[None, via, :]
        bad = d > detour + TRIANGLE_RTOL * d
        if bad.any():
            i, j = map(int, np.argwhere(np.triu(bad, 1))[0])
            cand = (i, j, via)
            if first is None or cand < first:
                first = cand
    if first is not None:
        raise TriangleViolation(*first)


def as_subset(m_or_n, s: Iterable[int] | None = None) -> np.ndarray:
    """Validated index array; ``None`` means every point."""
    n = m_or_n if isinstance(m_or_n, int) else m_or_n.n
    if s is None:
        return np.arange(n)
    idx = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.intp).ravel()
    if idx.size == 0:
        raise EmptySubset()
    if idx.min() < 0 or idx.max() >= n:
        raise IndexOutOfRange(f"subset indices must lie in [0, {n})")
    if np.unique(idx).size != idx.size:
        raise IndexOutOfRange("subset contains duplicate indices")
    return idx


def diameter(m: Metric, s=None) -> float:
    idx = as_subset(m, s)
    return float(m.dist[np.ix_(idx, idx)].max())


def radius_wrt(m: Metric, s, center: int) -> float:
    idx = as_subset(m, s)
    if center not in set(idx.tolist()):
        raise CenterNotInSubset(f"center {center} is not in the subset")
    return float(m.dist[center, idx].max())


def diameter_center(m: Metric, s=None) -> tuple[int, float]:
    """Smallest-index point whose radius equals the diameter, and that diameter."""
    idx = np.sort(as_subset(m, s))
    radii = m.dist[np.ix_(idx, idx)].max(axis=1)
    p = int(np.argmax(radii))
    return int(idx[p]), float(radii[p])


def centripetal_values(m: Metric, s, center: int) -> SortedValues:
    """Distances from ``center`` to the subset, sorted; ties by point index."""
    idx = np.sort(as_subset(m, s))
    if center not in set(idx.tolist()):
        raise CenterNotInSubset(f"center {center} is not in the subset")
    vals = m.dist[center, idx]
    order = np.argsort(vals, kind="stable")
    return SortedValues(vals[order], idx[order])


def routing_cost(m: Metric, s=None) -> float:
    idx = as_subset(m, s)
    return float(np.triu(m.dist[np.ix_(idx, idx)], 1).sum())


def cross_cost(m: Metric, p, q) -> float:
    pi = as_subset(m, p)
    qi = as_subset(m, q)
    shared = set(pi.tolist()) & set(qi.tolist())
    if shared:
        raise OverlappingSubsets(shared)
    return float(m.dist[np.ix_(pi, qi)].sum())


def euclidean_distances(ps: PointSet) -> np.ndarray:
    if ps.n == 1:
        return np.zeros((1, 1))
    return squareform(pdist(ps.points))


def metric_from_points(ps: PointSet | Sequence[Sequence[float]]) -> Metric:
    if not isinstance(ps, PointSet):
        ps = PointSet(np.asarray(ps, dtype=float))
    d = euclidean_distances(ps)
    off = ~np.eye(ps.n, dtype=bool)
    zero = np.argwhere((d == 0) & off)
    if zero.size:
        i, j = map(int, zero[0])
        raise DuplicatePoints(min(i, j), max(i, j))
    return validate_metric(d)
