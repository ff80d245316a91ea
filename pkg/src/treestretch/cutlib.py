"""One-dimensional cuts of a sorted multiset of reals.

For sorted values ``a_1 <= ... <= a_n`` the interaction of a split after the
``k``-th value is ``RC[k] = sum_{j<=k} sum_{i>k} (a_i - a_j)``.  A cut is scored
by ``k * (n - k) * width / RC[k]`` where ``width`` is the spread of the values
(free cut) or the length of an admissible interval (constrained cut).  Both
are guaranteed to have a cut scoring at most ``DELTA0 = 210/59``.

Indices follow the 1-based convention of the cut: ``k`` is the number of
values that end up on the left.  The arrays inside :class:`CutScan` are plain
0-based numpy arrays, so ``RC[k - 1]`` is the interaction of cut ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    DegenerateDiameter,
    EmptyInterval,
    IntervalOutOfRange,
    NotSorted,
    TooFewValues,
    TooLarge,
)

DELTA0 = 210 / 59
"""Upper bound on the best cut score of any 1-D point set."""

# ratios within this relative distance of the minimum count as ties
TIE_RTOL = 1e-12

BRUTE_FORCE_MAX_N = 5000


@dataclass(frozen=True)
class SortedValues:
    """Nondecreasing reals, optionally remembering which point each came from.

    ``order[p]`` is the point index whose value sits at sorted position ``p``.
    """

    values: np.ndarray
    order: Optional[np.ndarray] = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise TooFewValues(int(vals.size))
        if vals.size > 1 and np.any(np.diff(vals) < 0):
            raise NotSorted("values must be nondecreasing")
        object.__setattr__(self, "values", vals)
        if self.order is not None:
            order = np.asarray(self.order, dtype=np.intp)
            if order.shape != vals.shape:
                raise ValueError("order must have one entry per value")
            object.__setattr__(self, "order", order)

    @classmethod
    def from_unsorted(cls, values: Sequence[float]) -> "SortedValues":
        vals = np.asarray(values, dtype=float)
        order = np.argsort(vals, kind="stable")
        return cls(vals[order], order)

    def __len__(self):
        return int(self.values.size)

    @property
    def delta(self) -> float:
        return float(self.values[-1] - self.values[0])


ValuesLike = Union[SortedValues, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class CutScan:
    LS: np.ndarray
    RS: np.ndarray
    RC: np.ndarray
    delta: float

    @property
    def n(self) -> int:
        return int(self.LS.size)


@dataclass(frozen=True)
class CutResult:
    """Chosen cut: the first ``k`` values go left.

    ``position`` is a coordinate ``z`` with ``a_k < z <= a_{k+1}`` (or
    ``z = a_{k+1}`` when those two values coincide), so ``k`` values lie
    strictly below it.
    """

    k: int
    ratio: float
    position: float
    width: float
    cross: float


def _as_sorted(v: ValuesLike) -> SortedValues:
    return v if isinstance(v, SortedValues) else SortedValues(v)


def scan(v: ValuesLike) -> CutScan:
    """Left/right distance sums and cut interactions in linear time.

    ``LS`` grows by ``k * gap_k`` when stepping right past the ``k``-th gap,
    and ``RS`` shrinks by ``(n - k) * gap_k``.  ``RS`` is accumulated from the
    right end so that both arrays are running sums of nonnegative terms.
    """
    sv = _as_sorted(v)
    a = sv.values
    n = a.size
    if n < 2:
        raise TooFewValues(n)
    gaps = np.diff(a)
    k = np.arange(1, n, dtype=float)
    LS = np.empty(n)
    LS[0] = 0.0
    np.cumsum(k * gaps, out=LS[1:])
    RS = np.empty(n)
    RS[-1] = 0.0
    RS[:-1] = np.cumsum(((n - k) * gaps)[::-1])[::-1]
    RC = (n - k) * LS[:-1] + k * RS[:-1]
    return CutScan(LS=LS, RS=RS, RC=RC, delta=float(a[-1] - a[0]))


def direct_scan(v: ValuesLike) -> CutScan:
    """Quadratic reference for :func:`scan` built from explicit pair differences."""
    sv = _as_sorted(v)
    a = sv.values
    n = a.size
    if n < 2:
        raise TooFewValues(n)
    if n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"direct summation is capped at n={BRUTE_FORCE_MAX_N}, got {n}")
    # pos[i, j] = a_i - a_j for i > j, else 0
    pos = np.tril(np.subtract.outer(a, a), -1)
    LS = pos.sum(axis=1)
    RS = pos.sum(axis=0)
    # RC[k-1] = sum of pos[i, j] over rows i >= k and columns j < k
    col_prefix = np.cumsum(pos, axis=1)
    below = np.cumsum(col_prefix[::-1], axis=0)[::-1]
    ks = np.arange(1, n)
    RC = below[ks, ks - 1]
    return CutScan(LS=LS, RS=RS, RC=RC, delta=float(a[-1] - a[0]))


def cut_ratios(cs: CutScan, width: float) -> np.ndarray:
    """``k (n - k) width / RC[k]`` for every ``k``; ``inf`` where ``RC`` is 0."""
    n = cs.n
    k = np.arange(1, n, dtype=float)
    num = k * (n - k) * width
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(cs.RC > 0, num / np.where(cs.RC > 0, cs.RC, 1.0), np.inf)
    return r


def _argmin_smallest(ratios: np.ndarray, feasible: np.ndarray) -> int:
    masked = np.where(feasible, ratios, np.inf)
    best = masked.min()
    if not np.isfinite(best):
        raise DegenerateDiameter()
    return int(np.flatnonzero(masked <= best * (1 + TIE_RTOL))[0])


def _position(lo: float, hi: float) -> float:
    lo, hi = float(lo), float(hi)
    mid = lo + (hi - lo) / 2
    return mid if mid > lo else hi


def _free_cut(sv: SortedValues, cs: CutScan) -> CutResult:
    if cs.delta <= 0:
        raise DegenerateDiameter()
    ratios = cut_ratios(cs, cs.delta)
    idx = _argmin_smallest(ratios, cs.RC > 0)
    a = sv.values
    return CutResult(
        k=idx + 1,
        ratio=float(ratios[idx]),
        position=_position(a[idx], a[idx + 1]),
        width=cs.delta,
        cross=float(cs.RC[idx]),
    )


def optimal_cut(v: ValuesLike) -> CutResult:
    """Best free cut; ties go to the smallest ``k``."""
    sv = _as_sorted(v)
    if len(sv) < 2:
        raise TooFewValues(len(sv))
    return _free_cut(sv, scan(sv))


def brute_force_cut(v: ValuesLike) -> CutResult:
    """Same contract as :func:`optimal_cut`, scored with :func:`direct_scan`."""
    sv = _as_sorted(v)
    if len(sv) < 2:
        raise TooFewValues(len(sv))
    return _free_cut(sv, direct_scan(sv))


def constrained_cut(v: ValuesLike, interval: Sequence[float]) -> CutResult:
    """Best cut whose coordinate falls inside ``interval = (lo, hi)``.

    Cut ``k`` is admissible when some ``z`` in ``(lo, hi]`` has exactly ``k``
    values below it.  Scores use the interval length as width and the
    interaction of the original values.
    """
    sv = _as_sorted(v)
    a = sv.values
    n = a.size
    if n < 2:
        raise TooFewValues(n)
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo:
        raise EmptyInterval(lo, hi)
    if lo < a[0] or hi > a[-1]:
        raise IntervalOutOfRange(lo, hi, a[0], a[-1])
    cs = scan(sv)
    width = hi - lo
    left_end = np.maximum(a[:-1], lo)
    right_end = np.minimum(a[1:], hi)
    feasible = (left_end < right_end) & (cs.RC > 0)
    ratios = cut_ratios(cs, width)
    idx = _argmin_smallest(ratios, feasible)
    return CutResult(
        k=idx + 1,
        ratio=float(ratios[idx]),
        position=_position(left_end[idx], right_end[idx]),
        width=width,
        cross=float(cs.RC[idx]),
    )
