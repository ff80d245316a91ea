"""Exact optima for small or structured inputs.

These are the references the fast constructions are checked against: the
interval DP for dominating ultrametrics of a line, the exhaustive search over
recursive bipartitions for tiny metrics, and the unit-spaced path on which
every cut scores the same.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .cutlib import SortedValues, cut_ratios, scan
from .errors import TooFewValues, TooLarge
from .metric import Metric

EXHAUSTIVE_MAX_N = 8
EXHAUSTIVE_OVERRIDE_MAX_N = 9
PATH_RTOL = 1e-9


@dataclass(frozen=True)
class PathInstance:
    n: int

    @property
    def values(self) -> np.ndarray:
        return np.arange(1, self.n + 1, dtype=float)

    def sorted_values(self) -> SortedValues:
        return SortedValues(self.values)


def path_values(n: int) -> SortedValues:
    return PathInstance(n).sorted_values()


@dataclass(frozen=True)
class OptimalCost:
    """Cheapest dominating ultrametric: its routing cost and the ratio to the source's."""

    cost: float
    ratio: float


def _ratio(cost: float, source: float) -> float:
    if source == 0:
        return 1.0
    return cost / source


def _pairwise_sum_1d(a: np.ndarray) -> float:
    # sum_{i<j} (a_j - a_i) for sorted a
    n = a.size
    k = np.arange(n)
    return float(np.sum((2 * k - n + 1) * a))


def line_dp_optimal(v: Union[SortedValues, np.ndarray, list]) -> OptimalCost:
    """Interval DP over contiguous splits, O(n^3) time and O(n^2) memory.

    ``C[i, j]`` is the cheapest ultrametric on ``a_i..a_j``; the root of that
    block is labelled with its spread ``a_j - a_i`` and every pair split at the
    root pays it.  Each block length is solved for all starts at once.
    """
    sv = v if isinstance(v, SortedValues) else SortedValues(v)
    a = sv.values
    n = a.size
    C = np.zeros((n, n))
    for length in range(2, n + 1):
        starts = np.arange(n - length + 1)
        ends = starts + length - 1
        t = np.arange(length - 1)
        left = C[starts[:, None], starts[:, None] + t]
        right = C[starts[:, None] + t + 1, ends[:, None]]
        pairs = (t + 1) * (length - 1 - t)
        spread = a[ends] - a[starts]
        C[starts, ends] = (left + right + pairs[None, :] * spread[:, None]).min(axis=1)
    cost = float(C[0, n - 1])
    return OptimalCost(cost, _ratio(cost, _pairwise_sum_1d(a)))


def exhaustive_optimal_ultrametric(m: Metric, allow_large: bool = False) -> OptimalCost:
    """Minimum routing cost over all dominating ultrametrics of ``m``.

    Every binary hierarchy of the points is tried, with each internal node
    labelled by the diameter of its cluster (the smallest label dominance
    allows).  Costs are memoized per subset bitmask, so the work is about
    ``3**n`` steps.  Costs are in the units of ``m.dist``.
    """
    n = m.n
    cap = EXHAUSTIVE_OVERRIDE_MAX_N if allow_large else EXHAUSTIVE_MAX_N
    if n > cap:
        raise TooLarge(f"exhaustive search is capped at n={cap}, got {n}")
    d = m.dist
    full = (1 << n) - 1
    size = [bin(s).count("1") for s in range(full + 1)]
    diam = [0.0] * (full + 1)
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        if rest:
            i = low.bit_length() - 1
            members = [j for j in range(n) if rest >> j & 1]
            diam[s] = max(diam[rest], float(d[i, members].max()))
    best = [0.0] * (full + 1)
    for s in range(1, full + 1):
        if size[s] < 2:
            continue
        low = s & -s
        rest = s ^ low
        # sub runs over subsets of rest; the left part always holds the lowest point
        top = np.inf
        sub = rest
        while True:
            left = sub | low
            right = s ^ left
            if right:
                c = best[left] + best[right] + size[left] * size[right] * diam[s]
                if c < top:
                    top = c
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[s] = top
    cost = float(best[full])
    source = float(np.triu(d, 1).sum())
    return OptimalCost(cost, _ratio(cost, source))


def path_cut_ratios(n: int) -> np.ndarray:
    """Score of every cut of the unit-spaced path ``1..n``."""
    if n < 2:
        raise TooFewValues(n)
    cs = scan(path_values(n))
    return cut_ratios(cs, cs.delta)


def lower_bound_ratio(n: int) -> float:
    """``2 (n - 1) / n``, after checking every cut of the path ``1..n`` scores exactly that."""
    target = 2 * (n - 1) / n
    ratios = path_cut_ratios(n)
    if not np.allclose(ratios, target, rtol=PATH_RTOL, atol=0):
        k = int(np.argmax(np.abs(ratios - target))) + 1
        raise ArithmeticError(f"cut {k} of the path scores {ratios[k - 1]}, expected {target}")
    return target
