"""Low routing-cost spanning trees for point sets in R^d.

The point set is split recursively by a hyperplane orthogonal to the longest
side of its bounding box.  The cut coordinate is restricted to the central
``1 - 2*alpha`` fraction of that side, which keeps tree paths short, and
within that band the cut is the best one by :func:`constrained_cut`.  The
two sub-trees are joined by an edge between their roots, and the left root
becomes the root of the whole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .cutlib import DELTA0, SortedValues, constrained_cut
from .errors import BadAlpha, NotSpanning
from .hst import StretchReport, dominance, stretch_of
from .metric import PointSet, bounding_box, euclidean_distances
from .trees import node_distance_matrix, orient

DEFAULT_ALPHA = 0.25
EDGE_RTOL = 1e-9

Edge = Tuple[int, int, float]


@dataclass(frozen=True)
class CutPlane:
    axis: int
    interval: Tuple[float, float]
    position: float
    left_count: int
    size: int
    l_max: float
    ratio: float
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    parent: int = -1
    """Index of the cut that produced this subset, ``-1`` for the top cut."""


@dataclass
class SpanningTree:
    n: int
    edges: List[Edge]
    root: int
    alpha: float = DEFAULT_ALPHA
    cuts: List[CutPlane] = field(default_factory=list)


def stretch_bound(d: int, alpha: float = DEFAULT_ALPHA) -> float:
    """Routing-cost stretch guarantee ``2 DELTA0 / (alpha (1 - 2 alpha)) * d sqrt(d)``."""
    return 2 * DELTA0 / (alpha * (1 - 2 * alpha)) * d * math.sqrt(d)


def path_bound(d: int, l_max: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Guarantee on the longest tree path: ``(2 / alpha) d sqrt(d) L_max``."""
    return 2 / alpha * d * math.sqrt(d) * l_max


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 < alpha < 0.5:
        raise BadAlpha(alpha)
    return alpha


def euclidean_spanning_tree(ps, alpha: float = DEFAULT_ALPHA) -> SpanningTree:
    alpha = _check_alpha(alpha)
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    P = ps.points
    n = ps.n

    # partition tree: members, (left child, right child) and cut index per node
    members: List[np.ndarray] = [np.arange(n)]
    kids: List[Optional[Tuple[int, int]]] = [None]
    chains: List[int] = []
    cuts: List[CutPlane] = []
    stack = [(0, -1)]
    while stack:
        node, parent_cut = stack.pop()
        idx = members[node]
        if idx.size == 1:
            continue
        box = bounding_box(P[idx])
        if box.l_max == 0:
            chains.append(node)
            continue
        axis = box.longest_axis
        coords = P[idx, axis]
        order = np.argsort(coords, kind="stable")
        a = coords[order]
        span = a[-1] - a[0]
        band = (a[0] + alpha * span, a[0] + (1 - alpha) * span)
        res = constrained_cut(SortedValues(a), band)
        left = np.sort(idx[order[: res.k]])
        right = np.sort(idx[order[res.k :]])
        cuts.append(
            CutPlane(
                axis=axis,
                interval=(float(band[0]), float(band[1])),
                position=res.position,
                left_count=res.k,
                size=int(idx.size),
                l_max=box.l_max,
                ratio=res.ratio,
                left=tuple(int(x) for x in left),
                right=tuple(int(x) for x in right),
                parent=parent_cut,
            )
        )
        this_cut = len(cuts) - 1
        ids = []
        for part in (left, right):
            members.append(part)
            kids.append(None)
            ids.append(len(members) - 1)
        kids[node] = (ids[0], ids[1])
        stack.append((ids[1], this_cut))
        stack.append((ids[0], this_cut))

    edges: List[Edge] = []
    root_of = [-1] * len(members)
    chain_set = set(chains)
    # children always have larger ids than their parent
    for node in range(len(members) - 1, -1, -1):
        idx = members[node]
        if kids[node] is None:
            root_of[node] = int(idx[0])
            if node in chain_set:
                edges.extend((int(u), int(v), 0.0) for u, v in zip(idx[:-1], idx[1:]))
            continue
        l, r = kids[node]
        r1, r2 = root_of[l], root_of[r]
        edges.append((r1, r2, float(np.linalg.norm(P[r1] - P[r2]))))
        root_of[node] = r1

    edges = sorted((min(u, v), max(u, v), w) for u, v, w in edges)
    return SpanningTree(n=n, edges=edges, root=root_of[0], alpha=alpha, cuts=cuts)


def spanning_tree_routing_cost(t: SpanningTree) -> float:
    """Sum over edges of ``length * s * (n - s)``, ``s`` = vertices on one side."""
    if t.n == 1:
        return 0.0
    parent, length, order = orient(t.n, t.edges, t.root)
    size = np.ones(t.n)
    total = 0.0
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            total += length[v] * size[v] * (t.n - size[v])
            size[p] += size[v]
    return float(total)


def tree_path_matrix(t: SpanningTree) -> np.ndarray:
    if t.n == 1:
        return np.zeros((1, 1))
    parent, length, _ = orient(t.n, t.edges, t.root)
    return node_distance_matrix(parent, length, t.root)


def projected_cut_ratio(points: np.ndarray, cut: CutPlane) -> float:
    """``|L| |R| |band| / sum (x_r - x_l)`` on the cut axis, from coordinates alone."""
    xl = points[list(cut.left), cut.axis]
    xr = points[list(cut.right), cut.axis]
    cross = float(xr.sum() * xl.size - xl.sum() * xr.size)
    width = cut.interval[1] - cut.interval[0]
    return xl.size * xr.size * width / cross


def verify_euclidean(ps, t: SpanningTree, alpha: Optional[float] = None) -> StretchReport:
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    alpha = _check_alpha(t.alpha if alpha is None else alpha)
    if t.n != ps.n:
        raise NotSpanning(f"tree spans {t.n} vertices but the point set has {ps.n}")
    D = euclidean_distances(ps)
    DT = tree_path_matrix(t)  # raises NotSpanning
    lengths = np.array([w for _, _, w in t.edges])
    straight = np.array([D[u, v] for u, v, _ in t.edges])
    edges_ok = bool(np.all(np.abs(lengths - straight) <= EDGE_RTOL * straight + 1e-12))

    ok, worst = dominance(D, DT)
    source = float(np.triu(D, 1).sum())
    tree = spanning_tree_routing_cost(t)
    l_max = bounding_box(ps).l_max
    max_ratio = max((projected_cut_ratio(ps.points, c) for c in t.cuts), default=0.0)
    report = StretchReport(
        kind="spantree",
        n=ps.n,
        source_cost=source,
        tree_cost=tree,
        stretch=stretch_of(source, tree),
        bound=stretch_bound(ps.d, alpha),
        max_cut_ratio=max_ratio,
        dominance_ok=ok,
        worst_pair=worst,
        max_path=float(DT.max()),
        max_path_bound=path_bound(ps.d, l_max, alpha),
        l_max=l_max,
        edge_lengths_ok=edges_ok,
    )
    for flag, name in (
        (ok, "dominance"),
        (report.within_bound, "stretch"),
        (report.cuts_ok, "cut_ratio"),
        (report.path_ok, "max_path"),
        (edges_ok, "edge_length"),
    ):
        if not flag:
            report.violations.append(name)
    return report
