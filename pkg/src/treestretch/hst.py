"""Dominating tree metrics for arbitrary finite metrics.

Two constructions share one cut step: pick a point realizing the cluster
diameter, order the cluster by distance from it, and split off the prefix
chosen by :func:`treestretch.cutlib.optimal_cut`.

* :func:`hierarchical_decompose` applies the step level by level, cutting
  until every cluster at level ``i`` has diameter below ``2**i``;
  :func:`build_hst` turns the resulting laminar family into a 2-HST whose
  edges below a level-``i`` node have length ``2**(i-1)``.  Its routing cost
  is at most ``4 * DELTA0`` times that of the metric.
* :func:`recursive_cut_tree` applies the step recursively with no levels and
  labels every internal node with the diameter of its cluster, giving an
  ultrametric within ``DELTA0`` of the metric's routing cost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cutlib import DELTA0, optimal_cut
from .errors import UnknownLeaf
from .metric import Metric, centripetal_values, diameter_center, routing_cost
from .trees import node_distance_matrix

HST_BOUND = 4 * DELTA0
ULTRA_BOUND = DELTA0
STRETCH_ATOL = 1e-6
CUT_ATOL = 1e-9
DOMINANCE_RTOL = 1e-9

Cluster = Tuple[int, ...]


@dataclass(frozen=True)
class CutRecord:
    """One split of ``cluster`` into ``left`` (the prefix nearest ``center``) and ``right``.

    ``ratio`` uses the cross cost in the original metric; ``ratio_centripetal``
    uses distances to the center only, which is what the cut minimized.  The
    first never exceeds the second.
    """

    cluster: Cluster
    center: int
    left: Cluster
    right: Cluster
    cluster_diameter: float
    cross_cost_original: float
    cross_cost_centripetal: float
    ratio: float
    ratio_centripetal: float
    level: Optional[int] = None


@dataclass
class Decomposition:
    metric: Metric
    delta: int
    levels: List[List[Cluster]]
    cuts: List[CutRecord]
    parents: List[List[int]]
    """``parents[i][c]`` is the index in ``levels[i + 1]`` of the cluster containing ``levels[i][c]``."""


@dataclass
class WeightedTree:
    """Rooted tree over ``n`` points.

    ``kind`` is ``"hst"`` (distances are path lengths, ``level`` is set) or
    ``"ultra"`` (distance is the label of the lowest common ancestor; edge
    lengths are half the label drop so that path lengths agree).
    """

    kind: str
    parent: List[int]
    edge_length: List[float]
    point: List[int]
    root: int
    level: List[Optional[int]] = field(default_factory=list)
    label: List[Optional[float]] = field(default_factory=list)
    cuts: List[CutRecord] = field(default_factory=list)
    scale: float = 1.0
    delta: Optional[int] = None

    def __post_init__(self):
        self._index()

    def _index(self):
        m = len(self.parent)
        self.children: List[List[int]] = [[] for _ in range(m)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                self.children[p].append(v)
        self.leaf_of: Dict[int, int] = {p: v for v, p in enumerate(self.point) if p >= 0}
        self.depth = [0] * m
        for v in self.preorder():
            if v != self.root:
                self.depth[v] = self.depth[self.parent[v]] + 1

    @property
    def n_nodes(self) -> int:
        return len(self.parent)

    @property
    def n_points(self) -> int:
        return len(self.leaf_of)

    def preorder(self) -> List[int]:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    def leaf_counts(self) -> np.ndarray:
        counts = np.zeros(self.n_nodes, dtype=np.int64)
        for v in reversed(self.preorder()):
            if self.point[v] >= 0:
                counts[v] += 1
            if self.parent[v] >= 0:
                counts[self.parent[v]] += counts[v]
        return counts

    def lca(self, a: int, b: int) -> int:
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        while a != b:
            a, b = self.parent[a], self.parent[b]
        return a


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def top_level(diam: float) -> int:
    """Smallest ``i >= 0`` with ``2**i >= diam``."""
    if diam <= 1:
        return 0
    i = max(0, math.ceil(math.log2(diam)))
    while 2.0**i < diam:
        i += 1
    while i > 0 and 2.0 ** (i - 1) >= diam:
        i -= 1
    return i


def cut_cluster(m: Metric, cluster: Sequence[int], level: Optional[int] = None) -> CutRecord:
    center, diam = diameter_center(m, cluster)
    sv = centripetal_values(m, cluster, center)
    res = optimal_cut(sv)
    left = tuple(sorted(int(x) for x in sv.order[: res.k]))
    right = tuple(sorted(int(x) for x in sv.order[res.k :]))
    cross = float(m.dist[np.ix_(left, right)].sum())
    num = len(left) * len(right) * diam
    return CutRecord(
        cluster=tuple(sorted(int(x) for x in cluster)),
        center=center,
        left=left,
        right=right,
        cluster_diameter=diam,
        cross_cost_original=cross,
        cross_cost_centripetal=res.cross,
        ratio=num / cross,
        ratio_centripetal=res.ratio,
        level=level,
    )


def _diam(m: Metric, c: Cluster) -> float:
    if len(c) == 1:
        return 0.0
    idx = np.asarray(c)
    return float(m.dist[np.ix_(idx, idx)].max())


def hierarchical_decompose(m: Metric) -> Decomposition:
    n = m.n
    everything: Cluster = tuple(range(n))
    delta = top_level(_diam(m, everything))
    levels: List[List[Cluster]] = [[] for _ in range(delta + 1)]
    parents: List[List[int]] = [[] for _ in range(delta + 1)]
    levels[delta] = [everything]
    cuts: List[CutRecord] = []

    for i in range(delta - 1, -1, -1):
        threshold = 2.0**i
        here: List[Tuple[Cluster, int]] = []
        for pi, P in enumerate(levels[i + 1]):
            if len(P) == 1:
                here.append((P, pi))
                continue
            pending = [P]
            while pending:
                Q = pending.pop()
                if len(Q) == 1 or _diam(m, Q) < threshold:
                    here.append((Q, pi))
                    continue
                rec = cut_cluster(m, Q, level=i)
                cuts.append(rec)
                pending.append(rec.right)
                pending.append(rec.left)
        here.sort(key=lambda cp: cp[0][0])
        levels[i] = [c for c, _ in here]
        parents[i] = [p for _, p in here]

    return Decomposition(metric=m, delta=delta, levels=levels, cuts=cuts, parents=parents)


def build_hst(dec: Decomposition) -> WeightedTree:
    """2-HST of a decomposition, with unchanged clusters merged into one node.

    A cluster that survives several levels unchanged becomes a single node
    whose ``level`` is the lowest of those levels; its edge to the parent has
    the parent's child length ``2**(parent level - 1)``.
    """
    parent: List[int] = [-1]
    edge: List[float] = [0.0]
    level: List[Optional[int]] = [dec.delta]
    point: List[int] = [-1]
    node_of = [0]  # node id for each cluster of the level above

    for i in range(dec.delta - 1, -1, -1):
        above = dec.levels[i + 1]
        current = []
        for c, pi in zip(dec.levels[i], dec.parents[i]):
            pnode = node_of[pi]
            if c == above[pi]:
                level[pnode] = i
                current.append(pnode)
                continue
            parent.append(pnode)
            edge.append(2.0**i)
            level.append(i)
            point.append(-1)
            current.append(len(parent) - 1)
        node_of = current

    for c, v in zip(dec.levels[0], node_of):
        point[v] = c[0]

    return WeightedTree(
        kind="hst",
        parent=parent,
        edge_length=edge,
        point=point,
        root=0,
        level=level,
        label=[None] * len(parent),
        cuts=list(dec.cuts),
        scale=dec.metric.scale,
        delta=dec.delta,
    )


def recursive_cut_tree(m: Metric) -> WeightedTree:
    """Binary ultrametric: cut recursively, label each node with its cluster diameter."""
    parent: List[int] = [-1]
    label: List[float] = [0.0]
    point: List[int] = [-1]
    cuts: List[CutRecord] = []
    stack: List[Tuple[Cluster, int]] = [(tuple(range(m.n)), 0)]
    while stack:
        Q, v = stack.pop()
        if len(Q) == 1:
            point[v] = Q[0]
            label[v] = 0.0
            continue
        rec = cut_cluster(m, Q)
        cuts.append(rec)
        label[v] = rec.cluster_diameter
        kids = []
        for part in (rec.left, rec.right):
            parent.append(v)
            label.append(0.0)
            point.append(-1)
            kids.append((part, len(parent) - 1))
        stack.extend(reversed(kids))

    edge = [0.0 if p < 0 else (label[p] - label[v]) / 2 for v, p in enumerate(parent)]
    return WeightedTree(
        kind="ultra",
        parent=parent,
        edge_length=edge,
        point=point,
        root=0,
        level=[None] * len(parent),
        label=label,
        cuts=cuts,
        scale=m.scale,
    )


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------


def tree_distance(t: WeightedTree, u: int, v: int) -> float:
    if u not in t.leaf_of:
        raise UnknownLeaf(u)
    if v not in t.leaf_of:
        raise UnknownLeaf(v)
    if u == v:
        return 0.0
    a, b = t.leaf_of[u], t.leaf_of[v]
    if t.kind == "ultra":
        return float(t.label[t.lca(a, b)])
    total = 0.0
    while t.depth[a] > t.depth[b]:
        total += t.edge_length[a]
        a = t.parent[a]
    while t.depth[b] > t.depth[a]:
        total += t.edge_length[b]
        b = t.parent[b]
    while a != b:
        total += t.edge_length[a] + t.edge_length[b]
        a, b = t.parent[a], t.parent[b]
    return total


def tree_routing_cost(t: WeightedTree) -> float:
    """Sum of tree distances over unordered point pairs, aggregated per edge or node."""
    counts = t.leaf_counts()
    n = t.n_points
    if t.kind == "ultra":
        total = 0.0
        for v in range(t.n_nodes):
            kids = t.children[v]
            if not kids:
                continue
            s = counts[kids].astype(float)
            total += t.label[v] * (s.sum() ** 2 - (s**2).sum()) / 2
        return float(total)
    s = counts.astype(float)
    length = np.asarray(t.edge_length, dtype=float)
    return float(np.sum(length * s * (n - s)))


def leaf_distance_matrix(t: WeightedTree) -> np.ndarray:
    """Tree distances between points ``0..n-1``.

    Path lengths for an HST; lowest-common-ancestor labels for an ultrametric.
    """
    n = t.n_points
    if t.kind != "ultra":
        D = node_distance_matrix(t.parent, t.edge_length, t.root)
        nodes = [t.leaf_of[p] for p in range(n)]
        return D[np.ix_(nodes, nodes)]
    D = np.zeros((n, n))
    below: Dict[int, List[int]] = {}
    for v in reversed(t.preorder()):
        groups = [below.pop(c) for c in t.children[v]]
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                D[np.ix_(groups[a], groups[b])] = t.label[v]
                D[np.ix_(groups[b], groups[a])] = t.label[v]
        mine = [p for g in groups for p in g]
        if t.point[v] >= 0:
            mine.append(t.point[v])
        below[v] = mine
    return D


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class StretchReport:
    kind: str
    n: int
    source_cost: float
    tree_cost: float
    stretch: float
    bound: float
    max_cut_ratio: float
    dominance_ok: bool
    worst_pair: Optional[Tuple[int, int, float, float]]
    scale: float = 1.0
    cut_bound: float = DELTA0
    max_path: Optional[float] = None
    max_path_bound: Optional[float] = None
    l_max: Optional[float] = None
    edge_lengths_ok: bool = True
    violations: List[str] = field(default_factory=list)

    @property
    def within_bound(self) -> bool:
        return self.stretch <= self.bound + STRETCH_ATOL

    @property
    def cuts_ok(self) -> bool:
        return self.max_cut_ratio <= self.cut_bound + CUT_ATOL

    @property
    def path_ok(self) -> bool:
        if self.max_path is None:
            return True
        return self.max_path <= self.max_path_bound + 1e-6 * (self.l_max or 0.0)

    @property
    def ok(self) -> bool:
        return (
            self.dominance_ok
            and self.within_bound
            and self.cuts_ok
            and self.path_ok
            and self.edge_lengths_ok
        )

    def as_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "n": self.n,
            "source_cost": self.source_cost,
            "tree_cost": self.tree_cost,
            "source_cost_unscaled": self.source_cost / self.scale,
            "tree_cost_unscaled": self.tree_cost / self.scale,
            "scale": self.scale,
            "stretch": self.stretch,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "max_cut_ratio": self.max_cut_ratio,
            "cut_bound": self.cut_bound,
            "cuts_ok": self.cuts_ok,
            "dominance_ok": self.dominance_ok,
            "worst_pair": None
            if self.worst_pair is None
            else {
                "u": self.worst_pair[0],
                "v": self.worst_pair[1],
                "d": self.worst_pair[2],
                "d_tree": self.worst_pair[3],
            },
            "ok": self.ok,
            "violations": list(self.violations),
        }
        if self.max_path is not None:
            out.update(
                max_path=self.max_path,
                max_path_bound=self.max_path_bound,
                l_max=self.l_max,
                path_ok=self.path_ok,
                edge_lengths_ok=self.edge_lengths_ok,
            )
        return out


def stretch_of(source_cost: float, tree_cost: float) -> float:
    """``tree_cost / source_cost``, with ``0 / 0`` read as 1."""
    if source_cost == 0:
        return 1.0 if tree_cost == 0 else math.inf
    return tree_cost / source_cost


def dominance(d: np.ndarray, dt: np.ndarray):
    """``(ok, worst_pair)``; the worst pair minimizes ``d_T / d`` over distinct pairs."""
    n = d.shape[0]
    if n < 2:
        return True, None
    iu, ju = np.triu_indices(n, 1)
    dd, tt = d[iu, ju], dt[iu, ju]
    ok = bool(np.all(tt >= dd * (1 - DOMINANCE_RTOL)))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(dd > 0, tt / np.where(dd > 0, dd, 1.0), np.inf)
    # near-ties go to the first pair so that rounding in stored trees cannot move the witness
    w = int(np.flatnonzero(rel <= rel.min() * (1 + DOMINANCE_RTOL))[0])
    return ok, (int(iu[w]), int(ju[w]), float(dd[w]), float(tt[w]))


def recompute_cut_ratio(m: Metric, left: Sequence[int], right: Sequence[int]) -> float:
    """``|L| |R| diam(L u R) / R_d(L, R)`` from the metric alone."""
    left, right = np.asarray(left), np.asarray(right)
    both = np.concatenate([left, right])
    diam = float(m.dist[np.ix_(both, both)].max())
    cross = float(m.dist[np.ix_(left, right)].sum())
    return left.size * right.size * diam / cross


def verify(m: Metric, t: WeightedTree, cuts: Optional[Sequence[CutRecord]] = None) -> StretchReport:
    """Measure stretch, dominance and per-cut ratios of a tree built from ``m``.

    Cut ratios are recomputed from ``m`` rather than read from the records.
    Violations are reported, never raised.
    """
    cuts = t.cuts if cuts is None else cuts
    if t.n_points != m.n:
        raise UnknownLeaf(sorted(set(range(m.n)) - set(t.leaf_of)))
    dt = leaf_distance_matrix(t)
    ok, worst = dominance(m.dist, dt)
    source = routing_cost(m)
    tree = tree_routing_cost(t)
    max_ratio = max((recompute_cut_ratio(m, c.left, c.right) for c in cuts), default=0.0)
    report = StretchReport(
        kind=t.kind,
        n=m.n,
        source_cost=source,
        tree_cost=tree,
        stretch=stretch_of(source, tree),
        bound=HST_BOUND if t.kind == "hst" else ULTRA_BOUND,
        max_cut_ratio=max_ratio,
        dominance_ok=ok,
        worst_pair=worst,
        scale=m.scale,
    )
    if not ok:
        report.violations.append("dominance")
    if not report.within_bound:
        report.violations.append("stretch")
    if not report.cuts_ok:
        report.violations.append("cut_ratio")
    return report
