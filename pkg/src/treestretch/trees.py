"""Small helpers shared by every tree representation."""
from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .errors import NotSpanning


def node_distance_matrix(parent: Sequence[int], edge_length: Sequence[float], root: int) -> np.ndarray:
    """All-pairs path lengths between tree nodes, filled in BFS order.

    A node visited after ``u`` is never an ancestor of ``u``, so its path to
    ``u`` runs through its own parent.
    """
    m = len(parent)
    children: List[List[int]] = [[] for _ in range(m)]
    for v, p in enumerate(parent):
        if p >= 0:
            children[p].append(v)
    order = [root]
    for v in order:
        order.extend(children[v])
    if len(order) != m:
        raise NotSpanning("parent links do not form a single tree")
    D = np.zeros((m, m))
    seen = np.empty(m, dtype=np.intp)
    seen[0] = root
    for t, v in enumerate(order[1:], start=1):
        prev = seen[:t]
        D[v, prev] = D[parent[v], prev] + edge_length[v]
        D[prev, v] = D[v, prev]
        seen[t] = v
    return D


def orient(n: int, edges: Sequence[Tuple[int, int, float]], root: int) -> Tuple[List[int], List[float], List[int]]:
    """Parent links, parent-edge lengths and BFS order of an undirected tree.

    Raises :class:`NotSpanning` unless the edges form a spanning tree on ``n`` vertices.
    """
    if len(edges) != n - 1:
        raise NotSpanning(f"a spanning tree on {n} vertices has {n - 1} edges, got {len(edges)}")
    adj: List[List[Tuple[int, float]]] = [[] for _ in range(n)]
    for u, v, w in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise NotSpanning(f"bad edge ({u}, {v})")
        adj[u].append((v, w))
        adj[v].append((u, w))
    parent = [-2] * n
    length = [0.0] * n
    parent[root] = -1
    order = [root]
    for u in order:
        for v, w in adj[u]:
            if parent[v] == -2:
                parent[v] = u
                length[v] = float(w)
                order.append(v)
    if len(order) != n:
        raise NotSpanning("edges do not connect every vertex")
    return parent, length, order
