"""Seeded random instances used by the test suites and the ``generate`` command."""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .metric import Metric, euclidean_distances, PointSet, validate_metric

FAMILIES_1D = ("uniform", "geometric", "two_cluster", "heavy_duplicate")


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_points(n: int, d: int = 2, seed=None) -> np.ndarray:
    """``n`` points uniform in the unit cube."""
    return rng_from(seed).random((n, d))


def planar_metric(n: int, seed=None) -> Metric:
    return validate_metric(euclidean_distances(PointSet(random_points(n, 2, seed))))


def graph_closure_metric(n: int, seed=None, extra_edges: float = 1.0, low=1.0, high=10.0) -> Metric:
    """Shortest-path distances of a random connected weighted graph.

    A random spanning tree guarantees connectivity; about ``extra_edges * n``
    further random edges create shortcuts.
    """
    rng = rng_from(seed)
    perm = rng.permutation(n)
    rows, cols = [], []
    for i in range(1, n):
        rows.append(perm[i])
        cols.append(perm[rng.integers(i)])
    n_extra = int(extra_edges * n)
    if n > 1:
        u = rng.integers(n, size=n_extra)
        v = rng.integers(n, size=n_extra)
        keep = u != v
        rows.extend(u[keep].tolist())
        cols.extend(v[keep].tolist())
    w = rng.uniform(low, high, size=len(rows))
    # keep the lightest copy of repeated edges; csr_matrix would add them up
    weight = {}
    for u, v, x in zip(rows, cols, w):
        key = (min(u, v), max(u, v))
        weight[key] = min(x, weight.get(key, np.inf))
    ij = np.array(list(weight), dtype=np.intp).reshape(-1, 2)
    g = csr_matrix((list(weight.values()), (ij[:, 0], ij[:, 1])), shape=(n, n))
    dist = shortest_path(g, method="D", directed=False)
    return validate_metric(dist)


def random_values(family: str, n: int, seed=None) -> np.ndarray:
    """Sorted 1-D values from one of :data:`FAMILIES_1D`."""
    rng = rng_from(seed)
    if family == "uniform":
        a = rng.random(n)
    elif family == "geometric":
        # distinct powers of two, exponents at most 40
        a = 2.0 ** np.sort(rng.choice(41, size=min(n, 41), replace=False))
        if n > 41:
            a = np.concatenate([a, rng.choice(a, size=n - 41)])
    elif family == "two_cluster":
        k = int(rng.integers(1, n)) if n > 1 else 1
        spread = 10.0 ** rng.uniform(-6, 0)
        a = np.concatenate([rng.random(k) * spread, 1.0 + rng.random(n - k) * spread])
    elif family == "heavy_duplicate":
        pool = rng.random(max(2, int(rng.integers(2, 6))))
        a = rng.choice(pool, size=n)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES_1D}")
    return np.sort(a)
