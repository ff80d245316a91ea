import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from treestretch.cutlib import DELTA0
from treestretch.errors import UnknownLeaf
from treestretch.generators import graph_closure_metric, planar_metric
from treestretch.hst import (
    HST_BOUND,
    WeightedTree,
    build_hst,
    hierarchical_decompose,
    leaf_distance_matrix,
    recursive_cut_tree,
    top_level,
    tree_distance,
    tree_routing_cost,
    verify,
)
from treestretch.metric import metric_from_points, validate_metric
from treestretch.oracles import line_dp_optimal

from conftest import equilateral, path_metric


def graph_distances(t):
    """Leaf-to-leaf path lengths from a generic shortest-path solver."""
    rows = [v for v, p in enumerate(t.parent) if p >= 0]
    cols = [t.parent[v] for v in rows]
    w = [t.edge_length[v] for v in rows]
    # zero-length edges would vanish from a sparse matrix
    w = [x if x > 0 else 1e-300 for x in w]
    g = csr_matrix((w, (rows, cols)), shape=(t.n_nodes, t.n_nodes))
    d = shortest_path(g, directed=False)
    leaves = [t.leaf_of[p] for p in range(t.n_points)]
    return d[np.ix_(leaves, leaves)]


def metrics(seed):
    return [planar_metric(24, seed), graph_closure_metric(24, seed)]


class TestTopLevel:
    @pytest.mark.parametrize("diam, i", [(0, 0), (1, 0), (2, 1), (2.5, 2), (4, 2), (4.0001, 3), (1024, 10)])
    def test_values(self, diam, i):
        assert top_level(diam) == i


class TestDecomposition:
    def test_single_point(self):
        dec = hierarchical_decompose(validate_metric([[0]]))
        assert dec.cuts == [] and dec.levels[0] == [(0,)]

    def test_equilateral(self):
        m = equilateral()
        dec = hierarchical_decompose(m)
        assert dec.delta == 1
        assert dec.levels[0] == [(0,), (1,), (2,)]
        first = dec.cuts[0]
        assert first.left == (0,) and first.right == (1, 2)
        assert first.ratio == pytest.approx(1.0)
        assert all(c.ratio <= DELTA0 + 1e-9 for c in dec.cuts)

    def test_path_cut_ratios(self):
        dec = hierarchical_decompose(path_metric(8, factor=2))
        assert dec.cuts
        for c in dec.cuts:
            q = len(c.cluster)
            assert c.ratio == pytest.approx(2 * (q - 1) / q, rel=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_structure(self, seed):
        for m in metrics(seed):
            dec = hierarchical_decompose(m)
            assert dec.levels[dec.delta] == [tuple(range(m.n))]
            assert all(len(c) == 1 for c in dec.levels[0])
            for i in range(dec.delta + 1):
                flat = sorted(p for c in dec.levels[i] for p in c)
                assert flat == list(range(m.n))
                for c in dec.levels[i]:
                    diam = m.dist[np.ix_(c, c)].max()
                    # the top level can sit exactly on a power of two
                    assert diam < 2.0**i if i < dec.delta else diam <= 2.0**i
            for i in range(dec.delta):
                for c, p in zip(dec.levels[i], dec.parents[i]):
                    assert set(c) <= set(dec.levels[i + 1][p])
            for rec in dec.cuts:
                assert set(rec.left) | set(rec.right) == set(rec.cluster)
                assert not set(rec.left) & set(rec.right)
                assert m.dist[rec.center, list(rec.cluster)].max() == rec.cluster_diameter
                assert rec.ratio <= rec.ratio_centripetal * (1 + 1e-12)
                assert rec.ratio <= DELTA0 + 1e-9

    @pytest.mark.parametrize("seed", range(3))
    def test_laminar(self, seed):
        dec = hierarchical_decompose(planar_metric(20, seed))
        family = [frozenset(c) for lvl in dec.levels for c in lvl]
        for a, b in itertools.combinations(family, 2):
            assert a <= b or b <= a or not a & b


class TestHST:
    def test_single_point(self):
        m = validate_metric([[0]])
        t = build_hst(hierarchical_decompose(m))
        assert t.n_nodes == 1 and tree_routing_cost(t) == 0
        assert verify(m, t).stretch == 1

    def test_equilateral(self):
        m = equilateral()
        t = build_hst(hierarchical_decompose(m))
        for u, v in itertools.combinations(range(3), 2):
            assert tree_distance(t, u, v) == 2
        assert tree_routing_cost(t) == 6
        rep = verify(m, t)
        assert rep.stretch == 1 and rep.ok

    def test_distance_self_and_unknown(self):
        t = build_hst(hierarchical_decompose(equilateral()))
        assert tree_distance(t, 1, 1) == 0
        with pytest.raises(UnknownLeaf):
            tree_distance(t, 0, 7)

    def test_star(self):
        t = WeightedTree(kind="hst", parent=[-1, 0, 0], edge_length=[0, 1.5, 1.5], point=[-1, 0, 1], root=0)
        assert tree_distance(t, 0, 1) == 3

    @pytest.mark.parametrize("seed", range(4))
    def test_against_shortest_paths(self, seed):
        for m in metrics(seed):
            t = build_hst(hierarchical_decompose(m))
            g = graph_distances(t)
            np.testing.assert_allclose(leaf_distance_matrix(t), g, rtol=1e-12, atol=1e-9)
            assert tree_routing_cost(t) == pytest.approx(np.triu(g, 1).sum(), rel=1e-9)
            # child edges hang at half the parent's scale
            for v, p in enumerate(t.parent):
                if p >= 0:
                    assert t.edge_length[v] == 2.0 ** (t.level[p] - 1)

    @pytest.mark.parametrize("seed", range(4))
    def test_bounds(self, seed):
        for m in metrics(seed):
            rep = verify(m, build_hst(hierarchical_decompose(m)))
            assert rep.dominance_ok and rep.ok
            assert 1 <= rep.stretch <= HST_BOUND + 1e-6

    @pytest.mark.parametrize("seed", range(3))
    def test_coresidence(self, seed):
        m = graph_closure_metric(20, seed)
        dec = hierarchical_decompose(m)
        dt = leaf_distance_matrix(build_hst(dec))
        for i in range(dec.delta + 1):
            for c in dec.levels[i]:
                sub = dt[np.ix_(c, c)]
                assert sub.max() <= 2.0 ** (i + 1) * (1 + 1e-9)

    def test_two_scale(self):
        rng = np.random.default_rng(7)
        pts = np.concatenate([rng.random((10, 2)) * 1e-3, 1e3 + rng.random((10, 2)) * 1e-3])
        m = metric_from_points(pts)
        for t in (build_hst(hierarchical_decompose(m)), recursive_cut_tree(m)):
            assert verify(m, t).ok

    def test_deterministic(self):
        m = graph_closure_metric(30, 4)
        a, b = build_hst(hierarchical_decompose(m)), build_hst(hierarchical_decompose(m))
        assert (a.parent, a.edge_length, a.point) == (b.parent, b.edge_length, b.point)


class TestUltrametric:
    def test_two_points(self):
        m = validate_metric([[0, 5], [5, 0]])
        t = recursive_cut_tree(m)
        assert t.label[t.root] / m.scale == 5
        assert verify(m, t).stretch == 1

    def test_equilateral(self):
        t = recursive_cut_tree(equilateral())
        assert t.label[t.root] == 2
        assert verify(equilateral(), t).stretch == 1

    @pytest.mark.parametrize("n", [2, 5, 16, 64])
    def test_path_below_two(self, n):
        m = path_metric(n)
        rep = verify(m, recursive_cut_tree(m))
        assert rep.stretch < 2
        assert rep.stretch >= line_dp_optimal(np.arange(1, n + 1.0)).ratio - 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_structure_and_bounds(self, seed):
        for m in metrics(seed):
            t = recursive_cut_tree(m)
            for v, p in enumerate(t.parent):
                if p >= 0:
                    assert t.label[v] <= t.label[p]
                    assert t.edge_length[v] == pytest.approx((t.label[p] - t.label[v]) / 2)
                if t.point[v] >= 0:
                    assert t.label[v] == 0
            # the label view and the path view agree
            np.testing.assert_allclose(leaf_distance_matrix(t), graph_distances(t), rtol=1e-12, atol=1e-9)
            dt = leaf_distance_matrix(t)
            brute = sum(tree_distance(t, u, v) for u, v in itertools.combinations(range(m.n), 2))
            assert tree_routing_cost(t) == pytest.approx(brute, rel=1e-9)
            assert np.allclose(dt, dt.T)
            rep = verify(m, t)
            assert rep.ok and rep.stretch <= DELTA0 + 1e-6


@given(st.integers(0, 2**32 - 1), st.integers(1, 16))
def test_random_small_metrics(seed, n):
    m = graph_closure_metric(n, seed)
    for t in (build_hst(hierarchical_decompose(m)), recursive_cut_tree(m)):
        rep = verify(m, t)
        assert rep.ok, rep.violations
        assert t.n_points == n


def test_shrunk_edge_is_reported():
    m = planar_metric(16, 2)
    t = build_hst(hierarchical_decompose(m))
    top = [v for v, p in enumerate(t.parent) if p == t.root]
    for v in top:
        t.edge_length[v] = 0.0
    rep = verify(m, t)
    assert not rep.dominance_ok and "dominance" in rep.violations
    u, v, d, dt = rep.worst_pair
    assert dt < d
