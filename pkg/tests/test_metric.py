import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treestretch.errors import (
    Asymmetric,
    CenterNotInSubset,
    DuplicatePoints,
    EmptySubset,
    NegativeDistance,
    NonFinite,
    NonSquare,
    NonZeroDiagonal,
    OverlappingSubsets,
    TriangleViolation,
    ZeroOffDiagonal,
)
from treestretch.metric import (
    PointSet,
    bounding_box,
    centripetal_values,
    cross_cost,
    diameter,
    diameter_center,
    metric_from_points,
    radius_wrt,
    routing_cost,
    validate_metric,
)

from conftest import equilateral, line_matrix, planar_points


def raw_path(n):
    # unnormalized view: Metric with scale 1 over |i - j|
    from treestretch.metric import Metric

    return Metric(line_matrix(np.arange(1, n + 1)), 1.0)


class TestValidate:
    def test_single_point(self):
        m = validate_metric([[0]])
        assert m.n == 1 and m.scale == 1

    def test_two_points_rescaled(self):
        m = validate_metric([[0, 1], [1, 0]])
        assert m.scale == 2
        np.testing.assert_array_equal(m.dist, [[0, 2], [2, 0]])

    def test_triangle_witness(self):
        with pytest.raises(TriangleViolation) as e:
            validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        assert (e.value.i, e.value.j, e.value.via) == (0, 2, 1)

    @pytest.mark.parametrize(
        "raw, err",
        [
            ([[0, 1, 2], [1, 0, 1]], NonSquare),
            ([[0, np.nan], [np.nan, 0]], NonFinite),
            ([[0, 1], [2, 0]], Asymmetric),
            ([[0, -1], [-1, 0]], NegativeDistance),
            ([[1, 1], [1, 0]], NonZeroDiagonal),
            ([[0, 0, 1], [0, 0, 1], [1, 1, 0]], ZeroOffDiagonal),
        ],
    )
    def test_rejections(self, raw, err):
        with pytest.raises(err):
            validate_metric(raw)

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            validate_metric([[0, -1], [-1, 0]])

    def test_triangle_tolerance_accepts_rounding(self):
        d = line_matrix([0.0, 0.1, 0.3])
        d[0, 2] = d[2, 0] = 0.3 * (1 + 1e-12)
        validate_metric(d)

    @given(planar_points(min_n=2))
    def test_normalized_min_distance(self, pts):
        if len(np.unique(pts, axis=0)) < len(pts):
            return
        m = metric_from_points(pts)
        off = ~np.eye(m.n, dtype=bool)
        assert m.dist[off].min() == pytest.approx(2.0, rel=1e-12)
        assert m.dist[off].min() >= 2.0
        direct = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
        np.testing.assert_allclose(m.unscale(m.dist), direct, rtol=1e-12, atol=1e-15)


class TestSubsetQueries:
    def test_singleton(self):
        m = equilateral()
        assert diameter(m, [1]) == 0
        assert routing_cost(m, [1]) == 0

    def test_equilateral(self):
        m = equilateral()
        assert diameter(m) == 2
        assert all(radius_wrt(m, None, c) == 2 for c in range(3))
        np.testing.assert_array_equal(centripetal_values(m, [0, 1, 2], 0).values, [0, 2, 2])

    def test_path_examples(self):
        m = raw_path(4)
        assert diameter(m) == 3
        assert radius_wrt(m, None, 1) == 2  # the point "2"
        np.testing.assert_array_equal(centripetal_values(m, None, 0).values, [0, 1, 2, 3])
        assert routing_cost(m) == 10
        assert cross_cost(m, [0, 1], [2, 3]) == 8

    def test_centripetal_singleton_and_order(self):
        m = raw_path(4)
        sv = centripetal_values(m, [2], 2)
        np.testing.assert_array_equal(sv.values, [0])
        sv = centripetal_values(m, [0, 1, 2, 3], 1)
        assert sv.order.tolist() == [1, 0, 2, 3]  # tie at distance 1 goes to the smaller index

    def test_errors(self):
        m = raw_path(4)
        with pytest.raises(EmptySubset):
            diameter(m, [])
        with pytest.raises(OverlappingSubsets):
            cross_cost(m, [0, 1], [1, 2])
        with pytest.raises(CenterNotInSubset):
            radius_wrt(m, [0, 1], 3)

    def test_diameter_center_smallest_index(self):
        m = raw_path(4)
        assert diameter_center(m) == (0, 3.0)


class TestPoints:
    def test_examples(self):
        assert metric_from_points([[0], [3]]).unscale(2.0) == pytest.approx(3)
        m = metric_from_points([[0, 0], [3, 4]])
        assert m.unscale(m.dist[0, 1]) == pytest.approx(5)
        sq = metric_from_points([[0, 0], [1, 0], [0, 1], [1, 1]])
        raw = np.sort(m_unscaled(sq)[np.triu_indices(4, 1)])
        np.testing.assert_allclose(raw, [1, 1, 1, 1, math.sqrt(2), math.sqrt(2)])

    def test_duplicates(self):
        with pytest.raises(DuplicatePoints) as e:
            metric_from_points([[0, 0], [1, 1], [0, 0]])
        assert (e.value.i, e.value.j) == (0, 2)

    def test_bounding_box(self):
        ps = PointSet([[0, 5], [2, 1], [1, 3]])
        box = bounding_box(ps)
        np.testing.assert_array_equal(box.low, [0, 1])
        np.testing.assert_array_equal(box.high, [2, 5])
        assert box.l_max == 4 and box.longest_axis == 1
        assert box.contains(ps.points)

    def test_longest_axis_tie(self):
        assert bounding_box([[0, 0], [1, 1]]).longest_axis == 0


def m_unscaled(m):
    return m.dist / m.scale


def random_metric(seed, n):
    pts = np.random.default_rng(seed).random((n, 3))
    return metric_from_points(pts)


@given(st.integers(0, 10**6), st.integers(2, 20), st.data())
def test_radius_diameter_sandwich(seed, n, data):
    m = random_metric(seed, n)
    s = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    c = data.draw(st.sampled_from(sorted(s)))
    r, dm = radius_wrt(m, s, c), diameter(m, s)
    assert r <= dm <= 2 * r + 1e-9
    assert dm == max(radius_wrt(m, s, x) for x in s)


@given(st.integers(0, 10**6), st.integers(2, 20), st.data())
def test_routing_cost_decomposition(seed, n, data):
    # exact on integer distances, so compare exactly
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 1000, size=n).astype(float)
    if len(set(pts)) < n:
        return
    from treestretch.metric import Metric

    m = Metric(line_matrix(pts), 1.0)
    mask = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    p = [i for i in range(n) if mask[i]]
    q = [i for i in range(n) if not mask[i]]
    if not p or not q:
        return
    assert routing_cost(m) == routing_cost(m, p) + routing_cost(m, q) + cross_cost(m, p, q)


@given(st.integers(0, 10**6), st.integers(2, 20), st.data())
def test_centripetal_properties(seed, n, data):
    m = random_metric(seed, n)
    s = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=2)))
    c, dm = diameter_center(m, s)
    sv = centripetal_values(m, s, c)
    assert sv.values[0] == 0 and sv.values[-1] == dm
    # centripetal differences never exceed true distances
    pos = {p: k for k, p in enumerate(sv.order)}
    for x in s:
        for y in s:
            assert abs(sv.values[pos[x]] - sv.values[pos[y]]) <= m.dist[x, y] + 1e-9


@given(st.integers(0, 10**6), st.floats(0.01, 100))
def test_scale_invariance(seed, c):
    from treestretch.metric import Metric

    m = random_metric(seed, 8)
    m2 = Metric(m.dist * c, 1.0)
    assert routing_cost(m2) == pytest.approx(c * routing_cost(m), rel=1e-12)
    assert diameter(m2) == pytest.approx(c * diameter(m), rel=1e-12)
