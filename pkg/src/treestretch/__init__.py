"""Dominating tree metrics and Euclidean spanning trees with checked routing-cost stretch."""

__version__ = "0.1.0"

from .cutlib import (
    DELTA0,
    CutResult,
    CutScan,
    SortedValues,
    brute_force_cut,
    constrained_cut,
    direct_scan,
    optimal_cut,
    scan,
)
from .errors import TreeStretchError
from .euclid import (
    SpanningTree,
    euclidean_spanning_tree,
    path_bound,
    spanning_tree_routing_cost,
    stretch_bound,
    verify_euclidean,
)
from .hst import (
    CutRecord,
    Decomposition,
    StretchReport,
    WeightedTree,
    build_hst,
    hierarchical_decompose,
    recursive_cut_tree,
    tree_distance,
    tree_routing_cost,
    verify,
)
from .metric import (
    BoundingBox,
    Metric,
    PointSet,
    bounding_box,
    cross_cost,
    diameter,
    metric_from_points,
    radius_wrt,
    routing_cost,
    validate_metric,
)
from .oracles import (
    OptimalCost,
    PathInstance,
    exhaustive_optimal_ultrametric,
    line_dp_optimal,
    lower_bound_ratio,
)
