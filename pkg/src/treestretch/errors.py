"""Exception hierarchy.

Every error carries a short ``kind`` string so the CLI can emit a
machine-readable error record without string-matching messages.
"""
from __future__ import annotations


class TreeStretchError(ValueError):
    kind = "error"


# --- metric / input validation -------------------------------------------


class MetricError(TreeStretchError):
    kind = "metric"


class NonSquare(MetricError):
    def __init__(self, shape):
        super().__init__(f"distance matrix must be square, got shape {shape}")
        self.shape = shape


class NonFinite(MetricError):
    def __init__(self, i, j):
        super().__init__(f"non-finite distance at ({i}, {j})")
        self.i, self.j = i, j


class Asymmetric(MetricError):
    def __init__(self, i, j):
        super().__init__(f"dist[{i}][{j}] != dist[{j}][{i}]")
        self.i, self.j = i, j


class NegativeDistance(MetricError):
    def __init__(self, i, j):
        super().__init__(f"negative distance at ({i}, {j})")
        self.i, self.j = i, j


class NonZeroDiagonal(MetricError):
    def __init__(self, i):
        super().__init__(f"dist[{i}][{i}] must be 0")
        self.i = i


class ZeroOffDiagonal(MetricError):
    def __init__(self, i, j):
        super().__init__(f"distinct points {i} and {j} are at distance 0")
        self.i, self.j = i, j


class TriangleViolation(MetricError):
    """``dist[i][j] > dist[i][via] + dist[via][j]`` beyond tolerance."""

    def __init__(self, i, j, via):
        super().__init__(
            f"triangle inequality violated: d({i},{j}) > d({i},{via}) + d({via},{j})"
        )
        self.i, self.j, self.via = i, j, via


class DuplicatePoints(MetricError):
    def __init__(self, i, j):
        super().__init__(f"points {i} and {j} coincide")
        self.i, self.j = i, j


class DimensionMismatch(MetricError):
    pass


# --- subsets --------------------------------------------------------------


class SubsetError(TreeStretchError):
    kind = "subset"


class EmptySubset(SubsetError):
    def __init__(self):
        super().__init__("subset is empty")


class OverlappingSubsets(SubsetError):
    def __init__(self, shared):
        super().__init__(f"subsets share indices {sorted(shared)[:10]}")
        self.shared = shared


class IndexOutOfRange(SubsetError):
    pass


class CenterNotInSubset(SubsetError):
    pass


# --- 1-D cuts -------------------------------------------------------------


class CutError(TreeStretchError):
    kind = "cut"


class TooFewValues(CutError):
    def __init__(self, n):
        super().__init__(f"need at least 2 values to cut, got {n}")
        self.n = n


class DegenerateDiameter(CutError):
    def __init__(self):
        super().__init__("all values are equal; there is nothing to cut")


class NotSorted(CutError):
    pass


class EmptyInterval(CutError):
    def __init__(self, lo, hi):
        super().__init__(f"interval [{lo}, {hi}] has no interior")
        self.lo, self.hi = lo, hi


class IntervalOutOfRange(CutError):
    def __init__(self, lo, hi, a1, an):
        super().__init__(f"interval [{lo}, {hi}] is not inside [{a1}, {an}]")


# --- trees ----------------------------------------------------------------


class TreeError(TreeStretchError):
    kind = "tree"


class UnknownLeaf(TreeError):
    def __init__(self, point):
        super().__init__(f"point {point} is not a leaf of this tree")
        self.point = point


class NotSpanning(TreeError):
    pass


class BadAlpha(TreeStretchError):
    kind = "usage"

    def __init__(self, alpha):
        super().__init__(f"alpha must lie in (0, 1/2), got {alpha}")
        self.alpha = alpha


class TooLarge(TreeStretchError):
    kind = "usage"


class ParseError(TreeStretchError):
    """Malformed input file."""

    kind = "parse"


class UsageError(TreeStretchError):
    kind = "usage"
