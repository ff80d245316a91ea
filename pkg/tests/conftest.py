import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from treestretch.metric import validate_metric

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def line_matrix(values):
    a = np.asarray(values, dtype=float)
    return np.abs(np.subtract.outer(a, a))


def path_metric(n, factor=1.0):
    return validate_metric(line_matrix(np.arange(1, n + 1) * factor))


def equilateral(n=3, side=2.0):
    d = np.full((n, n), side)
    np.fill_diagonal(d, 0.0)
    return validate_metric(d)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


finite_reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def value_lists(draw, min_size=2, max_size=60):
    """Sorted reals with at least two distinct values; duplicates are common."""
    pool = draw(st.lists(finite_reals, min_size=2, max_size=8, unique=True))
    vals = draw(st.lists(st.sampled_from(pool), min_size=min_size, max_size=max_size))
    vals += pool[:2]
    return sorted(vals)


@st.composite
def planar_points(draw, min_n=1, max_n=24):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).random((n, 2))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
