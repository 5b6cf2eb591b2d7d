from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kout.digraph import KOutDigraph

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def digraph_from_rows(rows) -> KOutDigraph:
    """Build a digraph from explicit endpoint rows, e.g. [(1, 1), (2, 2), (2, 2)]."""
    ep = np.asarray(rows, dtype=np.int64)
    return KOutDigraph(ep.shape[0], ep.shape[1], ep)


@st.composite
def endpoint_tables(draw, max_n: int = 10, max_k: int = 3):
    n = draw(st.integers(min_value=1, max_value=max_n))
    k = draw(st.integers(min_value=1, max_value=max_k))
    rows = draw(
        st.lists(
            st.lists(st.integers(min_value=0, max_value=n - 1), min_size=k, max_size=k),
            min_size=n,
            max_size=n,
        )
    )
    return rows


@pytest.fixture
def rows_chain():
    # worked example used across tests: 0 -> 1 twice, 1 -> 2 twice, 2 -> itself twice
    return [(1, 1), (2, 2), (2, 2)]


@pytest.fixture
def rows_3cycle():
    return [(1, 1), (2, 2), (0, 0)]
