import pytest
from hypothesis import given, settings

from conftest import digraph_from_rows, endpoint_tables
from kout.decompose import giant, one_in_core
from kout.digraph import RngSpec, generate
from kout.distance import (
    has_indegree_zero_vertex,
    is_strongly_connected,
    phase_sweep,
    typical_distance,
)


def test_typical_distance_3cycle(rows_3cycle):
    g = digraph_from_rows(rows_3cycle)
    s = typical_distance(g, 200, RngSpec(1))
    assert s.pairs_drawn == 200
    assert s.finite_count == 200  # strongly connected
    assert set(s.distances) <= {0, 1, 2}
    # distance 1 pairs exist and distance 0 only for equal endpoints
    assert any(d == 1 for d in s.distances)


def test_typical_distance_unreachable_excluded():
    g = digraph_from_rows([(0,), (1,)])
    s = typical_distance(g, 400, RngSpec(2))
    assert s.finite_count == len(s.distances)
    assert 0 < s.finite_count < 400  # cross pairs are unreachable
    assert all(d == 0 for d in s.distances)


def test_typical_distance_validates():
    g = digraph_from_rows([(0,)])
    with pytest.raises(ValueError):
        typical_distance(g, 0, RngSpec(1))


def test_strongly_connected_cases(rows_3cycle, rows_chain):
    assert is_strongly_connected(digraph_from_rows(rows_3cycle))
    assert not is_strongly_connected(digraph_from_rows(rows_chain))
    assert is_strongly_connected(digraph_from_rows([(0, 0)]))  # n = 1


def test_indegree_zero_implies_not_sc():
    g = digraph_from_rows([(1, 1), (1, 1)])  # vertex 0 has in-degree 0
    assert has_indegree_zero_vertex(g)
    assert not is_strongly_connected(g)


@settings(max_examples=60)
@given(endpoint_tables(max_n=9, max_k=3))
def test_sc_implies_full_giant_and_core(rows):
    g = digraph_from_rows(rows)
    if is_strongly_connected(g):
        assert giant(g).size == g.n
        assert one_in_core(g).size == g.n


def test_phase_sweep_shape_and_bounds():
    points = phase_sweep(60, 2, 4, 30, RngSpec(17))
    assert [p.k for p in points] == [2, 3, 4]
    for p in points:
        assert 0.0 <= p.fraction_strongly_connected <= 1.0
        assert 0.0 <= p.fraction_with_indeg_zero_vertex <= 1.0
        # in-degree-0 implies not strongly connected
        assert (
            p.fraction_with_indeg_zero_vertex
            <= 1.0 - p.fraction_strongly_connected + 1e-12
        )


def test_phase_sweep_deterministic():
    a = phase_sweep(50, 2, 3, 20, RngSpec(5))
    b = phase_sweep(50, 2, 3, 20, RngSpec(5))
    assert a == b


def test_phase_sweep_validates():
    with pytest.raises(ValueError):
        phase_sweep(10, 3, 2, 5, RngSpec(0))
    with pytest.raises(ValueError):
        phase_sweep(10, 2, 3, 0, RngSpec(0))


def test_typical_distance_matches_bfs_small():
    # cross-check sampled distances against a brute-force BFS on a fixed graph
    g = generate(30, 2, RngSpec(77, 3))
    rows = g.endpoints.tolist()

    def bfs(src, dst):
        if src == dst:
            return 0
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                for u in rows[v]:
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        return dist.get(dst)

    sample = typical_distance(g, 300, RngSpec(123, 9))
    finite = sum(1 for a in range(30) for b in range(30) if bfs(a, b) is not None)
    # the sampler's finite fraction should sit near the exact pair fraction
    assert abs(sample.finite_count / 300 - finite / 900) < 0.1
