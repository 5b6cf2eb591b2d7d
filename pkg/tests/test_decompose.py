import numpy as np
from hypothesis import given, settings

from conftest import digraph_from_rows, endpoint_tables
from kout.decompose import condense, decompose, giant, layers, one_in_core, scc
from kout.digraph import RngSpec, generate
from kout.oracle import brute_cycles, brute_giant, brute_one_in_core, brute_scc_sets


def test_scc_single_vertex():
    g = digraph_from_rows([(0, 0)])
    ids, members = scc(g)
    assert ids.tolist() == [0]
    assert [m.tolist() for m in members] == [[0]]


def test_scc_3cycle(rows_3cycle):
    g = digraph_from_rows(rows_3cycle)
    ids, members = scc(g)
    assert len(members) == 1
    assert members[0].tolist() == [0, 1, 2]


def test_scc_chain(rows_chain):
    g = digraph_from_rows(rows_chain)
    ids, members = scc(g)
    assert len(members) == 3
    # reverse topological: the sink {2} gets id 0
    assert ids.tolist() == [2, 1, 0]


def test_condense_chain(rows_chain):
    g = digraph_from_rows(rows_chain)
    sccs = scc(g)
    adjacency, closed = condense(g, sccs)
    assert [a.tolist() for a in adjacency] == [[], [0], [1]]
    assert closed.tolist() == [True, False, False]


def test_condense_3cycle(rows_3cycle):
    g = digraph_from_rows(rows_3cycle)
    adjacency, closed = condense(g, scc(g))
    assert [a.tolist() for a in adjacency] == [[]]
    assert closed.tolist() == [True]


def test_giant_3cycle(rows_3cycle):
    assert giant(digraph_from_rows(rows_3cycle)).tolist() == [0, 1, 2]


def test_giant_tie_break():
    # two disjoint closed 1-cycles: smallest label wins
    g = digraph_from_rows([(0,), (1,)])
    assert giant(g).tolist() == [0]


def test_one_in_core_hand_cases(rows_chain):
    all_loops = digraph_from_rows([(0, 0), (1, 1)])
    assert one_in_core(all_loops).tolist() == [0, 1]
    assert one_in_core(digraph_from_rows(rows_chain)).tolist() == [2]


def test_layers_hand_cases(rows_chain, rows_3cycle):
    assert layers(digraph_from_rows(rows_3cycle)) == (3, 3, 0, 0, True)
    assert layers(digraph_from_rows(rows_chain)) == (1, 1, 0, 2, True)


def test_all_reach_false_case():
    # two disjoint 1-cycles: vertex 1 cannot reach the giant {0}
    g = digraph_from_rows([(0,), (1,)])
    assert layers(g)[4] is False


def test_reverse_topological_numbering_random():
    for seed in range(20):
        g = generate(30, 2, RngSpec(1000, seed))
        ids, members = scc(g)
        adjacency, closed = condense(g, (ids, members))
        for c, succ in enumerate(adjacency):
            assert (succ < c).all(), "condensation arc must drop to a smaller id"
        assert closed.sum() >= 1
        # partition sanity
        assert sorted(v for m in members for v in m.tolist()) == list(range(g.n))


def test_scipy_and_tarjan_backends_agree():
    # same graph through both code paths (n=80 uses scipy, view below 64 uses Tarjan)
    from kout.decompose import _canonical_ids, _scipy_labels, _tarjan_labels

    for seed in range(10):
        g = generate(80, 2, RngSpec(77, seed))
        lt, nt = _tarjan_labels(g.endpoints)
        ls, ns = _scipy_labels(g.endpoints)
        assert nt == ns
        idt, _, _ = _canonical_ids(g.endpoints, lt, nt)
        ids, _, _ = _canonical_ids(g.endpoints, ls, ns)
        assert np.array_equal(idt, ids)


@settings(max_examples=80)
@given(endpoint_tables(max_n=10, max_k=3))
def test_scc_matches_brute(rows):
    g = digraph_from_rows(rows)
    _, members = scc(g)
    got = sorted(tuple(m.tolist()) for m in members)
    want = sorted(tuple(sorted(c)) for c in brute_scc_sets(rows))
    assert got == want


@settings(max_examples=80)
@given(endpoint_tables(max_n=10, max_k=3))
def test_giant_matches_brute(rows):
    g = digraph_from_rows(rows)
    assert frozenset(giant(g).tolist()) == brute_giant(rows)


@settings(max_examples=60)
@given(endpoint_tables(max_n=8, max_k=3))
def test_one_in_core_matches_brute(rows):
    g = digraph_from_rows(rows)
    assert frozenset(one_in_core(g).tolist()) == brute_one_in_core(rows)


@settings(max_examples=60)
@given(endpoint_tables(max_n=10, max_k=3))
def test_giant_within_core_and_closed(rows):
    g = digraph_from_rows(rows)
    d = decompose(g)
    core = set(d.one_in_core.tolist())
    assert set(d.giant.tolist()) <= core
    # no arcs leave the core, and every core vertex keeps an in-arc inside it
    indeg = {v: 0 for v in core}
    for v in core:
        for u in g.endpoints[v].tolist():
            assert u in core
            indeg[u] += 1
    assert all(c >= 1 for c in indeg.values())
    # no directed cycle intersects the complement of the core
    outside = set(range(g.n)) - core
    assert brute_cycles(rows, within=outside) == []


@settings(max_examples=60)
@given(endpoint_tables(max_n=10, max_k=3))
def test_single_closed_scc_implies_all_reach(rows):
    g = digraph_from_rows(rows)
    d = decompose(g)
    if int(d.closed.sum()) == 1:
        assert d.all_reach_giant


def test_peel_order_invariance():
    base = one_in_core(generate(200, 2, RngSpec(5, 0)))
    g = generate(200, 2, RngSpec(5, 0))
    for i in range(10):
        shuffled = one_in_core(g, shuffle_rng=np.random.default_rng(i))
        assert np.array_equal(shuffled, base)


def test_core_maximality_random():
    # adding any single outside vertex breaks the in-degree-1-inside property
    for seed in range(10):
        g = generate(40, 2, RngSpec(321, seed))
        core = set(one_in_core(g).tolist())
        for v in set(range(g.n)) - core:
            grown = core | {v}
            indeg = {u: 0 for u in grown}
            for w in grown:
                for u in g.endpoints[w].tolist():
                    if u in grown:
                        indeg[u] += 1
            assert min(indeg.values()) == 0


def test_monte_carlo_giant_density():
    sizes = []
    for i in range(30):
        g = generate(20_000, 2, RngSpec(99, i))
        sizes.append(giant(g).size)
    assert abs(np.mean(sizes) / 20_000 - 0.7968121300200199) < 0.01
