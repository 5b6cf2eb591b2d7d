"""Exact structural decomposition of a k-out digraph.

The decomposition is: strongly connected components, the condensation DAG,
the closed components (condensation sinks), the giant (largest closed SCC,
ties broken toward the smallest contained vertex label), and the one-in-core
(survivors of iterated deletion of in-degree-0 vertices).

Component ids are numbered in reverse topological order of the condensation
(every condensation arc goes from a higher id to a lower one), with ties
broken deterministically by the smallest vertex label in the component.  The
numbering is therefore a pure function of the digraph, independent of which
SCC backend ran: graphs below ``_SCIPY_MIN_N`` use an explicit-stack Tarjan
(cheaper than building a sparse matrix), larger ones go through
``scipy.sparse.csgraph``, which is also recursion-free and holds up at n=10^6.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cs_connected_components

from .digraph import KOutDigraph

__all__ = [
    "Decomposition",
    "scc",
    "condense",
    "giant",
    "one_in_core",
    "layers",
    "decompose",
]

_SCIPY_MIN_N = 64


@dataclass
class Decomposition:
    """The full structural decomposition of one digraph."""

    scc_id: np.ndarray  # (n,) component id per vertex, reverse-topo numbering
    scc_members: list[np.ndarray]  # ascending vertex ids, indexed by component id
    condensation: list[np.ndarray]  # per-component sorted successor ids, deduplicated
    closed: np.ndarray  # (n_scc,) True iff the component has no outgoing arc
    giant: np.ndarray  # sorted vertex ids of the largest closed SCC
    one_in_core: np.ndarray  # sorted vertex ids surviving in-degree-0 peeling
    all_reach_giant: bool

    @property
    def n_components(self) -> int:
        return len(self.scc_members)


# ---------------------------------------------------------------------------
# SCC backends


def _tarjan_labels(endpoints: np.ndarray) -> tuple[np.ndarray, int]:
    """Iterative Tarjan; labels come out in completion order (sinks first)."""
    n, k = endpoints.shape
    adj = endpoints.tolist()
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    ncomp = 0
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[list[int]] = [[root, 0]]
        while work:
            frame = work[-1]
            v = frame[0]
            if frame[1] == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            row = adj[v]
            i = frame[1]
            while i < k:
                u = row[i]
                i += 1
                if index[u] == -1:
                    frame[1] = i
                    work.append([u, 0])
                    descended = True
                    break
                if on_stack[u] and index[u] < low[v]:
                    low[v] = index[u]
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp[u] = ncomp
                    if u == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    return np.asarray(comp, dtype=np.int64), ncomp


def _scipy_labels(endpoints: np.ndarray) -> tuple[np.ndarray, int]:
    n, k = endpoints.shape
    mat = csr_matrix(
        (
            np.ones(n * k, dtype=np.int8),
            endpoints.ravel(),
            np.arange(0, n * k + 1, k),
        ),
        shape=(n, n),
    )
    ncomp, labels = _cs_connected_components(mat, directed=True, connection="strong")
    return labels.astype(np.int64), int(ncomp)


def _raw_labels(endpoints: np.ndarray) -> tuple[np.ndarray, int]:
    if endpoints.shape[0] < _SCIPY_MIN_N:
        return _tarjan_labels(endpoints)
    return _scipy_labels(endpoints)


def _component_edges(
    endpoints: np.ndarray, labels: np.ndarray, ncomp: int
) -> tuple[np.ndarray, np.ndarray]:
    """Deduplicated condensation arcs (self-arcs removed), in raw label space."""
    k = endpoints.shape[1]
    src = np.repeat(labels, k)
    dst = labels[endpoints.ravel()]
    ext = src != dst
    if not ext.any():
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    keys = np.unique(src[ext] * ncomp + dst[ext])
    return keys // ncomp, keys % ncomp


def _canonical_ids(
    endpoints: np.ndarray, labels: np.ndarray, ncomp: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Renumber raw labels into the canonical reverse-topological order.

    Returns (scc_id per vertex, condensation src, condensation dst), the arc
    arrays already mapped to canonical ids.
    """
    e_src, e_dst = _component_edges(endpoints, labels, ncomp)
    # Smallest vertex label per raw component: vertices are scanned in
    # ascending order, so the first occurrence of each label is its minimum.
    _, first_idx = np.unique(labels, return_index=True)
    min_label = first_idx.tolist()

    out_remaining = np.bincount(e_src, minlength=ncomp).tolist()
    pred_indptr = np.zeros(ncomp + 1, dtype=np.int64)
    np.cumsum(np.bincount(e_dst, minlength=ncomp), out=pred_indptr[1:])
    preds = e_src[np.argsort(e_dst, kind="stable")].tolist()
    indptr = pred_indptr.tolist()

    heap = [(min_label[c], c) for c in range(ncomp) if out_remaining[c] == 0]
    heapq.heapify(heap)
    new_id = [-1] * ncomp
    nxt = 0
    while heap:
        _, c = heapq.heappop(heap)
        new_id[c] = nxt
        nxt += 1
        for j in range(indptr[c], indptr[c + 1]):
            p = preds[j]
            out_remaining[p] -= 1
            if out_remaining[p] == 0:
                heapq.heappush(heap, (min_label[p], p))
    if nxt != ncomp:
        raise AssertionError("condensation had a cycle; SCC labels are inconsistent")
    new_id_arr = np.asarray(new_id, dtype=np.int64)
    return new_id_arr[labels], new_id_arr[e_src], new_id_arr[e_dst]


def _members_by_id(scc_id: np.ndarray, ncomp: int) -> list[np.ndarray]:
    order = np.argsort(scc_id, kind="stable")
    counts = np.bincount(scc_id, minlength=ncomp)
    return np.split(order, np.cumsum(counts)[:-1])


def _successor_lists(
    c_src: np.ndarray, c_dst: np.ndarray, ncomp: int
) -> list[np.ndarray]:
    succ: list[np.ndarray] = [np.empty(0, dtype=np.int64)] * ncomp
    if c_src.size:
        order = np.lexsort((c_dst, c_src))
        s, d = c_src[order], c_dst[order]
        counts = np.bincount(s, minlength=ncomp)
        chunks = np.split(d, np.cumsum(counts)[:-1])
        succ = list(chunks)
    return succ


# ---------------------------------------------------------------------------
# public operations


def scc(g: KOutDigraph) -> tuple[np.ndarray, list[np.ndarray]]:
    """Exact SCCs; ids in reverse topological order of the condensation."""
    labels, ncomp = _raw_labels(g.endpoints)
    scc_id, _, _ = _canonical_ids(g.endpoints, labels, ncomp)
    return scc_id, _members_by_id(scc_id, ncomp)


def condense(
    g: KOutDigraph, sccs: tuple[np.ndarray, list[np.ndarray]]
) -> tuple[list[np.ndarray], np.ndarray]:
    """Deduplicated condensation adjacency plus per-component closed flags."""
    scc_id, members = sccs
    ncomp = len(members)
    c_src, c_dst = _component_edges(g.endpoints, scc_id, ncomp)
    succ = _successor_lists(c_src, c_dst, ncomp)
    closed = np.array([s.size == 0 for s in succ], dtype=bool)
    return succ, closed


def _giant_from(members: list[np.ndarray], closed: np.ndarray) -> np.ndarray:
    best = None
    best_key = None
    for cid in np.flatnonzero(closed):
        m = members[cid]
        key = (m.size, -int(m[0]))  # members ascending, m[0] is the min label
        if best_key is None or key > best_key:
            best, best_key = m, key
    assert best is not None  # a finite DAG always has a sink
    return best


def giant(g: KOutDigraph) -> np.ndarray:
    """Vertex set of the largest closed SCC (ties: smallest contained label)."""
    sccs = scc(g)
    _, closed = condense(g, sccs)
    return _giant_from(sccs[1], closed)


def one_in_core(
    g: KOutDigraph, *, shuffle_rng: np.random.Generator | None = None
) -> np.ndarray:
    """Survivors of repeatedly deleting vertices with zero surviving in-degree.

    The result is the unique maximal vertex set inducing minimum in-degree
    >= 1 (equivalently: closed and surjective), so it is independent of the
    deletion order; ``shuffle_rng`` randomizes the processing order and is
    only useful for exercising exactly that invariant in tests.
    """
    return np.flatnonzero(_core_mask(g.endpoints, shuffle_rng))


def _core_mask(
    endpoints: np.ndarray, shuffle_rng: np.random.Generator | None = None
) -> np.ndarray:
    n, k = endpoints.shape
    indeg_arr = np.bincount(endpoints.ravel(), minlength=n)
    queue = np.flatnonzero(indeg_arr == 0).tolist()
    indeg = indeg_arr.tolist()
    removed = np.zeros(n, dtype=bool)
    rows = endpoints.tolist()
    while queue:
        if shuffle_rng is not None and len(queue) > 1:
            j = int(shuffle_rng.integers(len(queue)))
            queue[j], queue[-1] = queue[-1], queue[j]
        v = queue.pop()
        removed[v] = True
        for u in rows[v]:
            indeg[u] -= 1
            if indeg[u] == 0 and not removed[u]:
                queue.append(u)
    return ~removed


def _all_reach(endpoints: np.ndarray, target_mask: np.ndarray) -> bool:
    """True iff every vertex has a directed path into the target set."""
    visited = target_mask.copy()
    while True:
        hits = visited[endpoints].any(axis=1) & ~visited
        if not hits.any():
            return bool(visited.all())
        visited |= hits


def layers(g: KOutDigraph) -> tuple[int, int, int, int, bool]:
    """(|giant|, |core|, |core|-|giant|, n-|core|, every vertex reaches giant)."""
    d = decompose(g)
    gs, qs = d.giant.size, d.one_in_core.size
    return gs, qs, qs - gs, g.n - qs, d.all_reach_giant


def decompose(g: KOutDigraph) -> Decomposition:
    """Run the whole decomposition once; cheaper than calling the ops separately."""
    labels, ncomp = _raw_labels(g.endpoints)
    scc_id, c_src, c_dst = _canonical_ids(g.endpoints, labels, ncomp)
    members = _members_by_id(scc_id, ncomp)
    succ = _successor_lists(c_src, c_dst, ncomp)
    closed = np.ones(ncomp, dtype=bool)
    closed[c_src] = False
    giant_set = _giant_from(members, closed)
    core = np.flatnonzero(_core_mask(g.endpoints))
    giant_mask = np.zeros(g.n, dtype=bool)
    giant_mask[giant_set] = True
    return Decomposition(
        scc_id=scc_id,
        scc_members=members,
        condensation=succ,
        closed=closed,
        giant=giant_set,
        one_in_core=core,
        all_reach_giant=_all_reach(g.endpoints, giant_mask),
    )
