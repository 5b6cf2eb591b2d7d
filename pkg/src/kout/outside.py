"""Statistics of the part of the digraph outside the giant.

All distances and path lengths count arcs.  Cycles are elementary directed
cycles recorded as vertex sequences rotated to start at their smallest vertex;
parallel arcs do not multiply a cycle, and a self-loop is a cycle of length 1.
Arc counts (for the tree-plus-one-arc excess check) do include parallel arcs,
because they count arcs of the induced sub-digraph.

The heavy per-vertex work runs on an :class:`OutsideView`: the induced
subgraph on the complement of the giant, with vertices relabeled to a compact
local range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cs_connected_components

from .decompose import Decomposition
from .digraph import KOutDigraph
from .errors import ComponentCapError, CycleCapError

__all__ = [
    "OutsideView",
    "OutsideReport",
    "outside_view",
    "enumerate_cycles",
    "spectra",
    "distance_to_giant",
    "eccentricity_max",
    "longest_path",
    "max_full_spectrum",
    "outside_report",
]

CYCLE_CAP = 10_000
SCC_SIZE_CAP = 64
FALLBACK_MAX_N = 5_000

_SCIPY_MIN_LOCAL = 64


@dataclass
class OutsideView:
    """Induced subgraph on the vertices outside the giant."""

    n: int  # host digraph size
    vertices: np.ndarray  # sorted original ids
    adj: list[list[int]]  # local endpoints of arcs staying outside (with multiplicity)

    @property
    def size(self) -> int:
        return len(self.adj)


def outside_view(g: KOutDigraph, giant_set: np.ndarray) -> OutsideView:
    mask = np.ones(g.n, dtype=bool)
    mask[giant_set] = False
    verts = np.flatnonzero(mask)
    local_of = np.full(g.n, -1, dtype=np.int64)
    local_of[verts] = np.arange(verts.size)
    local = local_of[g.endpoints[verts]]
    adj = [[u for u in row if u >= 0] for row in local.tolist()]
    return OutsideView(n=g.n, vertices=verts, adj=adj)


# ---------------------------------------------------------------------------
# local SCC machinery (variable out-degree adjacency lists)


def _local_scc_labels(adj: list[list[int]]) -> tuple[list[int], int]:
    m = len(adj)
    if m == 0:
        return [], 0
    if m >= _SCIPY_MIN_LOCAL:
        lengths = np.fromiter((len(r) for r in adj), dtype=np.int64, count=m)
        indptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = np.fromiter(
            (u for row in adj for u in row), dtype=np.int64, count=int(indptr[-1])
        )
        mat = csr_matrix(
            (np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(m, m)
        )
        ncomp, labels = _cs_connected_components(mat, directed=True, connection="strong")
        return labels.tolist(), int(ncomp)
    # iterative Tarjan on list adjacency
    index = [-1] * m
    low = [0] * m
    on_stack = [False] * m
    comp = [-1] * m
    stack: list[int] = []
    ncomp = 0
    counter = 0
    for root in range(m):
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
            while i < len(row):
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
    return comp, ncomp


# ---------------------------------------------------------------------------
# cycles


def _johnson_cycles_from(
    start: int, adj: dict[int, list[int]], emit: list[list[int]], cap: int
) -> None:
    """All elementary cycles through ``start`` in the subgraph ``adj``
    (Johnson's search, iterative).  Raises once ``emit`` outgrows ``cap`` so a
    pathological instance fails loudly instead of exhausting memory."""
    blocked = {start}
    barrier: dict[int, set[int]] = {}
    path = [start]
    closed = [False]
    stack = [iter(adj[start])]
    while stack:
        advanced = False
        for w in stack[-1]:
            if w == start:
                if len(emit) >= cap:
                    raise CycleCapError(cap)
                emit.append(path.copy())
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                closed.append(False)
                blocked.add(w)
                stack.append(iter(adj[w]))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        v = path.pop()
        if closed.pop():
            if closed:
                closed[-1] = True
            unblock = [v]
            while unblock:
                u = unblock.pop()
                if u in blocked:
                    blocked.remove(u)
                    unblock.extend(barrier.pop(u, ()))
        else:
            for w in adj[v]:
                barrier.setdefault(w, set()).add(v)


def _rotate_min(cycle: list[int]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def enumerate_cycles(
    view: OutsideView, cap: int = CYCLE_CAP
) -> tuple[list[list[int]], bool]:
    """All elementary directed cycles of the view, plus a disjointness flag.

    Cycles are returned in original vertex ids, each rotated to start at its
    smallest vertex, sorted.  ``vertex_disjoint`` is True iff no vertex lies
    on two distinct cycles.  Raises :class:`CycleCapError` beyond ``cap``
    cycles; the limit laws make the count O_p(1), so hitting the cap flags a
    pathological instance rather than silently truncating.
    """
    found: list[tuple[int, ...]] = []
    # self-loops: length-1 cycles, one per vertex regardless of multiplicity
    for v, row in enumerate(view.adj):
        if v in row:
            found.append((v,))
    # longer cycles live inside nontrivial SCCs of the loop-free simple graph
    simple_adj = [sorted(set(row) - {v}) for v, row in enumerate(view.adj)]
    labels, ncomp = _local_scc_labels(simple_adj)
    groups: dict[int, set[int]] = {}
    for v, c in enumerate(labels):
        groups.setdefault(c, set()).add(v)
    components = [g for g in groups.values() if len(g) >= 2]
    emitted: list[list[int]] = []
    while components:
        comp = components.pop()
        sub = {v: [u for u in simple_adj[v] if u in comp] for v in comp}
        root = min(comp)
        _johnson_cycles_from(root, sub, emitted, cap - len(found))
        comp.discard(root)
        rest = {v: [u for u in sub[v] if u != root] for v in comp}
        if rest:
            rest_ids = sorted(rest)
            pos = {v: i for i, v in enumerate(rest_ids)}
            packed = [[pos[u] for u in rest[v]] for v in rest_ids]
            sub_labels, _ = _local_scc_labels(packed)
            sub_groups: dict[int, set[int]] = {}
            for i, c in enumerate(sub_labels):
                sub_groups.setdefault(c, set()).add(rest_ids[i])
            components.extend(g for g in sub_groups.values() if len(g) >= 2)
    found.extend(_rotate_min(c) for c in emitted)
    if len(found) > cap:
        raise CycleCapError(cap)
    found = sorted(set(found))
    seen: set[int] = set()
    disjoint = True
    for cyc in found:
        if disjoint and any(v in seen for v in cyc):
            disjoint = False
        seen.update(cyc)
    out = [[int(view.vertices[v]) for v in cyc] for cyc in found]
    return out, disjoint


# ---------------------------------------------------------------------------
# per-vertex forward scan (spectra, eccentricities, arc excess)


class _ScanResult(NamedTuple):
    sizes: np.ndarray
    eccs: np.ndarray
    excess: np.ndarray
    outside_r_counts: np.ndarray | None  # spectrum members outside the giant's sweep


def _scan(view: OutsideView, not_r_local: np.ndarray | None = None) -> _ScanResult:
    m = view.size
    adj = view.adj
    mark = [-1] * m
    sizes = np.zeros(m, dtype=np.int64)
    eccs = np.zeros(m, dtype=np.int64)
    excess = np.zeros(m, dtype=np.int64)
    counts = np.zeros(m, dtype=np.int64) if not_r_local is not None else None
    notr = not_r_local.tolist() if not_r_local is not None else None
    for s in range(m):
        mark[s] = s
        order = [s]
        dist = [0]
        head = 0
        while head < len(order):
            v = order[head]
            dv = dist[head]
            head += 1
            for u in adj[v]:
                if mark[u] != s:
                    mark[u] = s
                    order.append(u)
                    dist.append(dv + 1)
        arcs = 0
        for v in order:
            for u in adj[v]:
                if mark[u] == s:
                    arcs += 1
        sizes[s] = len(order)
        eccs[s] = dist[-1]
        excess[s] = arcs - len(order)
        if counts is not None:
            counts[s] = sum(1 for v in order if notr[v])
    return _ScanResult(sizes, eccs, excess, counts)


def spectra(view: OutsideView) -> tuple[np.ndarray, int, int]:
    """Per-vertex spectrum sizes inside the view, their max, and the number of
    vertices whose spectrum induces at least one arc more than its size."""
    r = _scan(view)
    max_spec = int(r.sizes.max()) if r.sizes.size else 0
    violations = int((r.excess >= 1).sum())
    return r.sizes, max_spec, violations


def eccentricity_max(view: OutsideView) -> int:
    """Largest finite BFS distance between two view vertices."""
    r = _scan(view)
    return int(r.eccs.max()) if r.eccs.size else 0


# ---------------------------------------------------------------------------
# distances to and from the giant


class GiantDistances(NamedTuple):
    w: int  # max over reached outside vertices of the distance into the giant
    unreached: int  # outside vertices with no path to the giant (excluded from w)
    dist: np.ndarray  # (n,) arc distance to the giant; -1 if unreachable


def distance_to_giant(g: KOutDigraph, giant_set: np.ndarray) -> GiantDistances:
    """Multi-source BFS from the giant along reversed arcs, level-synchronous."""
    visited = np.zeros(g.n, dtype=bool)
    visited[giant_set] = True
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[giant_set] = 0
    level = 0
    while True:
        hits = visited[g.endpoints].any(axis=1) & ~visited
        if not hits.any():
            break
        level += 1
        dist[hits] = level
        visited |= hits
    return GiantDistances(w=level, unreached=int((~visited).sum()), dist=dist)


def _reachable_from(endpoints: np.ndarray, sources: np.ndarray, n: int) -> np.ndarray:
    visited = np.zeros(n, dtype=bool)
    visited[sources] = True
    frontier = np.asarray(sources)
    while frontier.size:
        nxt = np.unique(endpoints[frontier].ravel())
        nxt = nxt[~visited[nxt]]
        visited[nxt] = True
        frontier = nxt
    return visited


# ---------------------------------------------------------------------------
# longest simple path


def _within_longest(
    comp: list[int], adj_c: dict[int, list[int]], cap: int
) -> dict[int, dict[int, int]]:
    """All-pairs longest simple path lengths inside one strongly connected
    component, by exhaustive search.  Exponential in principle; in this model
    these components are short cycles with overwhelming probability."""
    if len(comp) > cap:
        raise ComponentCapError(len(comp), cap)
    pos = {v: i for i, v in enumerate(comp)}
    best: dict[int, dict[int, int]] = {}
    for u in comp:
        bu = {u: 0}
        stack = [(u, 1 << pos[u], 0)]
        while stack:
            v, mask, length = stack.pop()
            for w in adj_c[v]:
                bit = 1 << pos[w]
                if not mask & bit:
                    nl = length + 1
                    if nl > bu.get(w, -1):
                        bu[w] = nl
                    stack.append((w, mask | bit, nl))
        best[u] = bu
    return best


def longest_path(view: OutsideView, scc_cap: int = SCC_SIZE_CAP) -> int:
    """Exact length (in arcs) of the longest simple directed path in the view.

    Standard longest-path DP over the condensation; passage through a
    nontrivial SCC is resolved exactly by exhaustive search over its simple
    paths, which errors out above ``scc_cap`` vertices.
    """
    m = view.size
    if m == 0:
        return 0
    simple_adj = [sorted(set(row) - {v}) for v, row in enumerate(view.adj)]
    labels, ncomp = _local_scc_labels(simple_adj)
    members: list[list[int]] = [[] for _ in range(ncomp)]
    for v, c in enumerate(labels):
        members[c].append(v)
    # Kahn topological order over component arcs
    succ_pairs: set[tuple[int, int]] = set()
    for v in range(m):
        cv = labels[v]
        for u in simple_adj[v]:
            cu = labels[u]
            if cu != cv:
                succ_pairs.add((cv, cu))
    indeg = [0] * ncomp
    succ: list[list[int]] = [[] for _ in range(ncomp)]
    for a, b in succ_pairs:
        succ[a].append(b)
        indeg[b] += 1
    topo = [c for c in range(ncomp) if indeg[c] == 0]
    head = 0
    while head < len(topo):
        c = topo[head]
        head += 1
        for b in succ[c]:
            indeg[b] -= 1
            if indeg[b] == 0:
                topo.append(b)

    best_in = [0] * m  # longest path arriving at v from earlier components
    overall = 0
    for c in topo:
        comp = members[c]
        if len(comp) == 1:
            best_end = {comp[0]: best_in[comp[0]]}
        else:
            adj_c = {v: [u for u in simple_adj[v] if labels[u] == c] for v in comp}
            within = _within_longest(comp, adj_c, scc_cap)
            best_end = {}
            for w in comp:
                best_end[w] = max(
                    best_in[u] + within[u].get(w, -(1 << 30)) for u in comp
                )
        for w, val in best_end.items():
            if val > overall:
                overall = val
            bump = val + 1
            for x in simple_adj[w]:
                if labels[x] != c and bump > best_in[x]:
                    best_in[x] = bump
    return overall


# ---------------------------------------------------------------------------
# full-digraph spectra


def max_full_spectrum(
    g: KOutDigraph, dec: Decomposition, fallback_max_n: int = FALLBACK_MAX_N
) -> tuple[int, int]:
    """(max over all vertices of |Spec(v)|, |Spec(vertex 0)|).

    When every vertex reaches the giant, |Spec(v)| decomposes exactly as
    |Spec_out(v) minus R| + |R| with R the set reachable from the giant, so one
    forward sweep plus the outside scan suffices.  Otherwise falls back to
    exact per-component reachability over the condensation (bitsets), which is
    only sensible at small n.
    """
    if dec.all_reach_giant:
        r_mask = _reachable_from(g.endpoints, dec.giant, g.n)
        r_size = int(r_mask.sum())
        view = outside_view(g, dec.giant)
        if view.size == 0:
            return r_size, r_size
        scan = _scan(view, not_r_local=~r_mask[view.vertices])
        assert scan.outside_r_counts is not None
        best = int(scan.outside_r_counts.max()) + r_size
        best = max(best, r_size)
        if r_mask[0]:
            spec0 = r_size
        else:
            loc0 = int(np.searchsorted(view.vertices, 0))
            spec0 = int(scan.outside_r_counts[loc0]) + r_size
        return best, spec0
    if g.n > fallback_max_n:
        raise ValueError(
            f"exact reachability fallback limited to n <= {fallback_max_n}, got n={g.n}"
        )
    ncomp = dec.n_components
    sizes = [m.size for m in dec.scc_members]
    reach = [0] * ncomp
    totals = [0] * ncomp
    for c in range(ncomp):  # ids are reverse-topological: successors come first
        mask = 1 << c
        for s in dec.condensation[c]:
            mask |= reach[s]
        reach[c] = mask
        t = 0
        bits = mask
        while bits:
            low = bits & -bits
            t += sizes[low.bit_length() - 1]
            bits ^= low
        totals[c] = t
    per_vertex = [totals[c] for c in dec.scc_id.tolist()]
    return max(per_vertex), per_vertex[0]


# ---------------------------------------------------------------------------
# composite report


@dataclass
class OutsideReport:
    """Everything measured on the induced subgraph outside the giant.

    Fields are None when their statistic group was not collected; the two
    full-spectrum fields are additionally None when some vertex misses the
    giant on an instance too large for the exact fallback.
    """

    cycles: list[list[int]] | None  # original vertex ids, min-rotated, sorted
    cycles_by_length: dict[int, int] | None
    total_cycles: int | None
    vertex_disjoint: bool | None
    longest_cycle: int | None
    spectra_sizes: np.ndarray | None  # indexed like sorted outside vertices
    max_spectrum: int | None
    arc_excess_violations: int | None
    w: int | None
    w_unreachable: int | None
    d: int | None
    m: int | None
    max_full_spectrum: int | None
    spectrum_of_zero: int | None


FULL_COLLECT = frozenset({"cycles", "spectra", "distances"})


def outside_report(
    g: KOutDigraph,
    dec: Decomposition,
    cycle_cap: int = CYCLE_CAP,
    scc_cap: int = SCC_SIZE_CAP,
    collect: frozenset[str] = FULL_COLLECT,
) -> OutsideReport:
    """Compute the report, sharing one per-vertex scan across statistics.

    ``collect`` selects statistic groups ("cycles", "spectra", "distances");
    skipped groups come back as None.  The default computes everything.
    """
    unknown = collect - FULL_COLLECT
    if unknown:
        raise ValueError(f"unknown collect groups: {sorted(unknown)}")
    view = outside_view(g, dec.giant)

    cycles: list[list[int]] | None = None
    by_len: dict[int, int] | None = None
    disjoint = None
    if "cycles" in collect:
        cycles, disjoint = enumerate_cycles(view, cap=cycle_cap)
        by_len = {}
        for c in cycles:
            by_len[len(c)] = by_len.get(len(c), 0) + 1

    scan = None
    maxfull = spec0 = None
    m_stat = None
    if "spectra" in collect:
        if dec.all_reach_giant:
            r_mask = _reachable_from(g.endpoints, dec.giant, g.n)
            r_size = int(r_mask.sum())
            if view.size == 0:
                maxfull = spec0 = r_size
            else:
                scan = _scan(view, not_r_local=~r_mask[view.vertices])
                assert scan.outside_r_counts is not None
                maxfull = max(int(scan.outside_r_counts.max()) + r_size, r_size)
                if r_mask[0]:
                    spec0 = r_size
                else:
                    loc0 = int(np.searchsorted(view.vertices, 0))
                    spec0 = int(scan.outside_r_counts[loc0]) + r_size
        elif g.n <= FALLBACK_MAX_N:
            scan = _scan(view) if view.size else None
            maxfull, spec0 = max_full_spectrum(g, dec)
        else:
            # Exact full-graph spectra are unsupported at this size when some
            # vertex misses the giant; all_reach_giant=False flags the gap.
            scan = _scan(view) if view.size else None
        m_stat = longest_path(view, scc_cap=scc_cap)

    dist = distance_to_giant(g, dec.giant) if "distances" in collect else None
    return OutsideReport(
        cycles=cycles,
        cycles_by_length=by_len,
        total_cycles=len(cycles) if cycles is not None else None,
        vertex_disjoint=disjoint,
        longest_cycle=(max(by_len) if by_len else 0) if by_len is not None else None,
        spectra_sizes=scan.sizes if scan is not None else None,
        max_spectrum=(
            (int(scan.sizes.max()) if scan is not None and scan.sizes.size else 0)
            if "spectra" in collect
            else None
        ),
        arc_excess_violations=(
            (int((scan.excess >= 1).sum()) if scan is not None else 0)
            if "spectra" in collect
            else None
        ),
        w=dist.w if dist is not None else None,
        w_unreachable=dist.unreached if dist is not None else None,
        d=(
            (int(scan.eccs.max()) if scan is not None and scan.eccs.size else 0)
            if "spectra" in collect
            else None
        ),
        m=m_stat,
        max_full_spectrum=maxfull,
        spectrum_of_zero=spec0,
    )
