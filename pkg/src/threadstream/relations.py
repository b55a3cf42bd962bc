"""Relations between the parts of a partitioned stream.

* temporal overlap graph: parts whose activity intervals intersect;
* node overlap graph: parts that share a node;
* quotient graph of a static graph under a vertex partition;
* quotient stream: parts ``i`` and ``j`` interact at ``t`` when a node has a
  link in ``P_j`` at ``t`` that falls between two of its links in ``P_i``.

Vertices of the overlap graphs and the quotient stream are part indices.
"""
from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

from .stream import LinkStream, StaticGraph, StreamError, StreamPartition


class OverlapLimitError(RuntimeError):
    """The node overlap graph would exceed the configured edge cap."""


@dataclass(frozen=True)
class OverlapGraph:
    graph: StaticGraph
    kind: Literal["temporal", "node"]

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges


def temporal_overlap_graph(partition: StreamPartition, stats: dict | None = None) -> OverlapGraph:
    """Edge ``(i, j)`` iff the closed intervals of parts ``i`` and ``j`` intersect.

    Sweeps the parts by start time while keeping the still-open ones in a
    heap keyed by end time, so every active part tested against a new one
    yields an edge: O(k log k + edges).  When ``stats`` is given it receives
    the number of pair tests and heap pops.
    """
    order = sorted(range(len(partition)), key=lambda i: (partition[i].alpha, i))
    heap: list[tuple[int, int]] = []
    active: dict[int, int] = {}
    edges: dict[tuple[int, int], int] = {}
    tests = pops = 0
    for i in order:
        start = partition[i].alpha
        while heap and heap[0][0] < start:
            _, j = heapq.heappop(heap)
            del active[j]
            pops += 1
        for j in active:
            tests += 1
            edges[(i, j) if i < j else (j, i)] = 1
        active[i] = partition[i].omega
        heapq.heappush(heap, (partition[i].omega, i))
    if stats is not None:
        stats.update(pair_tests=tests, heap_pops=pops)
    return OverlapGraph(StaticGraph(frozenset(range(len(partition))), edges), "temporal")


def node_overlap_graph(partition: StreamPartition, max_edges: int | None = None) -> OverlapGraph:
    """Edge ``(i, j)`` iff parts ``i`` and ``j`` share a node.

    Built as the union of the cliques over the parts of each node; the edge
    weight is the number of shared nodes.
    """
    weights: Counter = Counter()
    for parts in partition.parts_of_node.values():
        weights.update(combinations(parts, 2))
        if max_edges is not None and len(weights) > max_edges:
            raise OverlapLimitError(f"node overlap graph exceeds {max_edges} edges")
    edges = {pair: weights[pair] for pair in sorted(weights)}
    return OverlapGraph(StaticGraph(frozenset(range(len(partition))), edges), "node")


def quotient_graph(g: StaticGraph, communities) -> StaticGraph:
    """One vertex per community; edge weight counts the edges joining two communities."""
    comms = [frozenset(c) for c in communities]
    where = {}
    for i, c in enumerate(comms):
        for x in c:
            if x in where:
                raise StreamError(f"vertex {x!r} is in two communities")
            where[x] = i
    if set(where) != set(g.nodes):
        raise StreamError("communities do not partition the vertex set")
    weights: Counter = Counter()
    for u, v in g.edges:
        a, b = where[u], where[v]
        if a != b:
            weights[(a, b) if a < b else (b, a)] += 1
    return StaticGraph(frozenset(range(len(comms))), dict(sorted(weights.items())))


@dataclass(frozen=True)
class QuotientStream:
    """Stream over part indices with one link per distinct ``(t, i, j)``.

    ``multiplicity`` counts the witnesses of each link: (direction, link of
    the bracketed part, shared node) triples.  ``directions`` records which
    ordered ``(bracketing part, bracketed part)`` pairs produced it.
    """

    stream: LinkStream
    multiplicity: dict[tuple[int, int, int], int]
    directions: dict[tuple[int, int, int], frozenset[tuple[int, int]]]

    @property
    def connected_parts(self) -> set[int]:
        return {x for _, u, v in self.stream.events for x in (u, v)}


def _assemble_quotient(stream: LinkStream, k: int, witnesses) -> QuotientStream:
    """Build the quotient from ``(t, i, j, event_id, node)`` witnesses, ``i`` bracketing."""
    mult: Counter = Counter()
    dirs: dict[tuple[int, int, int], set] = defaultdict(set)
    for t, i, j, _, _ in witnesses:
        key = (t, i, j) if i < j else (t, j, i)
        mult[key] += 1
        dirs[key].add((i, j))
    keys = sorted(mult)
    qs = LinkStream(stream.alpha, stream.omega, frozenset(range(k)), tuple(keys), tuple(range(k)))
    return QuotientStream(qs, {key: mult[key] for key in keys},
                          {key: frozenset(dirs[key]) for key in keys})


def quotient_stream(partition: StreamPartition) -> QuotientStream:
    """Quotient stream of ``partition`` over the parent's ``[alpha, omega]``.

    For each node, its activity span inside every part it touches is
    compared with its links in the other parts.
    """
    stream = partition.stream
    # node -> (sorted times, parts, event ids) of its links
    per_node: dict[int, tuple[list, list, list]] = defaultdict(lambda: ([], [], []))
    for e, ((t, u, v), p) in enumerate(zip(stream.events, partition.part_of)):
        for x in (u, v):
            ts, ps, es = per_node[x]
            ts.append(t)
            ps.append(p)
            es.append(e)
    witnesses = []
    for x, (ts, ps, es) in per_node.items():
        spans: dict[int, list[int]] = {}
        for t, p in zip(ts, ps):
            sp = spans.get(p)
            if sp is None:
                spans[p] = [t, t]
            else:
                sp[1] = t
        if len(spans) < 2:
            continue
        for i, (first, last) in spans.items():
            a, b = bisect_left(ts, first), bisect_right(ts, last)
            for n in range(a, b):
                j = ps[n]
                if j != i:
                    witnesses.append((ts[n], i, j, es[n], x))
    return _assemble_quotient(stream, len(partition), witnesses)


def degree_series(g) -> dict[int, int]:
    """Vertex -> degree for a static graph, overlap graph or quotient stream."""
    if isinstance(g, OverlapGraph):
        g = g.graph
    elif isinstance(g, QuotientStream):
        nodes = g.stream.nodes
        edges = {(u, v): 1 for _, u, v in g.stream.events}
        g = StaticGraph(nodes, edges)
    return dict(sorted(g.degrees().items()))
