"""Link streams, sub-streams, induced graphs and partitions of a stream's links.

A link stream is a time interval ``[alpha, omega]``, a node set and a
multiset of undirected instantaneous links ``(t, u, v)``.  Nodes are dense
integer ids backed by a label table (e-mail addresses, thread ids, ...).
Links are stored canonically with ``u < v`` and sorted by ``(t, u, v)``.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence, Union

Event = tuple[int, int, int]
Pair = tuple[int, int]


class StreamError(ValueError):
    """Raised when a stream, sub-stream or partition cannot be built."""


def canonical_pair(u, v) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LinkStream:
    """Immutable link stream ``(T, V, E)`` with ``T = [alpha, omega]``.

    ``labels`` is the node table shared by a stream and all sub-streams
    derived from it; ``nodes`` is the subset of table ids that belong to this
    stream.  ``self_loops`` counts interactions dropped at construction
    because both endpoints were the same node.
    """

    alpha: int
    omega: int
    nodes: frozenset[int]
    events: tuple[Event, ...]
    labels: tuple[Hashable, ...] = ()
    self_loops: int = 0

    def __post_init__(self):
        if self.alpha > self.omega:
            raise StreamError(f"alpha={self.alpha} is after omega={self.omega}")
        if not self.labels and self.nodes:
            object.__setattr__(self, "labels", tuple(range(max(self.nodes) + 1)))

    @classmethod
    def from_ids(cls, events: Iterable[Event], alpha: int, omega: int,
                 nodes: Iterable[int] = (), labels: Sequence[Hashable] = ()) -> "LinkStream":
        """Build a stream from integer-id triples, validating and canonicalizing them."""
        node_set = set(nodes)
        canon = []
        loops = 0
        for t, u, v in events:
            if not alpha <= t <= omega:
                raise StreamError(f"event {(t, u, v)} lies outside [{alpha}, {omega}]")
            if u == v:
                loops += 1
                continue
            if u > v:
                u, v = v, u
            canon.append((t, u, v))
            node_set.add(u)
            node_set.add(v)
        canon.sort()
        return cls(alpha, omega, frozenset(node_set), tuple(canon), tuple(labels), loops)

    @property
    def duration(self) -> int:
        return self.omega - self.alpha

    def __len__(self) -> int:
        return len(self.events)

    def label(self, node: int) -> Hashable:
        return self.labels[node]

    @cached_property
    def node_ids(self) -> dict[Hashable, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def pair_times(self) -> dict[Pair, list[int]]:
        """Sorted occurrence times of every linked pair (duplicates kept)."""
        out: dict[Pair, list[int]] = defaultdict(list)
        for t, u, v in self.events:
            out[(u, v)].append(t)
        return dict(out)

    def labeled_events(self) -> list[tuple[int, Hashable, Hashable]]:
        return [(t, self.labels[u], self.labels[v]) for t, u, v in self.events]


def _sort_labels(labels: Iterable[Hashable]) -> list[Hashable]:
    uniq = list(dict.fromkeys(labels))
    try:
        return sorted(uniq)
    except TypeError:
        return uniq


def build_stream(events: Iterable[tuple[int, Hashable, Hashable]], alpha: int, omega: int,
                 nodes: Iterable[Hashable] = ()) -> LinkStream:
    """Build a stream from ``(t, u_label, v_label)`` triples.

    Self-interactions are dropped and tallied in ``self_loops``.  Extra
    ``nodes`` are added to the node set even if they take part in no link.

    >>> s = build_stream([(5, "b", "c"), (5, "d", "e")], 0, 10)
    >>> len(s.events), len(s.nodes)
    (2, 4)
    """
    events = list(events)
    for ev in events:
        if not alpha <= ev[0] <= omega:
            raise StreamError(f"event {ev} lies outside [{alpha}, {omega}]")
    extra = list(nodes)
    endpoints = [x for _, u, v in events if u != v for x in (u, v)]
    labels = _sort_labels(endpoints + extra)
    ids = {lab: i for i, lab in enumerate(labels)}
    return LinkStream.from_ids(
        ((t, ids[u] if u in ids else -1, ids[v] if v in ids else -1) for t, u, v in events),
        alpha, omega, nodes=(ids[x] for x in extra), labels=labels,
    )


def induced_substream(stream: LinkStream, subset: Iterable[int]) -> LinkStream:
    """Largest sub-stream whose links all join nodes of ``subset``."""
    subset = frozenset(subset)
    foreign = subset - stream.nodes
    if foreign:
        raise StreamError(f"node {min(foreign)} is not in the stream")
    events = tuple(e for e in stream.events if e[1] in subset and e[2] in subset)
    return LinkStream(stream.alpha, stream.omega, subset, events, stream.labels)


@dataclass(frozen=True)
class StaticGraph:
    """Undirected graph with integer edge weights and no self-loops."""

    nodes: frozenset
    edges: Mapping[tuple, int] = field(default_factory=dict)

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise StreamError(f"self-loop on {u!r}")
            if u not in self.nodes or v not in self.nodes:
                raise StreamError(f"edge {(u, v)!r} has an endpoint outside the node set")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u, v) -> bool:
        return canonical_pair(u, v) in self.edges

    def weight(self, u, v) -> int:
        return self.edges.get(canonical_pair(u, v), 0)

    def degrees(self) -> dict:
        deg = dict.fromkeys(self.nodes, 0)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def subgraph(self, subset: Iterable) -> "StaticGraph":
        subset = frozenset(subset) & self.nodes
        return StaticGraph(subset, {e: w for e, w in self.edges.items()
                                    if e[0] in subset and e[1] in subset})


def induced_graph(stream: LinkStream) -> StaticGraph:
    """Graph of the nodes and pairs that appear in at least one link.

    Edge weights count the links of each pair.
    """
    weights = {pair: len(times) for pair, times in stream.pair_times.items()}
    nodes = frozenset(x for pair in weights for x in pair)
    return StaticGraph(nodes, weights)


@dataclass(frozen=True)
class IntercontactSeries:
    pair: Pair
    boundary_times: tuple[int, ...]
    gaps: tuple[int, ...]


def intercontact(stream: LinkStream, u: int, v: int,
                 padding: tuple[int, int] | None = None) -> IntercontactSeries:
    """Inter-contact times of the pair ``(u, v)``.

    The sorted occurrence times of the pair are padded with the bounds of
    ``padding`` (the stream's own ``[alpha, omega]`` by default).
    """
    if u == v:
        raise StreamError("inter-contact times need two distinct nodes")
    for x in (u, v):
        if x not in stream.nodes:
            raise StreamError(f"node {x} is not in the stream")
    lo, hi = padding if padding is not None else (stream.alpha, stream.omega)
    pair = canonical_pair(u, v)
    times = stream.pair_times.get(pair, [])
    if times and (times[0] < lo or times[-1] > hi):
        raise StreamError(f"padding [{lo}, {hi}] does not cover the pair's links")
    boundary = (lo, *times, hi)
    gaps = tuple(b - a for a, b in zip(boundary, boundary[1:]))
    return IntercontactSeries(pair, boundary, gaps)


@dataclass(frozen=True)
class SubStream:
    """One part ``P_i`` of a partition; bounds and nodes derive from its links."""

    index: int
    label: Hashable
    alpha: int
    omega: int
    nodes: frozenset[int]
    event_ids: tuple[int, ...]

    @property
    def duration(self) -> int:
        return self.omega - self.alpha

    def __len__(self) -> int:
        return len(self.event_ids)


class StreamPartition:
    """Disjoint split of a stream's links into non-empty sub-streams.

    Parts are indexed ``0..k-1`` in order of their first link; ``part_of[e]``
    is the part index of the ``e``-th link of the parent stream.
    """

    def __init__(self, stream: LinkStream, parts: Sequence[SubStream], part_of: Sequence[int]):
        self.stream = stream
        self.parts = tuple(parts)
        self.part_of = tuple(part_of)
        self.index_of = {p.label: p.index for p in self.parts}

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i: int) -> SubStream:
        return self.parts[i]

    @property
    def labels(self) -> list[Hashable]:
        return [p.label for p in self.parts]

    def part_events(self, i: int) -> list[Event]:
        ev = self.stream.events
        return [ev[e] for e in self.parts[i].event_ids]

    def as_stream(self, i: int) -> LinkStream:
        """Part ``i`` as a stand-alone stream over ``[alpha_i, omega_i]`` and ``V_i``."""
        p = self.parts[i]
        return LinkStream(p.alpha, p.omega, p.nodes, tuple(self.part_events(i)), self.stream.labels)

    @cached_property
    def part_pair_times(self) -> list[dict[Pair, list[int]]]:
        out: list[dict[Pair, list[int]]] = [defaultdict(list) for _ in self.parts]
        for (t, u, v), i in zip(self.stream.events, self.part_of):
            out[i][(u, v)].append(t)
        return [dict(d) for d in out]

    @cached_property
    def pair_index(self) -> dict[Pair, tuple[list[int], list[int]]]:
        """Per linked pair: sorted link times and the part index of each link."""
        out: dict[Pair, tuple[list[int], list[int]]] = {}
        for (t, u, v), i in zip(self.stream.events, self.part_of):
            entry = out.get((u, v))
            if entry is None:
                entry = out[(u, v)] = ([], [])
            entry[0].append(t)
            entry[1].append(i)
        return out

    def pair_links_between(self, pair: Pair, lo: int, hi: int) -> tuple[list[int], list[int]]:
        """Times and parts of the pair's links with ``lo <= t <= hi``."""
        entry = self.pair_index.get(pair)
        if entry is None:
            return [], []
        times, parts = entry
        a, b = bisect_left(times, lo), bisect_right(times, hi)
        return times[a:b], parts[a:b]

    @cached_property
    def parts_of_node(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for p in self.parts:
            for x in p.nodes:
                out[x].append(p.index)
        return {x: sorted(v) for x, v in out.items()}


Labeling = Union[Sequence[Hashable], Mapping[int, Hashable], Callable[[int, Event], Any]]


def partition_by_labels(stream: LinkStream, label: Labeling) -> StreamPartition:
    """Group the stream's links into parts by label.

    ``label`` maps event position to a part label: a sequence aligned with
    ``stream.events``, a mapping keyed by position, or a callable
    ``(position, event) -> label``.
    """
    if callable(label):
        lookup = lambda e: label(e, stream.events[e])  # noqa: E731
    else:
        if isinstance(label, Sequence) and len(label) != len(stream.events):
            raise StreamError(f"{len(label)} labels for {len(stream.events)} links")
        lookup = label.__getitem__
    order: dict[Hashable, int] = {}
    members: list[list[int]] = []
    part_of = []
    for e in range(len(stream.events)):
        try:
            lab = lookup(e)
        except (KeyError, IndexError):
            raise StreamError(f"link {e} {stream.events[e]} has no label") from None
        if lab is None:
            raise StreamError(f"link {e} {stream.events[e]} has no label")
        i = order.get(lab)
        if i is None:
            i = order[lab] = len(members)
            members.append([])
        members[i].append(e)
        part_of.append(i)
    parts = []
    events = stream.events
    for lab, i in order.items():
        ids = members[i]
        nodes = frozenset(x for e in ids for x in events[e][1:])
        parts.append(SubStream(i, lab, events[ids[0]][0], events[ids[-1]][0], nodes, tuple(ids)))
    return StreamPartition(stream, parts, part_of)
