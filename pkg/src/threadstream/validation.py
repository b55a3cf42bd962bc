"""Brute-force oracles and a synthetic generator with planted threads.

The oracles deliberately avoid the production algorithms: Δ-density is
measured as the length of a union of window-start intervals, and the
quotient stream is found by enumerating triples of links.
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .ingest import Message, Thread, resolve_threads, to_stream_and_partition
from .metrics import DensityValue
from .relations import QuotientStream
from .stream import LinkStream, StaticGraph, StreamPartition


def delta_density_oracle(stream: LinkStream, delta: int) -> DensityValue:
    """Share of (pair, window start) combinations whose window holds a link.

    A window ``[s, s + delta]`` with ``s`` uniform in ``[alpha, omega - delta]``
    contains a link at ``t`` iff ``s`` lies in ``[t - delta, t]``; the covered
    measure is the length of the union of those intervals.
    """
    room = stream.omega - stream.alpha - delta
    if room <= 0 or delta < 0:
        raise ValueError("the oracle needs 0 <= Δ < omega - alpha")
    nodes = sorted(stream.nodes)
    if len(nodes) < 2:
        return DensityValue.undefined("fewer than 2 nodes")
    lo, hi = stream.alpha, stream.omega - delta
    total = Fraction(0)
    for a, b in combinations(nodes, 2):
        spans = sorted((max(t - delta, lo), min(t, hi)) for t, u, v in stream.events
                       if {u, v} == {a, b})
        covered = 0
        cur_lo = cur_hi = None
        for s, e in spans:
            if e < s:
                continue
            if cur_hi is None or s > cur_hi:
                if cur_hi is not None:
                    covered += cur_hi - cur_lo
                cur_lo, cur_hi = s, e
            else:
                cur_hi = max(cur_hi, e)
        if cur_hi is not None:
            covered += cur_hi - cur_lo
        total += Fraction(covered, room)
    return DensityValue.of(total / (len(nodes) * (len(nodes) - 1) // 2))


def quotient_stream_oracle(partition: StreamPartition) -> QuotientStream:
    """Enumerate ``(e1, e2) in E_i x E_i`` and ``e in E_j`` sharing a node ``u``
    with ``t(e1) <= t(e) <= t(e2)``."""
    stream = partition.stream
    k = len(partition)
    parts = [[(e, stream.events[e]) for e in p.event_ids] for p in partition]
    witnesses = set()
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            for e, (t, a, b) in parts[j]:
                for u in (a, b):
                    for _, (t1, *n1) in parts[i]:
                        if u not in n1 or t1 > t:
                            continue
                        if any(u in n2 and t <= t2 for _, (t2, *n2) in parts[i]):
                            witnesses.add((t, i, j, e, u))
                            break
    mult: Counter = Counter()
    dirs = defaultdict(set)
    for t, i, j, _, _ in witnesses:
        key = (t, min(i, j), max(i, j))
        mult[key] += 1
        dirs[key].add((i, j))
    events = tuple(sorted(mult))
    qs = LinkStream(stream.alpha, stream.omega, frozenset(range(k)), events, tuple(range(k)))
    return QuotientStream(qs, dict(mult), {key: frozenset(v) for key, v in dirs.items()})


def temporal_overlap_oracle(partition: StreamPartition) -> set[tuple[int, int]]:
    return {(i, j) for i, j in combinations(range(len(partition)), 2)
            if max(partition[i].alpha, partition[j].alpha)
            <= min(partition[i].omega, partition[j].omega)}


def node_overlap_oracle(partition: StreamPartition) -> dict[tuple[int, int], int]:
    return {(i, j): len(partition[i].nodes & partition[j].nodes)
            for i, j in combinations(range(len(partition)), 2)
            if partition[i].nodes & partition[j].nodes}


def inter_thread_substream_oracle(partition: StreamPartition, i: int, j: int) -> LinkStream:
    pi, pj = partition[i], partition[j]
    lo, hi = min(pi.alpha, pj.alpha), max(pi.omega, pj.omega)
    nodes = pi.nodes | pj.nodes
    own = set(pi.event_ids) | set(pj.event_ids)
    events = tuple(ev for e, ev in enumerate(partition.stream.events)
                   if e not in own and lo <= ev[0] <= hi and ev[1] in nodes and ev[2] in nodes)
    return LinkStream(lo, hi, nodes, events, partition.stream.labels)


def pair_enumeration_density(g: StaticGraph, communities, mode: str, i: int | None = None) -> Fraction:
    """Intra- or inter-community density by looping over vertex pairs."""
    comms = [sorted(c) for c in communities]
    if mode == "intra":
        hits = total = 0
        for c in comms:
            for u in c:
                for v in c:
                    if u != v:
                        total += 1
                        hits += g.has_edge(u, v)
        return Fraction(hits, total)
    acc = Fraction(0)
    for j, c in enumerate(comms):
        if j == i:
            continue
        hits = sum(g.has_edge(u, v) for u in comms[i] for v in c)
        acc += Fraction(hits, len(comms[i]) * len(c))
    return acc / len(comms)


class SyntheticConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SyntheticConfig:
    """Planted threads: short dense reply bursts among small author groups.

    Background traffic is ``n_background`` two-message threads between
    random authors, spread uniformly over the whole span.
    """

    n_nodes: int = 120
    n_threads: int = 40
    messages_per_thread: tuple[int, int] = (3, 15)
    authors_per_thread: tuple[int, int] = (2, 5)
    thread_duration: tuple[int, int] = (3600, 7 * 86400)
    n_background: int = 60
    background_reply_delay: int = 3600
    span: int = 365 * 86400
    t0: int = 1_200_000_000
    seed: int = 0

    def validate(self) -> None:
        lo_m, hi_m = self.messages_per_thread
        lo_a, hi_a = self.authors_per_thread
        lo_d, hi_d = self.thread_duration
        if self.n_threads < 1:
            raise SyntheticConfigError("at least one planted thread is needed")
        if not 2 <= lo_m <= hi_m:
            raise SyntheticConfigError("threads need at least 2 messages")
        if not 2 <= lo_a <= hi_a:
            raise SyntheticConfigError("threads need at least 2 authors")
        if hi_a > self.n_nodes:
            raise SyntheticConfigError(f"threads of {hi_a} authors cannot be drawn from {self.n_nodes} nodes")
        if not 0 <= lo_d <= hi_d:
            raise SyntheticConfigError("invalid thread duration range")
        if hi_d > self.span:
            raise SyntheticConfigError("threads cannot last longer than the span")
        if self.n_background < 0 or self.background_reply_delay < 0:
            raise SyntheticConfigError("background settings must be non-negative")
        if self.n_background and self.n_nodes < 2:
            raise SyntheticConfigError("background traffic needs 2 nodes")


@dataclass
class SyntheticData:
    messages: list[Message]
    threads: list[Thread]
    stream: LinkStream
    partition: StreamPartition
    planted: set[str] = field(default_factory=set)
    planted_durations: list[int] = field(default_factory=list)

    @property
    def mean_planted_duration(self) -> int:
        return sum(self.planted_durations) // len(self.planted_durations)


def _author(n: int) -> str:
    return f"user{n:05d}@example.org"


def generate_messages(config: SyntheticConfig) -> tuple[list[Message], set[str], list[int]]:
    config.validate()
    rng = random.Random(config.seed)
    messages: list[Message] = []
    planted: set[str] = set()
    durations = []
    for i in range(config.n_threads):
        n_msg = rng.randint(*config.messages_per_thread)
        group = rng.sample(range(config.n_nodes), rng.randint(*config.authors_per_thread))
        dur = rng.randint(*config.thread_duration)
        start = config.t0 + rng.randint(0, config.span - dur)
        inner = sorted(rng.randint(start, start + dur) for _ in range(n_msg - 2))
        times = [start, *inner, start + dur]
        ids = [f"p{i:05d}.{j:03d}" for j in range(n_msg)]
        authors = [rng.choice(group)]
        messages.append(Message(ids[0], _author(authors[0]), times[0], ids[0]))
        for j in range(1, n_msg):
            parent = rng.randrange(j)
            author = rng.choice([a for a in group if a != authors[parent]])
            authors.append(author)
            messages.append(Message(ids[j], _author(author), times[j], ids[parent]))
        planted.add(ids[0])
        durations.append(dur)
    for i in range(config.n_background):
        a, b = rng.sample(range(config.n_nodes), 2)
        t = config.t0 + rng.randint(0, config.span - config.background_reply_delay)
        root, reply = f"b{i:05d}.0", f"b{i:05d}.1"
        messages.append(Message(root, _author(a), t, root))
        messages.append(Message(reply, _author(b), t + rng.randint(0, config.background_reply_delay), root))
    messages.sort(key=lambda m: (m.time, m.id))
    return messages, planted, durations


def generate_synthetic(config: SyntheticConfig) -> SyntheticData:
    """Messages, threads, stream and thread partition for ``config``.

    Deterministic in ``config.seed``.
    """
    messages, planted, durations = generate_messages(config)
    threads = resolve_threads(messages)
    stream, partition = to_stream_and_partition(threads, messages)
    return SyntheticData(messages, threads, stream, partition, planted, durations)
