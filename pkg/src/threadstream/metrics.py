"""Graph density, Δ-density and their intra-/inter-community generalizations.

Everything is computed with integers and :class:`fractions.Fraction`; a
:class:`DensityValue` only turns into a float when asked to.

The Δ-density of a stream ``L = (T, V, E)`` with ``T = [alpha, omega]`` is

    1 - 2 * sum_{u<v} sum_{g in gaps(u, v)} max(0, g - Δ)
        / (|V| (|V| - 1) (omega - alpha - Δ))

where ``gaps(u, v)`` are the inter-contact times of the pair padded with
``alpha`` and ``omega``; a pair that never interacts has the single gap
``omega - alpha``.  When ``Δ >= omega - alpha`` the denominator vanishes and
the value is defined as the density of the induced graph over ``V``, which
is the limit of the expression.
"""
from __future__ import annotations

import random
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate, combinations
from typing import Hashable, Iterable, Sequence

from .stream import LinkStream, StaticGraph, StreamError, StreamPartition

UNITS = {"s": 1, "m": 60, "h": 3600, "d": 86400, "w": 7 * 86400, "y": 365 * 86400}


def parse_duration(text: str | int) -> int:
    """Seconds in ``text``: a plain integer or a number with a unit suffix.

    Units are s, m (minute), h, d, w and y (365 days).

    >>> parse_duration("1h"), parse_duration("30d"), parse_duration(90)
    (3600, 2592000, 90)
    """
    if isinstance(text, int):
        value = text
    else:
        m = re.fullmatch(r"\s*(\d+)\s*([smhdwy]?)\s*", text)
        if m is None:
            raise ValueError(f"cannot parse duration {text!r}")
        value = int(m.group(1)) * UNITS[m.group(2) or "s"]
    if value < 0:
        raise ValueError(f"negative duration {text!r}")
    return value


def parse_durations(text: str) -> list[tuple[str, int]]:
    """``"1m,1h"`` -> ``[("1m", 60), ("1h", 3600)]``."""
    return [(tok.strip(), parse_duration(tok)) for tok in text.split(",") if tok.strip()]


@dataclass(frozen=True)
class DensityValue:
    """Exact density ``numerator / denominator``.

    A degenerate result (nothing to average over) has ``degenerate`` set to a
    reason and no numeric value.
    """

    numerator: int = 0
    denominator: int = 0
    degenerate: str | None = None
    sampled: bool = False

    @classmethod
    def of(cls, value: Fraction, sampled: bool = False) -> "DensityValue":
        return cls(value.numerator, value.denominator, None, sampled)

    @classmethod
    def undefined(cls, reason: str) -> "DensityValue":
        return cls(0, 0, reason)

    @property
    def is_degenerate(self) -> bool:
        return self.degenerate is not None

    @property
    def fraction(self) -> Fraction:
        if self.degenerate is not None:
            raise ValueError(f"degenerate density: {self.degenerate}")
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self) -> float | None:
        return None if self.degenerate is not None else self.numerator / self.denominator

    def __float__(self) -> float:
        v = self.value
        return float("nan") if v is None else v


def _check_delta(delta: int) -> int:
    if delta < 0:
        raise ValueError(f"Δ must be non-negative, got {delta}")
    return delta


def uncovered_time(times: Sequence[int], lo: int, hi: int, delta: int) -> int:
    """``sum(max(0, g - delta))`` over the gaps of ``(lo, *times, hi)``."""
    total = 0
    prev = lo
    for t in times:
        g = t - prev
        if g > delta:
            total += g - delta
        prev = t
    g = hi - prev
    if g > delta:
        total += g - delta
    return total


def graph_density(g: StaticGraph) -> DensityValue:
    n = len(g.nodes)
    if n < 2:
        return DensityValue.undefined("fewer than 2 nodes")
    return DensityValue(2 * g.n_edges, n * (n - 1))


def _pair_density(n_nodes: int, pair_times, lo: int, hi: int, delta: int) -> DensityValue:
    """Δ-density of ``n_nodes`` nodes whose linked pairs have the given times."""
    if n_nodes < 2:
        return DensityValue.undefined("fewer than 2 nodes")
    ordered = n_nodes * (n_nodes - 1)
    room = hi - lo - delta
    if room <= 0:
        return DensityValue(2 * len(pair_times), ordered)
    n_pairs = ordered // 2
    unc = (n_pairs - len(pair_times)) * room
    for times in pair_times:
        unc += uncovered_time(times, lo, hi, delta)
    den = ordered * room
    return DensityValue(den - 2 * unc, den)


def delta_density(stream: LinkStream, delta: int) -> DensityValue:
    """Probability that two random nodes interact in a random window of length Δ."""
    _check_delta(delta)
    return _pair_density(len(stream.nodes), list(stream.pair_times.values()),
                         stream.alpha, stream.omega, delta)


class GapProfile:
    """Shared precomputation for evaluating Δ-density at many Δ values.

    All padded gaps of the linked pairs are sorted once; each Δ is then a
    bisection plus a suffix sum.
    """

    def __init__(self, n_nodes: int, pair_times: Iterable[Sequence[int]], lo: int, hi: int):
        self.n_nodes, self.lo, self.hi = n_nodes, lo, hi
        gaps = []
        self.n_linked = 0
        for times in pair_times:
            self.n_linked += 1
            prev = lo
            for t in times:
                gaps.append(t - prev)
                prev = t
            gaps.append(hi - prev)
        gaps.sort()
        self.gaps = gaps
        # suffix[i] = sum(gaps[i:])
        self.suffix = list(accumulate(reversed(gaps), initial=0))[::-1]

    def uncovered(self, delta: int) -> int:
        i = bisect_right(self.gaps, delta)
        return self.suffix[i] - (len(self.gaps) - i) * delta

    def density(self, delta: int) -> DensityValue:
        _check_delta(delta)
        n = self.n_nodes
        if n < 2:
            return DensityValue.undefined("fewer than 2 nodes")
        ordered = n * (n - 1)
        room = self.hi - self.lo - delta
        if room <= 0:
            return DensityValue(2 * self.n_linked, ordered)
        unc = (ordered // 2 - self.n_linked) * room + self.uncovered(delta)
        den = ordered * room
        return DensityValue(den - 2 * unc, den)


def delta_density_profile(stream: LinkStream, deltas: Iterable[int]) -> list[tuple[int, DensityValue]]:
    profile = GapProfile(len(stream.nodes), stream.pair_times.values(), stream.alpha, stream.omega)
    return [(d, profile.density(d)) for d in deltas]


def _as_communities(communities: Iterable[Iterable[Hashable]]) -> list[frozenset]:
    comms = [frozenset(c) for c in communities]
    seen: set = set()
    for c in comms:
        if seen & c:
            raise StreamError("communities overlap")
        seen |= c
    return comms


def _community_index(g: StaticGraph, comms: list[frozenset]) -> dict:
    where = {x: i for i, c in enumerate(comms) for x in c}
    if set(where) != set(g.nodes):
        raise StreamError("communities do not partition the vertex set")
    return where


def intra_community_density(g: StaticGraph, communities) -> DensityValue:
    """Probability that two random nodes of the same community are adjacent."""
    comms = _as_communities(communities)
    where = _community_index(g, comms)
    inside = sum(1 for u, v in g.edges if where[u] == where[v])
    den = sum(len(c) * (len(c) - 1) for c in comms)
    if den == 0:
        return DensityValue.undefined("all communities are singletons")
    return DensityValue(2 * inside, den)


def inter_community_density(g: StaticGraph, communities, i: int) -> DensityValue:
    """Cross-community edge density of community ``i``.

    Sum over ``j != i`` of ``edges(C_i, C_j) / (|C_i| |C_j|)``, divided by the
    number of communities ``|C|`` (not ``|C| - 1``).
    """
    comms = _as_communities(communities)
    where = _community_index(g, comms)
    if not 0 <= i < len(comms):
        raise IndexError(f"no community {i}")
    cross = [0] * len(comms)
    for u, v in g.edges:
        a, b = where[u], where[v]
        if a == i and b != i:
            cross[b] += 1
        elif b == i and a != i:
            cross[a] += 1
    total = sum((Fraction(c, len(comms[i]) * len(comms[j])) for j, c in enumerate(cross) if c),
                Fraction(0))
    return DensityValue.of(total / len(comms))


def _part_terms(partition: StreamPartition, i: int, delta: int) -> tuple[int, int] | None:
    """(doubled uncovered time, denominator) of part ``i``, or None if it has no room."""
    p = partition.parts[i]
    room = p.omega - p.alpha - delta
    n = len(p.nodes)
    if room <= 0 or n < 2:
        return None
    pts = partition.part_pair_times[i]
    unc = (n * (n - 1) // 2 - len(pts)) * room
    for times in pts.values():
        unc += uncovered_time(times, p.alpha, p.omega, delta)
    return 2 * unc, n * (n - 1) * room


def intra_thread_delta_density(partition: StreamPartition, delta: int) -> DensityValue:
    """Δ-density aggregated over pairs of nodes that share a part.

    Each part uses its own bounds ``[alpha_i, omega_i]``.  Parts whose
    duration does not exceed Δ contribute to neither sum.
    """
    _check_delta(delta)
    num = den = 0
    for i in range(len(partition)):
        terms = _part_terms(partition, i, delta)
        if terms is not None:
            num += terms[0]
            den += terms[1]
    if den == 0:
        return DensityValue.undefined("no part is longer than Δ")
    return DensityValue(den - num, den)


def per_thread_delta_density(partition: StreamPartition, i: int, delta: int) -> DensityValue:
    """Δ-density of part ``i`` as a stand-alone stream."""
    _check_delta(delta)
    p = partition.parts[i]
    if p.duration == 0:
        return DensityValue.undefined("part has zero duration")
    return _pair_density(len(p.nodes), list(partition.part_pair_times[i].values()),
                         p.alpha, p.omega, delta)


def per_thread_profile(partition: StreamPartition, i: int, deltas: Sequence[int]) -> list[DensityValue]:
    p = partition.parts[i]
    if p.duration == 0:
        return [DensityValue.undefined("part has zero duration") for _ in deltas]
    prof = GapProfile(len(p.nodes), partition.part_pair_times[i].values(), p.alpha, p.omega)
    return [prof.density(d) for d in deltas]


def _inter_bounds(partition: StreamPartition, i: int, j: int):
    if i == j:
        raise StreamError("inter-thread sub-stream needs two distinct parts")
    pi, pj = partition.parts[i], partition.parts[j]
    return min(pi.alpha, pj.alpha), max(pi.omega, pj.omega), pi.nodes | pj.nodes


def _inter_pairs(partition: StreamPartition, i: int, j: int, lo: int, hi: int, nodes):
    """Yield ``(pair, times)`` for linked pairs of ``L_ij`` with at least one link."""
    index = partition.pair_index
    for u, v in combinations(sorted(nodes), 2):
        if (u, v) not in index:
            continue
        times, parts = partition.pair_links_between((u, v), lo, hi)
        kept = [t for t, q in zip(times, parts) if q != i and q != j]
        if kept:
            yield (u, v), kept


def inter_thread_substream(partition: StreamPartition, i: int, j: int) -> LinkStream:
    """Links among ``V_i | V_j`` during ``T_ij`` that belong to neither part."""
    lo, hi, nodes = _inter_bounds(partition, i, j)
    events = sorted((t, u, v) for (u, v), times in _inter_pairs(partition, i, j, lo, hi, nodes)
                    for t in times)
    return LinkStream(lo, hi, nodes, tuple(events), partition.stream.labels)


def inter_pair_delta_density(partition: StreamPartition, i: int, j: int, delta: int) -> DensityValue:
    """Δ-density of ``L_ij`` without materializing the sub-stream."""
    lo, hi, nodes = _inter_bounds(partition, i, j)
    pts = [times for _, times in _inter_pairs(partition, i, j, lo, hi, nodes)]
    return _pair_density(len(nodes), pts, lo, hi, delta)


def _counterparts(k: int, i: int, sample: int | None, rng: random.Random | None) -> tuple[list[int], bool]:
    others = [j for j in range(k) if j != i]
    if sample is None or sample >= len(others):
        return others, False
    if sample <= 0:
        raise ValueError("sample size must be positive")
    return sorted((rng or random.Random(0)).sample(others, sample)), True


def inter_thread_delta_density(partition: StreamPartition, i: int, delta: int,
                               sample: int | None = None,
                               rng: random.Random | None = None) -> DensityValue:
    """Mean Δ-density of ``L_ij`` over ``j != i``, normalized by the part count.

    With ``sample=N`` only ``N`` counterparts drawn uniformly without
    replacement from ``rng`` are evaluated and their sum is scaled by
    ``(k - 1) / N`` to estimate the full sum.
    """
    return inter_thread_profile(partition, i, [delta], sample, rng)[0]


def inter_thread_profile(partition: StreamPartition, i: int, deltas: Sequence[int],
                         sample: int | None = None,
                         rng: random.Random | None = None) -> list[DensityValue]:
    """:func:`inter_thread_delta_density` for several Δ with one counterpart draw."""
    for d in deltas:
        _check_delta(d)
    k = len(partition)
    if k < 2:
        return [DensityValue.undefined("fewer than 2 parts") for _ in deltas]
    others, sampled = _counterparts(k, i, sample, rng)
    totals = [Fraction(0) for _ in deltas]
    for j in others:
        lo, hi, nodes = _inter_bounds(partition, i, j)
        pts = [times for _, times in _inter_pairs(partition, i, j, lo, hi, nodes)]
        if not pts:
            # no links: zero for every Δ, including the graph limit
            continue
        prof = GapProfile(len(nodes), pts, lo, hi)
        for n, d in enumerate(deltas):
            v = prof.density(d)
            if v.numerator:
                totals[n] += Fraction(v.numerator, v.denominator)
    scale = Fraction(k - 1, len(others)) if sampled else 1
    return [DensityValue.of(t * scale / k, sampled=sampled) for t in totals]
