"""Per-thread statistics, CCDFs, correlation tables and CSV/JSON export."""
from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from scipy import stats as _stats

from .ingest import Thread
from .stream import LinkStream, StreamPartition


@dataclass(frozen=True)
class ThreadStats:
    part: int
    label: str
    n_messages: int
    n_events: int
    n_authors: int
    n_distinct_pairs: int
    duration: int


STAT_FIELDS = ("n_messages", "n_events", "n_authors", "n_distinct_pairs", "duration")


def thread_stats(partition: StreamPartition, threads: Iterable[Thread]) -> list[ThreadStats]:
    """One record per part; message counts come from the matching thread."""
    size = {th.root: len(th) for th in threads}
    out = []
    for p in partition:
        pairs = {partition.stream.events[e][1:] for e in p.event_ids}
        out.append(ThreadStats(p.index, str(p.label), size.get(p.label, len(p) + 1), len(p),
                               len(p.nodes), len(pairs), p.duration))
    return out


@dataclass(frozen=True)
class CCDF:
    """``fractions[k]`` is the share of samples ``>= values[k]``."""

    values: tuple
    fractions: tuple[float, ...]
    n: int

    def rows(self):
        return zip(self.values, self.fractions)


def ccdf(samples: Iterable) -> CCDF:
    """Complementary cumulative distribution ``P(X >= x)`` over distinct values.

    >>> list(ccdf([1, 2, 2, 4]).rows())
    [(1, 1.0), (2, 0.75), (4, 0.25)]
    """
    counts = Counter(samples)
    n = sum(counts.values())
    if n == 0:
        raise ValueError("ccdf of an empty sample")
    values = sorted(counts)
    remaining = n
    fractions = []
    for x in values:
        fractions.append(remaining / n)
        remaining -= counts[x]
    return CCDF(tuple(values), tuple(fractions), n)


@dataclass(frozen=True)
class Correlation:
    points: tuple[tuple[float, float], ...]
    pearson: float | None
    spearman: float | None
    note: str | None = None


def correlation_table(xs: Sequence[float], ys: Sequence[float]) -> Correlation:
    """Scatter points plus Pearson and Spearman coefficients when defined."""
    if len(xs) != len(ys):
        raise ValueError("x and y have different lengths")
    points = tuple(zip(xs, ys))
    if len(points) < 2:
        return Correlation(points, None, None, "fewer than 2 points")
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        return Correlation(points, None, None, "constant input")
    pearson = float(_stats.pearsonr(xs, ys)[0])
    spearman = float(_stats.spearmanr(xs, ys)[0])
    return Correlation(points, pearson, spearman)


def interior_gaps(stream: LinkStream, include_boundary: bool = False) -> list[int]:
    """Pooled gaps between consecutive links of every linked pair.

    The padding gaps to ``alpha`` and ``omega`` are left out unless
    ``include_boundary`` is set.
    """
    gaps = []
    for times in stream.pair_times.values():
        gaps.extend(b - a for a, b in zip(times, times[1:]))
        if include_boundary:
            gaps.append(times[0] - stream.alpha)
            gaps.append(stream.omega - times[-1])
    return gaps


def intercontact_distribution(stream: LinkStream, include_boundary: bool = False) -> CCDF:
    if not stream.pair_times:
        raise ValueError("the stream has no linked pair")
    gaps = interior_gaps(stream, include_boundary)
    if not gaps:
        raise ValueError("no linked pair interacts twice")
    return ccdf(gaps)


def fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def write_ccdf(path: Path, dist: CCDF, name: str = "value") -> None:
    write_csv(path, (name, "ccdf"), dist.rows())


def write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=False, default=str)
        fh.write("\n")
