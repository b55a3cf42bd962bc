"""Message tables, reply threads and the cleaning filters applied to them.

The input is a CSV (or TSV) table with header ``id,timestamp,author,parent``.
Timestamps are integer UTC seconds and an empty parent marks a root message.
"""
from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable, Sequence

from .stream import LinkStream, StreamPartition, build_stream, partition_by_labels

COLUMNS = ("id", "timestamp", "author", "parent")
TWO_YEARS = 730 * 86400

REASONS = ("inconsistent", "incomplete", "duration", "late_start")


class DataError(ValueError):
    """Malformed input data."""


@dataclass(frozen=True)
class Message:
    id: str
    author: str
    time: int
    parent: str

    @property
    def is_root(self) -> bool:
        return self.parent == self.id


def _open_text(source) -> tuple[IO[str], bool]:
    if isinstance(source, (str, Path)):
        return open(source, newline="", encoding="utf-8"), True
    return source, False


def parse_messages(source) -> list[Message]:
    """Read a message table from a path or text stream.

    The delimiter is a tab if the header contains one, else a comma.
    """
    fh, owned = _open_text(source)
    try:
        header_line = fh.readline()
        if not header_line:
            raise DataError("line 1: empty input, expected header id,timestamp,author,parent")
        delim = "\t" if "\t" in header_line else ","
        header = next(csv.reader([header_line], delimiter=delim))
        header = [h.strip() for h in header]
        missing = [c for c in COLUMNS if c not in header]
        if missing:
            raise DataError(f"line 1: missing column(s) {', '.join(missing)}")
        col = {c: header.index(c) for c in COLUMNS}
        messages: list[Message] = []
        seen: set[str] = set()
        for lineno, row in enumerate(csv.reader(fh, delimiter=delim), start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
            mid = row[col["id"]].strip()
            if not mid:
                raise DataError(f"line {lineno}: empty message id")
            if mid in seen:
                raise DataError(f"line {lineno}: duplicate message id {mid!r}")
            raw_t = row[col["timestamp"]].strip()
            try:
                t = int(raw_t)
            except ValueError:
                raise DataError(f"line {lineno}: timestamp {raw_t!r} is not an integer") from None
            parent = row[col["parent"]].strip() or mid
            seen.add(mid)
            messages.append(Message(mid, row[col["author"]].strip(), t, parent))
        return messages
    finally:
        if owned:
            fh.close()


def write_messages(messages: Iterable[Message], dest) -> None:
    """Write messages in the input table format (roots get an empty parent)."""
    fh, owned = (open(dest, "w", newline="", encoding="utf-8"), True) \
        if isinstance(dest, (str, Path)) else (dest, False)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for m in messages:
            w.writerow((m.id, m.time, m.author, "" if m.is_root else m.parent))
    finally:
        if owned:
            fh.close()


def messages_from_text(text: str) -> list[Message]:
    return parse_messages(io.StringIO(text))


@dataclass(frozen=True)
class Thread:
    """Reply closure of a root message.

    ``consistent`` is false when some reply predates its parent or the
    reply chain loops; ``complete`` is false when the chain ends at a parent
    missing from the corpus, in which case ``root`` is the topmost message
    that was found.
    """

    root: str
    members: tuple[str, ...]
    start: int
    end: int
    consistent: bool = True
    complete: bool = True

    @property
    def duration(self) -> int:
        return self.end - self.start

    def __len__(self) -> int:
        return len(self.members)


def resolve_threads(messages: Sequence[Message]) -> list[Thread]:
    """Group messages into threads by following parent links up to a root.

    Threads come out in order of their first message in ``messages``.
    """
    by_id = {m.id: m for m in messages}
    top: dict[str, str] = {}
    dangling: set[str] = set()
    looped: set[str] = set()

    for m in messages:
        if m.id in top:
            continue
        path = []
        on_path: set[str] = set()
        cur = m.id
        while True:
            if cur in top:
                root = top[cur]
                break
            msg = by_id[cur]
            if msg.parent == cur:
                root = cur
                break
            if msg.parent not in by_id:
                root = cur
                dangling.add(cur)
                break
            if cur in on_path:
                # the loop members are the path suffix starting at cur
                loop = path[path.index(cur):]
                root = min(loop, key=lambda x: (by_id[x].time, x))
                looped.add(root)
                break
            path.append(cur)
            on_path.add(cur)
            cur = msg.parent
        top[cur] = root
        for x in path:
            top[x] = root

    groups: dict[str, list[Message]] = defaultdict(list)
    for m in messages:
        groups[top[m.id]].append(m)

    threads = []
    for root, members in groups.items():
        consistent = root not in looped and all(
            m.is_root or m.parent not in by_id or m.time >= by_id[m.parent].time
            for m in members)
        times = [m.time for m in members]
        threads.append(Thread(root, tuple(m.id for m in members), min(times), max(times),
                              consistent, root not in dangling))
    return threads


@dataclass(frozen=True)
class CleaningPolicy:
    """Filters applied to threads; ``None`` durations disable a filter.

    ``edge_guard`` marks as incomplete the threads starting within that many
    seconds after the window start or ending within it before the window end.
    """

    max_thread_duration: int | None = TWO_YEARS
    start_cutoff: int | None = TWO_YEARS
    drop_inconsistent: bool = True
    drop_incomplete: bool = True
    edge_guard: int | None = None

    def __post_init__(self):
        for name in ("max_thread_duration", "start_cutoff", "edge_guard"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def permissive(cls) -> "CleaningPolicy":
        return cls(None, None, False, False, None)


@dataclass
class CleaningReport:
    window: tuple[int, int]
    removed: dict[str, int] = field(default_factory=lambda: dict.fromkeys(REASONS, 0))
    removed_roots: dict[str, list[str]] = field(default_factory=lambda: {r: [] for r in REASONS})
    kept: int = 0

    @property
    def total_removed(self) -> int:
        return sum(self.removed.values())

    def to_json(self) -> str:
        return json.dumps({"window": list(self.window), "kept": self.kept,
                           "removed": self.removed}, indent=2, sort_keys=True)


def removal_reason(thread: Thread, policy: CleaningPolicy, window: tuple[int, int]) -> str | None:
    """First failing filter in the order inconsistent, incomplete, duration, late_start."""
    start, end = window
    if policy.drop_inconsistent and not thread.consistent:
        return "inconsistent"
    if policy.drop_incomplete:
        if not thread.complete:
            return "incomplete"
        g = policy.edge_guard
        if g is not None and (thread.start < start + g or thread.end > end - g):
            return "incomplete"
    if policy.max_thread_duration is not None and thread.duration > policy.max_thread_duration:
        return "duration"
    if policy.start_cutoff is not None and thread.start > end - policy.start_cutoff:
        return "late_start"
    return None


def collection_window(messages: Iterable[Message]) -> tuple[int, int]:
    times = [m.time for m in messages]
    if not times:
        raise DataError("no messages")
    return min(times), max(times)


def clean(threads: Sequence[Thread], policy: CleaningPolicy = CleaningPolicy(),
          window: tuple[int, int] | None = None) -> tuple[list[Thread], CleaningReport]:
    """Drop threads failing any enabled filter.

    ``window`` is the collection period; by default the span of the thread
    times.  Each removed thread is counted once, under its first failing
    reason.
    """
    if window is None:
        if not threads:
            window = (0, 0)
        else:
            window = (min(t.start for t in threads), max(t.end for t in threads))
    report = CleaningReport(tuple(window))
    kept = []
    for th in threads:
        reason = removal_reason(th, policy, window)
        if reason is None:
            kept.append(th)
        else:
            report.removed[reason] += 1
            report.removed_roots[reason].append(th.root)
    report.kept = len(kept)
    return kept, report


def retained_messages(threads: Iterable[Thread], messages: Sequence[Message]) -> list[Message]:
    keep = {mid for th in threads for mid in th.members}
    return [m for m in messages if m.id in keep]


def to_stream_and_partition(threads: Sequence[Thread], messages: Sequence[Message],
                            include_isolated_authors: bool = True
                            ) -> tuple[LinkStream, StreamPartition]:
    """One link ``(t(m), a(m), a(p(m)))`` per reply, labeled with its thread root.

    Roots and self-replies produce no link.  ``alpha``/``omega`` are the
    first and last link times.  With ``include_isolated_authors`` every
    author of a retained message is a node, linked or not.
    """
    by_id = {m.id: m for m in messages}
    triples = []
    thread_of = []
    authors = []
    for th in threads:
        for mid in th.members:
            m = by_id[mid]
            authors.append(m.author)
            if m.is_root or m.parent not in by_id:
                continue
            triples.append((m.time, m.author, by_id[m.parent].author, th.root))
    linked = [x for x in triples if x[1] != x[2]]
    if not linked:
        raise DataError("the retained threads contain no links")
    alpha = min(x[0] for x in linked)
    omega = max(x[0] for x in linked)
    stream = build_stream(((t, u, v) for t, u, v, _ in linked), alpha, omega,
                          nodes=authors if include_isolated_authors else ())
    stream = replace(stream, self_loops=len(triples) - len(linked))
    # build_stream sorts canonically; recover each link's thread by matching triples
    ids = stream.node_ids
    buckets: dict[tuple[int, int, int], list[str]] = defaultdict(list)
    for t, a, b, root in linked:
        u, v = ids[a], ids[b]
        buckets[(t, min(u, v), max(u, v))].append(root)
    for lst in buckets.values():
        lst.reverse()
    labels = [buckets[e].pop() for e in stream.events]
    return stream, partition_by_labels(stream, labels)
