import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from threadstream.ingest import messages_from_text, resolve_threads, to_stream_and_partition
from threadstream.report import (ccdf, correlation_table, intercontact_distribution, interior_gaps,
                                 thread_stats)
from threadstream.stream import LinkStream, build_stream


def test_ccdf_examples():
    assert list(ccdf([1, 2, 2, 4]).rows()) == [(1, 1.0), (2, 0.75), (4, 0.25)]
    assert list(ccdf([5, 5]).rows()) == [(5, 1.0)]
    assert list(ccdf([3.5]).rows()) == [(3.5, 1.0)]
    with pytest.raises(ValueError):
        ccdf([])


@given(st.lists(st.integers(-50, 50), min_size=1))
def test_ccdf_properties(samples):
    d = ccdf(samples)
    assert d.fractions[0] == 1.0
    assert all(0 < f <= 1 for f in d.fractions)
    assert all(a > b for a, b in zip(d.fractions, d.fractions[1:]))
    assert list(d.values) == sorted(set(samples))


def test_correlation_line():
    c = correlation_table([1, 2, 3, 4], [2, 4, 6, 8])
    assert c.pearson == pytest.approx(1.0)
    assert c.spearman == pytest.approx(1.0)


def test_correlation_constant_y():
    c = correlation_table([1, 2, 3], [5, 5, 5])
    assert c.pearson is None and c.note == "constant input"


def test_correlation_squares():
    c = correlation_table([1, 2, 3], [1, 4, 9])
    # ranks coincide -> Spearman 1; the relation is not linear -> Pearson < 1
    assert c.spearman == pytest.approx(1.0)
    assert c.pearson < 1.0
    # deviations (-1, 0, 1) and (-11/3, -2/3, 13/3): r = 8 / sqrt(2 * 294 / 9)
    assert c.pearson == pytest.approx(24 / math.sqrt(588))


def test_correlation_too_few_points():
    assert correlation_table([1], [2]).note == "fewer than 2 points"


def test_thread_stats_example():
    msgs = messages_from_text("id,timestamp,author,parent\nm1,100,a,\nm2,150,b,m1\nm3,200,a,m2\nsolo,120,c,\n")
    threads = resolve_threads(msgs)
    stream, part = to_stream_and_partition(threads, msgs)
    [s] = thread_stats(part, threads)
    assert (s.n_messages, s.n_events, s.n_authors, s.n_distinct_pairs, s.duration) == (3, 2, 2, 1, 50)


def test_thread_stats_pairs_and_invariants():
    msgs = messages_from_text("id,timestamp,author,parent\n"
                              "r,0,a,\nx,5,b,r\ny,9,c,x\nz,12,b,y\n")
    threads = resolve_threads(msgs)
    stream, part = to_stream_and_partition(threads, msgs)
    [s] = thread_stats(part, threads)
    assert s.n_distinct_pairs == 2 and s.n_authors == 3
    assert s.n_distinct_pairs <= s.n_authors * (s.n_authors - 1) // 2
    assert s.n_events >= s.n_distinct_pairs


def test_interior_gaps_examples():
    s = LinkStream.from_ids([(2, 0, 1), (7, 0, 1)], 0, 10)
    assert interior_gaps(s) == [5]
    assert sorted(interior_gaps(s, include_boundary=True)) == [2, 3, 5]
    s = LinkStream.from_ids([(4, 0, 1)], 0, 10)
    assert interior_gaps(s) == []


def test_intercontact_distribution_pooling():
    s = LinkStream.from_ids([(1, 0, 1), (4, 0, 1), (0, 1, 2), (3, 1, 2), (9, 1, 2)], 0, 10)
    d = intercontact_distribution(s)
    assert list(d.rows()) == [(3, 1.0), (6, 1 / 3)]


def test_intercontact_distribution_errors():
    with pytest.raises(ValueError):
        intercontact_distribution(LinkStream.from_ids([], 0, 10, nodes=[0, 1]))
    with pytest.raises(ValueError):
        intercontact_distribution(build_stream([(3, "a", "b")], 0, 10))
