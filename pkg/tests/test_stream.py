import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadstream.stream import (LinkStream, StreamError, build_stream, induced_graph,
                                 induced_substream, intercontact, partition_by_labels)


@pytest.fixture
def fig1():
    return build_stream([(5, "b", "c"), (5, "d", "e")], 0, 10)


def ids(stream, *labels):
    return [stream.node_ids[x] for x in labels]


def test_build_stream_fig1(fig1):
    assert len(fig1.events) == 2
    assert len(fig1.nodes) == 4
    assert fig1.labeled_events() == [(5, "b", "c"), (5, "d", "e")]


def test_build_stream_empty():
    s = build_stream([], 0, 10)
    assert len(s.nodes) == 0 and len(s.events) == 0


def test_build_stream_drops_self_loops():
    s = build_stream([(3, "a", "a")], 0, 10)
    assert len(s.events) == 0
    assert s.self_loops == 1


def test_build_stream_rejects_out_of_range():
    with pytest.raises(StreamError, match="outside"):
        build_stream([(11, "a", "b")], 0, 10)


def test_build_stream_canonical_and_sorted():
    s = build_stream([(7, "z", "a"), (2, "b", "a"), (2, "a", "b")], 0, 10, nodes=["q"])
    assert all(u < v for _, u, v in s.events)
    assert [e[0] for e in s.events] == [2, 2, 7]
    assert "q" in s.labels and s.node_ids["q"] in s.nodes
    # duplicate triples kept
    assert s.events[0] == s.events[1]


def test_label_table_is_bijection(fig1):
    assert sorted(fig1.node_ids.values()) == list(range(len(fig1.labels)))
    assert all(fig1.labels[i] == lab for lab, i in fig1.node_ids.items())


def test_alpha_after_omega():
    with pytest.raises(StreamError):
        LinkStream(5, 4, frozenset(), ())


def test_induced_substream(fig1):
    b, c = ids(fig1, "b", "c")
    sub = induced_substream(fig1, {b, c})
    assert sub.labeled_events() == [(5, "b", "c")]
    assert (sub.alpha, sub.omega) == (0, 10)
    assert induced_substream(fig1, fig1.nodes).events == fig1.events
    assert induced_substream(fig1, set()).events == ()


def test_induced_substream_foreign_node(fig1):
    with pytest.raises(StreamError, match="node 99"):
        induced_substream(fig1, {99})


def test_induced_graph_weights():
    s = build_stream([(5, "b", "c"), (5, "d", "e"), (7, "b", "c")], 0, 10)
    g = induced_graph(s)
    b, c, d, e = ids(s, "b", "c", "d", "e")
    assert len(g.nodes) == 4
    assert g.edges == {(b, c): 2, (d, e): 1}


def test_induced_graph_path_and_empty():
    s = build_stream([(1, "a", "b"), (2, "b", "c"), (3, "a", "b")], 0, 10)
    a, b, c = ids(s, "a", "b", "c")
    g = induced_graph(s)
    assert g.weight(a, b) == 2 and g.weight(c, b) == 1 and not g.has_edge(a, c)
    empty = induced_graph(build_stream([], 0, 1))
    assert not empty.nodes and not empty.edges


def test_induced_graph_excludes_isolated_nodes():
    s = build_stream([(1, "a", "b")], 0, 10, nodes=["z"])
    assert len(induced_graph(s).nodes) == 2


@pytest.mark.parametrize("times,gaps", [
    ([2, 7], (2, 5, 3)),
    ([], (10,)),
    ([0, 10], (0, 10, 0)),
])
def test_intercontact(times, gaps):
    s = LinkStream.from_ids([(t, 0, 1) for t in times], 0, 10, nodes=[0, 1])
    series = intercontact(s, 0, 1)
    assert series.gaps == gaps
    assert series.boundary_times[0] == 0 and series.boundary_times[-1] == 10
    assert intercontact(s, 1, 0) == series


def test_intercontact_padding_and_errors():
    s = LinkStream.from_ids([(4, 0, 1), (6, 0, 1)], 0, 10)
    assert intercontact(s, 0, 1, padding=(4, 6)).gaps == (0, 2, 0)
    with pytest.raises(StreamError):
        intercontact(s, 0, 0)
    with pytest.raises(StreamError):
        intercontact(s, 0, 5)


def test_partition_singletons():
    s = LinkStream.from_ids([(1, 0, 1), (4, 1, 2)], 0, 10)
    p = partition_by_labels(s, ["x", "y"])
    assert len(p) == 2
    assert [(q.alpha, q.omega) for q in p] == [(1, 1), (4, 4)]


def test_partition_single_label_is_identity():
    s = LinkStream.from_ids([(1, 0, 1), (4, 1, 2), (9, 0, 2)], 0, 10)
    p = partition_by_labels(s, lambda e, ev: "all")
    assert len(p) == 1
    assert p.part_events(0) == list(s.events)
    assert (p[0].alpha, p[0].omega, p[0].nodes) == (1, 9, frozenset({0, 1, 2}))


def test_partition_node_overlap_allowed():
    s = LinkStream.from_ids([(1, 0, 1), (4, 0, 2)], 0, 10)
    p = partition_by_labels(s, {0: "x", 1: "y"})
    assert 0 in p[0].nodes and 0 in p[1].nodes


def test_partition_unlabeled_event():
    s = LinkStream.from_ids([(1, 0, 1), (4, 0, 2)], 0, 10)
    with pytest.raises(StreamError, match="no label"):
        partition_by_labels(s, {0: "x"})
    with pytest.raises(StreamError):
        partition_by_labels(s, ["x"])


def test_as_stream_uses_part_bounds():
    s = LinkStream.from_ids([(1, 0, 1), (4, 0, 2), (6, 0, 1)], 0, 10)
    p = partition_by_labels(s, ["a", "b", "a"])
    sub = p.as_stream(0)
    assert (sub.alpha, sub.omega, sub.nodes) == (1, 6, frozenset({0, 1}))


events_st = st.lists(st.tuples(st.integers(0, 50), st.integers(0, 5), st.integers(0, 5)), max_size=30)


@given(events_st, st.data())
@settings(max_examples=200)
def test_stream_properties(events, data):
    s = LinkStream.from_ids(events, 0, 50, nodes=range(6))
    # every pair's gaps sum to the stream duration
    for u in range(6):
        for v in range(u + 1, 6):
            assert sum(intercontact(s, u, v).gaps) == 50
    subset = data.draw(st.sets(st.integers(0, 5)))
    sub = induced_substream(s, subset)
    restricted = induced_graph(s).subgraph(subset)
    assert induced_graph(sub).edges == restricted.edges
    assert induced_graph(sub).nodes == {x for e in restricted.edges for x in e}
    assert sorted(induced_substream(s, s.nodes).events) == sorted(s.events)
    labels = data.draw(st.lists(st.integers(0, 3), min_size=len(s.events), max_size=len(s.events)))
    if s.events:
        p = partition_by_labels(s, labels)
        assert sum(len(q) for q in p) == len(s.events)
        seen = [e for q in p for e in q.event_ids]
        assert len(seen) == len(set(seen))
        for q in p:
            evs = p.part_events(q.index)
            assert q.alpha == min(e[0] for e in evs) and q.omega == max(e[0] for e in evs)
            assert q.nodes == {x for e in evs for x in e[1:]}
            assert s.alpha <= q.alpha and q.omega <= s.omega and q.nodes <= s.nodes
