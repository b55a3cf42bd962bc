from fractions import Fraction

import pytest

from threadstream.metrics import delta_density, intra_thread_delta_density
from threadstream.stream import LinkStream, partition_by_labels
from threadstream.validation import (SyntheticConfig, SyntheticConfigError, delta_density_oracle,
                                     generate_messages, generate_synthetic, quotient_stream_oracle)


def test_oracle_examples():
    s = LinkStream.from_ids([(5, 0, 1)], 0, 10)
    assert delta_density_oracle(s, 2).fraction == Fraction(1, 4)
    assert delta_density_oracle(LinkStream.from_ids([], 0, 10, nodes=[0, 1, 2]), 3).fraction == 0
    dense = LinkStream.from_ids([(t, u, v) for t in range(0, 11, 2) for u, v in ((0, 1), (0, 2), (1, 2))],
                                0, 10)
    assert delta_density_oracle(dense, 2).fraction == 1


def test_oracle_rejects_graph_limit():
    with pytest.raises(ValueError):
        delta_density_oracle(LinkStream.from_ids([(5, 0, 1)], 0, 10), 10)


def test_quotient_oracle_trivial_cases():
    s = LinkStream.from_ids([(1, 0, 1), (3, 0, 2)], 0, 10)
    assert quotient_stream_oracle(partition_by_labels(s, ["a", "b"])).stream.events == ()
    assert quotient_stream_oracle(partition_by_labels(s, ["a", "a"])).stream.events == ()


def test_synthetic_single_thread_is_denser_inside():
    cfg = SyntheticConfig(n_nodes=2, n_threads=1, messages_per_thread=(4, 4), authors_per_thread=(2, 2),
                          thread_duration=(1000, 1000), n_background=0, span=5000, seed=4)
    data = generate_synthetic(cfg)
    assert len(data.stream.events) == 3 and len(data.partition) == 1
    for d in (0, 10, 500):
        assert intra_thread_delta_density(data.partition, d).fraction >= delta_density(data.stream, d).fraction


def test_synthetic_zero_threads_rejected():
    with pytest.raises(SyntheticConfigError):
        generate_synthetic(SyntheticConfig(n_threads=0))


@pytest.mark.parametrize("kwargs", [
    {"authors_per_thread": (2, 9), "n_nodes": 5},
    {"messages_per_thread": (1, 3)},
    {"thread_duration": (10, 5)},
    {"thread_duration": (10, 10 ** 9), "span": 100},
])
def test_synthetic_infeasible(kwargs):
    with pytest.raises(SyntheticConfigError):
        generate_messages(SyntheticConfig(**kwargs))


def test_synthetic_deterministic():
    a = generate_synthetic(SyntheticConfig(seed=11))
    b = generate_synthetic(SyntheticConfig(seed=11))
    assert a.messages == b.messages and a.stream == b.stream
    c = generate_synthetic(SyntheticConfig(seed=12))
    assert c.messages != a.messages


def test_synthetic_planted_structure():
    cfg = SyntheticConfig(seed=2)
    data = generate_synthetic(cfg)
    assert len(data.planted) == cfg.n_threads
    assert len(data.threads) == cfg.n_threads + cfg.n_background
    lo, hi = cfg.thread_duration
    assert all(lo <= d <= hi for d in data.planted_durations)
    # no self-replies are generated
    assert data.stream.self_loops == 0
