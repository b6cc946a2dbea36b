"""Random graph sampling, seeding, and cluster-state construction."""

import numpy as np
import pytest

from randcluster.errors import InvalidInputError
from randcluster.graphs import (
    GraphInstance,
    SeedSpec,
    build_state,
    check_seed,
    sample_graph,
    stream_at,
    stream_key,
    substream,
)
from randcluster.quantum import apply_cphase, plus_state


def test_graph_instance_sorts_and_validates():
    g = GraphInstance(4, ((2, 3), (1, 2)))
    assert g.edges == ((1, 2), (2, 3))
    with pytest.raises(InvalidInputError):
        GraphInstance(3, ((1, 1),))  # self loop
    with pytest.raises(InvalidInputError):
        GraphInstance(3, ((2, 1),))  # wrong orientation
    with pytest.raises(InvalidInputError):
        GraphInstance(3, ((1, 4),))  # out of range
    with pytest.raises(InvalidInputError):
        GraphInstance(3, ((1, 2), (1, 2)))  # duplicate
    with pytest.raises(InvalidInputError):
        GraphInstance(0, ())


def test_graph_json_round_trip():
    g = GraphInstance(5, ((1, 4), (2, 5), (1, 2)))
    back = GraphInstance.from_json(g.to_json())
    assert back == g
    with pytest.raises(InvalidInputError):
        GraphInstance.from_json("{not json")
    with pytest.raises(InvalidInputError):
        GraphInstance.from_json('{"edges": []}')


def test_adjacency_matrix():
    g = GraphInstance(4, ((1, 2), (3, 4)))
    a = g.adjacency()
    want = np.zeros((4, 4), dtype=np.uint8)
    want[0, 1] = want[1, 0] = 1
    want[2, 3] = want[3, 2] = 1
    assert np.array_equal(a, want)
    assert np.array_equal(a, a.T)
    assert not a.diagonal().any()


def test_check_seed_bounds():
    assert check_seed(0) == 0
    assert check_seed((1 << 64) - 1) == (1 << 64) - 1
    with pytest.raises(InvalidInputError):
        check_seed(-1)
    with pytest.raises(InvalidInputError):
        check_seed(1 << 64)


def test_substreams_are_deterministic_and_isolated():
    key = stream_key(12345, 3)
    a1 = stream_at(key, 7).random(10)
    a2 = stream_at(key, 7).random(10)
    assert np.array_equal(a1, a2)
    b = stream_at(key, 8).random(10)
    assert not np.array_equal(a1, b)
    # a different context index gives an unrelated stream
    c = stream_at(stream_key(12345, 4), 7).random(10)
    assert not np.array_equal(a1, c)
    with pytest.raises(InvalidInputError):
        stream_at(key, -1)


def test_substream_matches_seedspec_addressing():
    spec = SeedSpec(master_seed=99, sample_index=5)
    x = substream(spec).random(4)
    y = stream_at(stream_key(99), 5).random(4)
    assert np.array_equal(x, y)


def test_sample_graph_limits():
    rng = np.random.default_rng(0)
    empty = sample_graph(5, 0.0, rng)
    assert empty.edges == ()
    full = sample_graph(5, 1.0, rng)
    assert len(full.edges) == 5 * 4 // 2
    with pytest.raises(InvalidInputError):
        sample_graph(5, 1.5, rng)
    with pytest.raises(InvalidInputError):
        sample_graph(0, 0.5, rng)


def test_sample_graph_edge_rate_is_binomial():
    # mean edge count over many draws should sit near q * C(n, 2)
    rng = np.random.default_rng(2024)
    n, q, draws = 6, 0.3, 4000
    pairs = n * (n - 1) // 2
    counts = np.array([len(sample_graph(n, q, rng).edges) for _ in range(draws)])
    mean = counts.mean()
    se = np.sqrt(pairs * q * (1 - q) / draws)
    assert abs(mean - q * pairs) < 5 * se


def test_sample_graph_is_reproducible_per_index():
    key = stream_key(777)
    g1 = sample_graph(6, 0.5, stream_at(key, 42))
    g2 = sample_graph(6, 0.5, stream_at(key, 42))
    assert g1 == g2


def test_build_state_empty_and_single_edge():
    g0 = GraphInstance(3, ())
    assert np.allclose(build_state(g0).amps, plus_state(3).amps)
    g1 = GraphInstance(2, ((1, 2),))
    st = build_state(g1)
    assert np.allclose(st.amps * 2.0, [1, 1, 1, -1])


def test_build_state_matches_manual_gate_sequence():
    g = GraphInstance(4, ((1, 2), (2, 3), (3, 4)))
    manual = plus_state(4)
    for i, j in ((3, 4), (1, 2), (2, 3)):  # scrambled order
        manual = apply_cphase(manual, i, j)
    assert np.allclose(build_state(g).amps, manual.amps, atol=1e-14)
