"""Binary-rank oracle versus the dense state-vector route."""

import itertools

import numpy as np
import pytest

from randcluster.errors import InvalidInputError
from randcluster.graphs import GraphInstance, build_state
from randcluster.measures import negativity, purity, pure_negativity
from randcluster.oracle import cut_matrix, cut_rank, oracle_pure_negativity, oracle_purity
from randcluster.quantum import projector, reduce_state


def test_cut_matrix_layout():
    g = GraphInstance(4, ((1, 2), (1, 3), (2, 4)))
    m = cut_matrix(g, (1, 2))
    # rows are vertices 1, 2; columns are vertices 3, 4
    assert np.array_equal(m, [[1, 0], [0, 1]])
    assert cut_rank(g, (1, 2)) == 2


def test_cut_matrix_rejects_improper_subsets():
    g = GraphInstance(3, ((1, 2),))
    with pytest.raises(InvalidInputError):
        cut_matrix(g, (1, 2, 3))
    with pytest.raises(InvalidInputError):
        cut_matrix(g, ())
    with pytest.raises(InvalidInputError):
        cut_matrix(g, (0, 1))


def test_complete_graph_cut_rank_is_one():
    # the cut block of K_n is all ones: rank 1 whatever the split
    for n in (3, 4, 5, 6):
        g = GraphInstance(n, tuple((i, j) for i in range(1, n) for j in range(i + 1, n + 1)))
        for m in range(1, n):
            for sub in itertools.combinations(range(1, n + 1), m):
                assert cut_rank(g, sub) == 1
                assert oracle_purity(g, sub) == 0.5
                assert oracle_pure_negativity(g, sub) == 1.0


def test_empty_graph_is_unentangled():
    g = GraphInstance(5, ())
    for sub in ((1,), (2, 4), (1, 3, 5)):
        assert cut_rank(g, sub) == 0
        assert oracle_purity(g, sub) == 1.0
        assert oracle_pure_negativity(g, sub) == 0.0


def test_oracle_matches_dense_route_on_random_graphs(random_graph):
    checked = 0
    for n in (2, 3, 4, 5, 6):
        for seed in range(12):
            g = random_graph(n, seed)
            st = build_state(g)
            rho = projector(st)
            for m in range(1, n):
                for sub in itertools.combinations(range(1, n + 1), m):
                    red = reduce_state(st, sub)
                    assert abs(purity(red) - oracle_purity(g, sub)) < 1e-9
                    dense_neg = negativity(rho, sub)
                    assert abs(dense_neg - oracle_pure_negativity(g, sub)) < 1e-9
                    assert abs(pure_negativity(st, sub) - dense_neg) < 1e-9
                    checked += 1
    assert checked > 1000


def test_cut_rank_symmetric_under_complement(random_graph):
    # rank of the block equals rank of its transpose, so both sides agree
    for seed in range(8):
        g = random_graph(6, 100 + seed, q=0.4)
        for m in range(1, 6):
            for sub in itertools.combinations(range(1, 7), m):
                comp = tuple(v for v in range(1, 7) if v not in sub)
                assert cut_rank(g, sub) == cut_rank(g, comp)
