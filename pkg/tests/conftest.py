import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)


@pytest.fixture
def random_state():
    """Factory for normalized Haar-like random state vectors."""
    from randcluster.quantum import StateVector

    def make(n, seed):
        gen = np.random.default_rng(seed)
        amps = gen.normal(size=1 << n) + 1j * gen.normal(size=1 << n)
        amps /= np.linalg.norm(amps)
        return StateVector(n, amps)

    return make


@pytest.fixture
def random_graph():
    """Factory for seeded random graph instances."""
    from randcluster.graphs import GraphInstance
    from randcluster.subsets import pair_list

    def make(n, seed, q=0.5):
        gen = np.random.default_rng(seed)
        edges = [p for p in pair_list(n) if gen.random() < q]
        return GraphInstance(n, edges)

    return make
