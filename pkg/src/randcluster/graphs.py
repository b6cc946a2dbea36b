"""Random graph sampling and graph -> cluster-state construction.

A graph on n vertices is drawn by giving every unordered pair (i, j) an
independent uniform variate u in [0, 1) and keeping the edge iff u < q.
q = 0 therefore yields the empty graph and q = 1 the complete graph, with
no boundary ambiguity.  The variates for one sample are consumed in
lexicographic pair order from a counter-based substream, so any sample of
any sweep can be regenerated in isolation.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .quantum import StateVector, apply_cphase, plus_state
from .subsets import pair_list

# Philox counter blocks reserved per sample index; one sample never consumes
# anywhere near this many 256-bit counter increments.
PHILOX_COUNTER_STRIDE = 1 << 20

MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class GraphInstance:
    """Simple undirected graph on vertices 1..n with a canonical edge list."""

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"graph needs at least one vertex, got n={self.n}")
        seen = set()
        for e in self.edges:
            if len(e) != 2:
                raise InvalidInputError(f"malformed edge {e!r}")
            i, j = int(e[0]), int(e[1])
            if not (1 <= i < j <= self.n):
                raise InvalidInputError(f"edge ({i}, {j}) is not 1 <= i < j <= {self.n}")
            if (i, j) in seen:
                raise InvalidInputError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "GraphInstance":
        try:
            obj = json.loads(text)
            return cls(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"malformed graph JSON: {exc}") from exc

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, j in self.edges:
            a[i - 1, j - 1] = 1
            a[j - 1, i - 1] = 1
        return a


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise InvalidInputError(f"seed must be a 64-bit non-negative integer, got {seed}")
    return seed


def stream_key(master_seed: int, *context: int) -> np.ndarray:
    """128-bit Philox key derived from the master seed and integer context."""
    ss = np.random.SeedSequence(check_seed(master_seed), spawn_key=tuple(context))
    return ss.generate_state(2, np.uint64)


def stream_at(key, sample_index: int) -> np.random.Generator:
    """Counter-based generator positioned at one sample's private block."""
    if sample_index < 0:
        raise InvalidInputError("sample_index must be non-negative")
    bitgen = np.random.Philox(
        counter=int(sample_index) * PHILOX_COUNTER_STRIDE, key=np.asarray(key, np.uint64)
    )
    return np.random.Generator(bitgen)


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one sample's random substream: (master seed, sample index)."""

    master_seed: int
    sample_index: int


def substream(spec: SeedSpec) -> np.random.Generator:
    return stream_at(stream_key(spec.master_seed), spec.sample_index)


def sample_graph(n: int, q: float, rng: np.random.Generator) -> GraphInstance:
    """One random graph: each pair independently present with probability q."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    if not 0.0 <= q <= 1.0:
        raise InvalidInputError(f"edge probability q={q} outside [0, 1]")
    pairs = pair_list(n)
    u = rng.random(len(pairs))
    edges = tuple(p for p, x in zip(pairs, u) if x < q)
    return GraphInstance(n, edges)


def build_state(graph: GraphInstance) -> StateVector:
    """Cluster state of a graph: |+>^n with one CZ per edge.

    CZ gates commute, so edge order is irrelevant; the canonical sorted
    order is used anyway.
    """
    state = plus_state(graph.n)
    for i, j in graph.edges:
        state = apply_cphase(state, i, j)
    return state
