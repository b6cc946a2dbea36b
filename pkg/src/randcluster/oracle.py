"""Binary-rank oracle for graph-state reductions.

For a cluster state built from graph G, the reduced state on a subset sigma
has purity 2**(-r) and pure-state negativity 2**r - 1, where r is the GF(2)
rank of the adjacency submatrix between sigma and its complement.  This
route shares no code with the dense state-vector path, which makes it an
independent cross-check: the two must agree exactly (to floating-point
tolerance) on every graph and every cut.
"""

from .errors import InvalidInputError
from .graphs import GraphInstance
from .linalg import gf2_rank
from .subsets import check_subset


def cut_matrix(graph: GraphInstance, subset):
    """Adjacency block between the subset (rows) and its complement (cols).

    Rows follow the subset sorted ascending, columns the complement sorted
    ascending.
    """
    subset = check_subset(graph.n, subset)
    if len(subset) == graph.n:
        raise InvalidInputError("subset must be proper: its complement indexes the columns")
    comp = [v for v in range(1, graph.n + 1) if v not in set(subset)]
    a = graph.adjacency()
    rows = [v - 1 for v in subset]
    cols = [v - 1 for v in comp]
    return a[rows][:, cols]


def cut_rank(graph: GraphInstance, subset) -> int:
    """GF(2) rank of the cut matrix across (subset | rest)."""
    return gf2_rank(cut_matrix(graph, subset))


def oracle_purity(graph: GraphInstance, subset) -> float:
    """Exact purity of the reduction onto the subset: 2**(-cut rank)."""
    return 2.0 ** (-cut_rank(graph, subset))


def oracle_pure_negativity(graph: GraphInstance, subset) -> float:
    """Exact negativity across the cut (subset | rest): 2**rank - 1."""
    return float((1 << cut_rank(graph, subset)) - 1)
