"""Monte Carlo toolkit for the entanglement structure of random CZ-gate
cluster states: exact reduced-state purities and negativities, mixedness
thresholds, average-state accumulation and entanglement percolation scans.
"""

__version__ = "0.1.0"

from .engine import (  # noqa: F401
    QPointAggregate,
    SweepConfig,
    accumulate_average_state,
    percolation_scan,
    reduction_profile,
    run_sweep,
)
from .graphs import GraphInstance, build_state, sample_graph  # noqa: F401
from .measures import (  # noqa: F401
    census,
    l1_coherence,
    multipartite_negativity,
    negativity,
    pure_negativity,
    purity,
)
from .quantum import DensityMatrix, StateVector, plus_state  # noqa: F401
