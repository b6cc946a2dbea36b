"""Batched simulation kernels with a compiled fast path.

At import time the compiled extension is preferred; the pure-numpy fallback
(`randcluster.kernels.fallback`) is selected when the extension is missing
or when RANDCLUSTER_FORCE_FALLBACK=1 is set.  Both backends implement the
same five functions with identical numerical conventions, and the test
suite holds them to agreement within 1e-9.
"""

import os

from . import fallback

if os.environ.get("RANDCLUSTER_FORCE_FALLBACK") == "1":
    _impl = fallback
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = fallback

BACKEND = _impl.BACKEND_NAME

build_states = _impl.build_states
subset_purities = _impl.subset_purities
bipartition_negativities = _impl.bipartition_negativities
reduced_pt_negativities = _impl.reduced_pt_negativities
hermitian_eigenvalues = _impl.hermitian_eigenvalues

__all__ = [
    "BACKEND",
    "build_states",
    "subset_purities",
    "bipartition_negativities",
    "reduced_pt_negativities",
    "hermitian_eigenvalues",
]
