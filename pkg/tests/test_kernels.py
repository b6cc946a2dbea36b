"""The compiled and pure-numpy kernel backends must be interchangeable."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from randcluster import kernels
from randcluster.graphs import GraphInstance, build_state
from randcluster.kernels import fallback
from randcluster.measures import negativity, pure_negativity, purity
from randcluster.quantum import projector, reduce_state
from randcluster.subsets import pair_list, size_masks

try:
    from randcluster.kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled extension not built")


def _random_block(n, nblock, seed):
    rng = np.random.default_rng(seed)
    pairs = pair_list(n)
    bits = (rng.random((nblock, len(pairs))) < 0.5).astype(np.uint8)
    pa = np.array([i - 1 for i, _ in pairs], dtype=np.int64)
    pb = np.array([j - 1 for _, j in pairs], dtype=np.int64)
    return bits, pa, pb


def test_active_backend_is_declared():
    assert kernels.BACKEND in ("compiled", "python")
    if _core is not None and os.environ.get("RANDCLUSTER_FORCE_FALLBACK") != "1":
        assert kernels.BACKEND == "compiled"


def test_fallback_build_states_matches_library_route():
    for n in (2, 3, 4, 5):
        bits, pa, pb = _random_block(n, 6, 50 + n)
        amps = fallback.build_states(bits, pa, pb, n)
        pairs = pair_list(n)
        for b in range(bits.shape[0]):
            edges = tuple(p for p, on in zip(pairs, bits[b]) if on)
            st = build_state(GraphInstance(n, edges))
            assert np.allclose(amps[b], st.amps, atol=1e-14)


def test_fallback_purities_match_dense_reductions():
    n = 5
    bits, pa, pb = _random_block(n, 4, 7)
    amps = fallback.build_states(bits, pa, pb, n)
    masks = [m for size in range(1, n) for m in size_masks(n, size)][:12]
    got = fallback.subset_purities(amps, masks, n)
    pairs = pair_list(n)
    for b in range(bits.shape[0]):
        edges = tuple(p for p, on in zip(pairs, bits[b]) if on)
        st = build_state(GraphInstance(n, edges))
        for k, mask in enumerate(masks):
            labels = tuple(p + 1 for p in range(n) if (mask >> p) & 1)
            assert abs(got[b, k] - purity(reduce_state(st, labels))) < 1e-10


def test_fallback_negativities_match_dense_route():
    n = 4
    bits, pa, pb = _random_block(n, 5, 13)
    amps = fallback.build_states(bits, pa, pb, n)
    masks = [m for m in size_masks(n, 2)]
    got = fallback.bipartition_negativities(amps, masks, n)
    pairs = pair_list(n)
    for b in range(bits.shape[0]):
        edges = tuple(p for p, on in zip(pairs, bits[b]) if on)
        st = build_state(GraphInstance(n, edges))
        for k, mask in enumerate(masks):
            labels = tuple(p + 1 for p in range(n) if (mask >> p) & 1)
            assert abs(got[b, k] - pure_negativity(st, labels)) < 1e-9


def test_fallback_reduced_pt_matches_dense_route():
    n = 5
    bits, pa, pb = _random_block(n, 4, 29)
    amps = fallback.build_states(bits, pa, pb, n)
    subset = 0b10110  # qubits 2, 3, 5
    sides = [0b00010, 0b00100, 0b10000]
    got = fallback.reduced_pt_negativities(amps, subset, sides, n)
    pairs = pair_list(n)
    for b in range(bits.shape[0]):
        edges = tuple(p for p, on in zip(pairs, bits[b]) if on)
        rho = reduce_state(build_state(GraphInstance(n, edges)), (2, 3, 5))
        for j, side in enumerate(sides):
            labels = tuple(p + 1 for p in range(n) if (side >> p) & 1)
            assert abs(got[b, j] - negativity(rho, labels)) < 1e-9


def test_fallback_rejects_side_outside_subset():
    bits, pa, pb = _random_block(3, 2, 1)
    amps = fallback.build_states(bits, pa, pb, 3)
    with pytest.raises(ValueError):
        fallback.reduced_pt_negativities(amps, 0b011, [0b100], 3)


@needs_core
def test_backends_agree_on_states_and_purities():
    for n in (2, 3, 4, 5, 6):
        bits, pa, pb = _random_block(n, 8, 200 + n)
        a_py = fallback.build_states(bits, pa, pb, n)
        a_c = _core.build_states(bits, pa, pb, n)
        assert np.allclose(a_py, a_c, atol=1e-14)
        masks = [m for size in range(1, n) for m in size_masks(n, size)]
        p_py = fallback.subset_purities(a_py, masks, n)
        p_c = _core.subset_purities(a_c, masks, n)
        assert np.allclose(p_py, p_c, atol=1e-9)


@needs_core
def test_backends_agree_on_negativities():
    for n in (3, 4, 5):
        bits, pa, pb = _random_block(n, 6, 300 + n)
        amps = fallback.build_states(bits, pa, pb, n)
        masks = [m for size in range(1, n // 2 + 1) for m in size_masks(n, size)]
        n_py = fallback.bipartition_negativities(amps, masks, n)
        n_c = _core.bipartition_negativities(amps, masks, n)
        assert np.allclose(n_py, n_c, atol=1e-9)
    bits, pa, pb = _random_block(5, 6, 400)
    amps = fallback.build_states(bits, pa, pb, 5)
    subset = 0b01101
    sides = [0b00001, 0b00100, 0b01000, 0b00101]
    r_py = fallback.reduced_pt_negativities(amps, subset, sides, 5)
    r_c = _core.reduced_pt_negativities(amps, subset, sides, 5)
    assert np.allclose(r_py, r_c, atol=1e-9)


@needs_core
def test_backends_agree_on_eigenvalues():
    rng = np.random.default_rng(17)
    for d in (2, 4, 8, 16):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = (a + a.conj().T) / 2
        assert np.allclose(
            _core.hermitian_eigenvalues(h), fallback.hermitian_eigenvalues(h), atol=1e-9
        )


def test_force_fallback_env_var_switches_backend():
    code = "from randcluster import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, RANDCLUSTER_FORCE_FALLBACK="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "python"
