"""Pure-numpy implementations of the batched simulation kernels.

Every function here has a compiled twin in ``_core``; the two must agree to
within 1e-9 on all outputs (exactly, for the bit-counting paths).  Arrays of
amplitudes are laid out as (batch, 2**n) with qubit i on bit i-1 of the
basis index.
"""

import numpy as np

from ..subsets import mask_to_labels, smaller_side
from ..tolerances import NEGATIVITY_EIG_TOL, SCHMIDT_EIG_FLOOR

BACKEND_NAME = "python"


def build_states(edge_bits, pairs_a, pairs_b, n):
    """Amplitudes of CZ-network states for a block of edge configurations.

    edge_bits: (B, P) 0/1 array, one row per sample, one column per qubit
    pair in the fixed lexicographic order.  pairs_a / pairs_b hold the two
    0-based bit positions of each pair.  Returns (B, 2**n) complex
    amplitudes: the uniform superposition with a sign flip on every basis
    state whose support contains both endpoints of a present edge.
    """
    edge_bits = np.asarray(edge_bits, dtype=np.uint8)
    nblock, npairs = edge_bits.shape
    dim = 1 << n
    amps = np.full((nblock, dim), 2.0 ** (-n / 2.0), dtype=np.complex128)
    idx = np.arange(dim)
    for r in range(npairs):
        both = ((idx >> int(pairs_a[r])) & (idx >> int(pairs_b[r])) & 1).astype(bool)
        rows = edge_bits[:, r].astype(bool)
        if rows.any():
            amps[np.ix_(rows, both)] *= -1.0
    return amps


def _split(amps, n, mask):
    """Reshape (B, 2**n) amplitudes to (B, 2**m, 2**(n-m)) for a subset mask.

    Row index bit k corresponds to the k-th smallest kept label, column
    index bit k to the k-th smallest traced label.
    """
    nblock = amps.shape[0]
    kept = [lab - 1 for lab in mask_to_labels(mask)]
    traced = [p for p in range(n) if not (mask >> p) & 1]
    order = [0]
    order += [n - p for p in reversed(kept)]
    order += [n - p for p in reversed(traced)]
    t = amps.reshape((nblock,) + (2,) * n)
    return t.transpose(order).reshape(nblock, 1 << len(kept), 1 << (n - len(kept)))


def _gram(amps, n, mask):
    a = _split(amps, n, mask)
    return a @ a.conj().swapaxes(1, 2)


def subset_purities(amps, masks, n):
    """Tr[rho_sigma^2] for each sample and each subset mask; (B, K) floats."""
    amps = np.asarray(amps, dtype=np.complex128)
    out = np.empty((amps.shape[0], len(masks)), dtype=np.float64)
    for k, mask in enumerate(masks):
        g = _gram(amps, n, smaller_side(int(mask), n))
        out[:, k] = np.einsum("bij,bij->b", g, g.conj()).real
    return out


def bipartition_negativities(amps, masks, n):
    """Pure-state negativity across each cut; (B, K) floats.

    Computed from the squared Schmidt coefficients mu as
    (sum_i sqrt(mu_i))**2 - 1, clamped at 0.  Coefficients at or below the
    global floor are discarded as eigensolver noise.
    """
    amps = np.asarray(amps, dtype=np.complex128)
    out = np.empty((amps.shape[0], len(masks)), dtype=np.float64)
    for k, mask in enumerate(masks):
        g = _gram(amps, n, smaller_side(int(mask), n))
        mu = np.linalg.eigvalsh(g)
        mu[mu <= SCHMIDT_EIG_FLOOR] = 0.0
        s = np.sqrt(mu).sum(axis=1)
        out[:, k] = np.maximum(s * s - 1.0, 0.0)
    return out


def reduced_pt_negativities(amps, subset_mask, side_masks, n):
    """Negativities of a reduced state under partial transposition.

    The block of states is reduced to the qubits of ``subset_mask``; for
    each mask in ``side_masks`` (a subset of subset_mask, in global bit
    positions) the reduced density matrix is partially transposed on that
    side and the negativity -2 * sum(eig < -tol) is returned, clamped at 0.
    Output shape (B, len(side_masks)).
    """
    amps = np.asarray(amps, dtype=np.complex128)
    subset_mask = int(subset_mask)
    nblock = amps.shape[0]
    kept = [lab - 1 for lab in mask_to_labels(subset_mask)]
    s = len(kept)
    local = {p: k for k, p in enumerate(kept)}
    rho = _gram(amps, n, subset_mask)
    rho4 = rho.reshape((nblock,) + (2,) * (2 * s))
    out = np.empty((nblock, len(side_masks)), dtype=np.float64)
    for j, side in enumerate(side_masks):
        side = int(side)
        if side & ~subset_mask:
            raise ValueError("side mask must lie inside the subset mask")
        order = list(range(1 + 2 * s))
        for p in mask_to_labels(side):
            k = local[p - 1]
            row_ax = 1 + (s - 1 - k)
            col_ax = 1 + s + (s - 1 - k)
            order[row_ax], order[col_ax] = order[col_ax], order[row_ax]
        pt = rho4.transpose(order).reshape(nblock, 1 << s, 1 << s)
        eig = np.linalg.eigvalsh(pt)
        neg = np.where(eig < -NEGATIVITY_EIG_TOL, eig, 0.0).sum(axis=1)
        out[:, j] = np.maximum(-2.0 * neg, 0.0)
    return out


def hermitian_eigenvalues(h):
    """Ascending eigenvalues of a Hermitian matrix (LAPACK path)."""
    return np.linalg.eigvalsh(np.asarray(h, dtype=np.complex128))
