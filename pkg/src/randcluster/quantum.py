"""Exact state-vector machinery for small qubit registers.

Bit convention (load-bearing, used by every other module): qubit labels are
1-based and qubit i occupies bit i-1 of the basis index, so qubit 1 is the
least significant bit.  The amplitude array of an n-qubit state has length
2**n and amps[b] multiplies |b_n ... b_2 b_1>.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .linalg import hermitian_eigenvalues
from .subsets import check_subset
from .tolerances import HERMITIAN_TOL, NORM_TOL, SCHMIDT_EIG_FLOOR

MAX_STATE_QUBITS = 12
MAX_DENSITY_QUBITS = 10

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state of n qubits."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_STATE_QUBITS:
            raise ResourceLimitError(
                f"state vectors support 1..{MAX_STATE_QUBITS} qubits, got {self.n}"
            )
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise InvalidInputError(
                f"amplitude array must have shape ({1 << self.n},), got {amps.shape}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidInputError(f"state is not normalized: |amps|^2 = {norm!r}")
        object.__setattr__(self, "amps", amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix over an ordered tuple of qubit labels.

    qubit_labels records which register qubits the matrix describes,
    ascending; label qubit_labels[k] sits on bit k of the row/column index.
    """

    matrix: np.ndarray
    qubit_labels: tuple

    def __post_init__(self):
        labels = tuple(int(x) for x in self.qubit_labels)
        if len(labels) == 0 or list(labels) != sorted(set(labels)):
            raise InvalidInputError(f"labels must be distinct and ascending: {labels}")
        if len(labels) > MAX_DENSITY_QUBITS:
            raise ResourceLimitError(
                f"dense density matrices support up to {MAX_DENSITY_QUBITS} qubits"
            )
        m = np.asarray(self.matrix, dtype=np.complex128)
        dim = 1 << len(labels)
        if m.shape != (dim, dim):
            raise InvalidInputError(f"matrix shape {m.shape} does not match {len(labels)} qubits")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidInputError("density matrix is not Hermitian within tolerance")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidInputError(f"density matrix trace is {tr!r}, expected 1")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "qubit_labels", labels)

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_labels)


def plus_state(n: int) -> StateVector:
    """|+>^n, the uniform superposition."""
    if not 1 <= n <= MAX_STATE_QUBITS:
        raise ResourceLimitError(f"n must be in 1..{MAX_STATE_QUBITS}, got {n}")
    dim = 1 << n
    return StateVector(n, np.full(dim, dim ** -0.5, dtype=np.complex128))


def apply_cphase(state: StateVector, i: int, j: int) -> StateVector:
    """Controlled-Z between qubits i and j (symmetric, i != j)."""
    if i == j:
        raise InvalidInputError("cphase needs two distinct qubits")
    check_subset(state.n, (i, j))
    idx = np.arange(1 << state.n)
    both = ((idx >> (i - 1)) & (idx >> (j - 1)) & 1).astype(bool)
    amps = state.amps.copy()
    amps[both] *= -1.0
    return StateVector(state.n, amps)


def apply_hadamard(state: StateVector, i: int) -> StateVector:
    (i,) = check_subset(state.n, (i,))
    low = 1 << (i - 1)
    t = state.amps.reshape(-1, 2, low)
    out = np.empty_like(t)
    out[:, 0, :] = (t[:, 0, :] + t[:, 1, :]) * _INV_SQRT2
    out[:, 1, :] = (t[:, 0, :] - t[:, 1, :]) * _INV_SQRT2
    return StateVector(state.n, out.reshape(-1))


def split_matrix(state: StateVector, keep) -> np.ndarray:
    """Amplitudes reshaped to (2**m, 2**(n-m)) for a kept subset.

    Row bit k corresponds to the k-th smallest kept label, column bit k to
    the k-th smallest traced label.  This is the workhorse behind
    reductions and Schmidt spectra; the full projector is never formed.
    """
    n = state.n
    kept = check_subset(n, keep)
    traced = [p for p in range(1, n + 1) if p not in set(kept)]
    order = [n - (lab - 1) - 1 for lab in reversed(kept)]
    order += [n - (lab - 1) - 1 for lab in reversed(traced)]
    t = state.amps.reshape((2,) * n)
    return t.transpose(order).reshape(1 << len(kept), 1 << len(traced))


def reduce_state(state: StateVector, keep) -> DensityMatrix:
    """Reduced density matrix on the kept qubits (partial trace of the rest)."""
    kept = check_subset(state.n, keep)
    if len(kept) > MAX_DENSITY_QUBITS:
        raise ResourceLimitError(
            f"reduction to {len(kept)} qubits exceeds the {MAX_DENSITY_QUBITS}-qubit cap"
        )
    a = split_matrix(state, kept)
    return DensityMatrix(a @ a.conj().T, kept)


def projector(state: StateVector) -> DensityMatrix:
    """|psi><psi| as a DensityMatrix over all qubits."""
    return reduce_state(state, range(1, state.n + 1))


def partial_transpose(rho: DensityMatrix, side) -> np.ndarray:
    """Transpose the given side of a bipartition of rho's qubits.

    ``side`` is a proper non-empty subset of rho.qubit_labels.  Returns a
    plain matrix (the result is generally not a state).  Transposing the
    complementary side yields the elementwise global transpose.
    """
    labels = rho.qubit_labels
    side = check_subset(max(labels), side)
    if not set(side) <= set(labels):
        raise InvalidInputError(f"side {side} is not contained in {labels}")
    if len(side) == len(labels):
        raise InvalidInputError("side must be a proper subset; use .T for the full transpose")
    s = len(labels)
    local = {lab: k for k, lab in enumerate(labels)}
    t = rho.matrix.reshape((2,) * (2 * s))
    order = list(range(2 * s))
    for lab in side:
        k = local[lab]
        row_ax = s - 1 - k
        col_ax = 2 * s - 1 - k
        order[row_ax], order[col_ax] = order[col_ax], order[row_ax]
    return t.transpose(order).reshape(1 << s, 1 << s)


def schmidt_squares(state: StateVector, side) -> np.ndarray:
    """Squared Schmidt coefficients across the cut (side | rest), descending.

    Computed as the nonzero eigenvalues of the reduced state on the smaller
    half of the cut (both halves share them); values at or below the global
    floor are dropped as eigensolver noise.  The result sums to 1 within
    1e-10 and a product state returns the single value [1.0].
    """
    n = state.n
    side = check_subset(n, side)
    if len(side) == n:
        raise InvalidInputError("side must be a proper subset of the register")
    if 2 * len(side) > n:
        side = tuple(p for p in range(1, n + 1) if p not in set(side))
    a = split_matrix(state, side)
    mu = hermitian_eigenvalues(a @ a.conj().T)
    mu = mu[mu > SCHMIDT_EIG_FLOOR]
    return np.sort(mu)[::-1]
