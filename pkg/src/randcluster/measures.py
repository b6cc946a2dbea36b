"""Entanglement and coherence figures of merit.

Two independent routes exist for most quantities: the dense ones here and
the GF(2) rank oracle in ``oracle`` (graph states only).  The test suite
holds them to exact agreement; neither route may be "simplified" in terms
of the other.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidInputError
from .linalg import hermitian_eigenvalues
from .quantum import DensityMatrix, StateVector, partial_transpose, reduce_state, schmidt_squares
from .subsets import canonical_bipartitions, check_subset, mask_to_labels, size_masks
from .tolerances import NEGATIVITY_EIG_TOL, PURITY_TOL

ROOT_MODES = ("paper_n", "bipartition_count")


def _check_root_mode(root_mode: str) -> str:
    if root_mode not in ROOT_MODES:
        raise InvalidInputError(f"root_mode must be one of {ROOT_MODES}, got {root_mode!r}")
    return root_mode


def purity(rho: DensityMatrix) -> float:
    """Tr[rho^2], computed as the squared Frobenius norm."""
    m = rho.matrix
    return float(np.sum(m.real * m.real + m.imag * m.imag))


def l1_coherence(rho: DensityMatrix) -> float:
    """Sum of moduli of the strictly off-diagonal entries."""
    a = np.abs(rho.matrix)
    return float(a.sum() - np.trace(a))


def negativity(rho: DensityMatrix, side) -> float:
    """PT negativity: -2 times the sum of eigenvalues below -1e-10, clamped at 0."""
    pt = partial_transpose(rho, side)
    lam = hermitian_eigenvalues(pt)
    neg = float(lam[lam < -NEGATIVITY_EIG_TOL].sum())
    return max(-2.0 * neg, 0.0)


def pure_negativity(state: StateVector, side) -> float:
    """Negativity across (side | rest) of a pure state, via its Schmidt spectrum.

    Equals negativity(projector(state), side) to within 1e-9 but costs only
    an eigensolve on the smaller half of the cut.
    """
    mu = schmidt_squares(state, side)
    s = float(np.sqrt(mu).sum())
    return max(s * s - 1.0, 0.0)


def _rooted_product(factors, n_qubits: int, root_mode: str) -> float:
    """Root of a product of negativity factors without overflowing.

    The factor product over hundreds of bipartitions can exceed the float
    range, so the product is accumulated in log space.  Any zero factor
    makes the result exactly 0.
    """
    logs = 0.0
    for f in factors:
        if f <= 0.0:
            return 0.0
        logs += np.log(f)
    if root_mode == "paper_n":
        return float(np.exp(logs / n_qubits))
    return float(np.exp(logs / len(factors)))


def multipartite_negativity(state: StateVector, root_mode: str = "paper_n") -> float:
    """Rooted product of pure-state negativities over all bipartitions.

    The product runs over the 2**(n-1) - 1 splits whose canonical side
    contains qubit 1.  root_mode "paper_n" takes the n-th root;
    "bipartition_count" takes the geometric mean over the splits.  The two
    coincide for n = 3.  Zero whenever any split is separable.
    """
    _check_root_mode(root_mode)
    if state.n < 2:
        raise InvalidInputError("multipartite negativity needs at least 2 qubits")
    factors = [
        pure_negativity(state, mask_to_labels(mask))
        for mask in canonical_bipartitions(state.n)
    ]
    return _rooted_product(factors, state.n, root_mode)


def mixed_multipartite_negativity(rho: DensityMatrix, root_mode: str = "paper_n") -> float:
    """Multipartite negativity of a (possibly mixed) density matrix.

    Same rooted product as the pure-state version, but every factor is a PT
    negativity of rho.  For a 3-qubit reduction this is the tripartite
    value: cube root of the product over its 3 bipartitions, identical in
    both root modes.
    """
    _check_root_mode(root_mode)
    n = rho.n_qubits
    if n < 2:
        raise InvalidInputError("multipartite negativity needs at least 2 qubits")
    labels = rho.qubit_labels
    factors = []
    for mask in canonical_bipartitions(n):
        side = tuple(labels[k] for k in range(n) if (mask >> k) & 1)
        factors.append(negativity(rho, side))
    return _rooted_product(factors, n, root_mode)


@dataclass(frozen=True)
class NegativityReport:
    """All bipartition negativities of a pure state plus their rooted product."""

    per_bipartition: dict
    multipartite: float
    root_mode: str


def negativity_report(state: StateVector, root_mode: str = "paper_n") -> NegativityReport:
    _check_root_mode(root_mode)
    per = {}
    for mask in canonical_bipartitions(state.n):
        side = mask_to_labels(mask)
        per[side] = pure_negativity(state, side)
    multi = _rooted_product(list(per.values()), state.n, root_mode)
    return NegativityReport(per_bipartition=per, multipartite=multi, root_mode=root_mode)


@dataclass(frozen=True)
class ReductionCensus:
    """Mixedness counts of every proper reduction of a pure state.

    per_size maps reduction size m to (total_count, mixed_count); f2_hits
    counts 2-qubit reductions whose purity equals 1/4 within the tolerance.
    """

    n: int
    per_size: dict
    f2_hits: int

    @property
    def f2_total(self) -> int:
        return comb(self.n, 2) if self.n >= 3 else 0


def census(state: StateVector, purity_tol: float = PURITY_TOL) -> ReductionCensus:
    """Count mixed reductions of every size, and the F2 hits among pairs.

    Purity is evaluated once per complementary pair of subsets, on the
    smaller side, and attributed to both sizes; for a pure global state the
    two sides share their spectrum, so this keeps the symmetry
    mixed_count(m) = mixed_count(n - m) exact by construction.
    """
    n = state.n
    if purity_tol <= 0:
        raise InvalidInputError("purity_tol must be positive")
    mixed = {m: 0 for m in range(1, n)}
    f2_hits = 0
    for m in range(1, n // 2 + 1):
        for mask in size_masks(n, m):
            if 2 * m == n and not mask & 1:
                continue
            p = purity(reduce_state(state, mask_to_labels(mask)))
            is_mixed = p < 1.0 - purity_tol
            sizes = (m,) if 2 * m == n else (m, n - m)
            for size in sizes:
                if is_mixed:
                    mixed[size] += 2 if 2 * m == n else 1
            if 2 in (m, n - m) and abs(p - 0.25) < purity_tol:
                f2_hits += 2 if 2 * m == n and m == 2 else 1
    per_size = {m: (comb(n, m), mixed[m]) for m in range(1, n)}
    return ReductionCensus(n=n, per_size=per_size, f2_hits=f2_hits)
