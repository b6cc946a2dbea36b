"""Dense complex matrix helpers and GF(2) rank computation."""

import numpy as np

from . import kernels
from .errors import InvalidInputError
from .tolerances import HERMITIAN_TOL


def as_square_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise InvalidInputError("dagger expects a 2-d array")
    return a.conj().T


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"incompatible shapes {a.shape} and {b.shape}")
    return a @ b


def trace(m) -> complex:
    return complex(np.trace(as_square_matrix(m)))


def frobenius_product(a, b) -> complex:
    """Tr[a^dagger b]; the two matrices must share a shape."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape or a.ndim != 2:
        raise InvalidInputError(f"incompatible shapes {a.shape} and {b.shape}")
    return complex(np.sum(a.conj() * b))


def hermitian_deviation(m) -> float:
    """Largest entrywise deviation between m and its dagger."""
    a = as_square_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_deviation(m) <= tol


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Dispatches to the compiled cyclic-Jacobi solver when available and to
    LAPACK otherwise; both are held to the same accuracy contract (the sum
    of the eigenvalues matches the trace, and the sum of their squares
    matches Tr[m^2], to within 1e-9 for unit-scale input).
    """
    a = as_square_matrix(m)
    if a.shape[0] == 0:
        raise InvalidInputError("cannot take eigenvalues of an empty matrix")
    if hermitian_deviation(a) > tol:
        raise InvalidInputError("matrix is not Hermitian within tolerance")
    return np.asarray(kernels.hermitian_eigenvalues(a), dtype=np.float64)


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a 0/1 matrix (any shape, including empty)."""
    a = np.asarray(matrix)
    if a.ndim != 2:
        raise InvalidInputError("gf2_rank expects a 2-d array")
    if a.size == 0:
        return 0
    if not np.isin(a, (0, 1)).all():
        raise InvalidInputError("gf2_rank entries must be 0 or 1")
    pivots = {}
    rank = 0
    for row in a.astype(np.uint64):
        # pack the row into a python int, bit c for column c
        r = 0
        for c, v in enumerate(row):
            if v:
                r |= 1 << c
        while r:
            lead = r.bit_length() - 1
            if lead in pivots:
                r ^= pivots[lead]
            else:
                pivots[lead] = r
                rank += 1
                break
    return rank
