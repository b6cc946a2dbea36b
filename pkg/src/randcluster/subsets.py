"""Bitmask bookkeeping for qubit subsets.

Qubit labels are 1-based and label i maps to bit i-1 of a basis index, so
qubit 1 is the least significant bit.  A subset of an n-qubit register is a
mask in [1, 2**n - 1]; the enumeration orders defined here are part of the
reproducibility contract and must not change.
"""

from itertools import combinations

from .errors import InvalidInputError


def labels_to_mask(labels) -> int:
    mask = 0
    for lab in labels:
        bit = 1 << (int(lab) - 1)
        if mask & bit:
            raise InvalidInputError(f"duplicate qubit label {lab}")
        mask |= bit
    return mask


def mask_to_labels(mask: int) -> tuple:
    labels = []
    bit = 0
    while mask >> bit:
        if (mask >> bit) & 1:
            labels.append(bit + 1)
        bit += 1
    return tuple(labels)


def check_subset(n: int, labels) -> tuple:
    """Validate a subset of 1..n and return it sorted."""
    subset = tuple(sorted(int(x) for x in labels))
    if not subset:
        raise InvalidInputError("subset must be non-empty")
    if len(set(subset)) != len(subset):
        raise InvalidInputError(f"duplicate labels in {labels}")
    if subset[0] < 1 or subset[-1] > n:
        raise InvalidInputError(f"labels {labels} outside 1..{n}")
    return subset


def size_masks(n: int, size: int) -> list:
    """All masks of the given popcount, ascending."""
    out = [labels_to_mask(c) for c in combinations(range(1, n + 1), size)]
    out.sort()
    return out


def smaller_side(mask: int, n: int) -> int:
    """Canonical representative of the bipartition {mask, complement}.

    Returns whichever side has fewer qubits; on a tie, the side that
    contains qubit 1.  Purity and Schmidt spectra are invariant under this
    swap, and using one fixed side keeps the mirrored counts exact.
    """
    full = (1 << n) - 1
    comp = full ^ mask
    m = mask.bit_count()
    if 2 * m > n:
        return comp
    if 2 * m == n and not mask & 1:
        return comp
    return mask


def census_masks(n: int) -> list:
    """Evaluation masks for the reduction census.

    One mask per complementary pair of proper subsets: every subset of size
    below n/2, plus (for even n) the half of the size-n/2 subsets containing
    qubit 1.  Ordered by size, then by mask value.
    """
    out = []
    for m in range(1, n // 2 + 1):
        for mask in size_masks(n, m):
            if 2 * m == n and not mask & 1:
                continue
            out.append(mask)
    return out


def census_sizes(n: int) -> list:
    """Pairs (m, n - m) of reduction sizes represented by each census mask."""
    return [(mask.bit_count(), n - mask.bit_count()) for mask in census_masks(n)]


def canonical_bipartitions(n: int) -> list:
    """Masks for the 2**(n-1) - 1 bipartitions of the full register.

    The canonical side is the one containing qubit 1; the trivial cut
    (everything on one side) is excluded.  Ascending mask order.
    """
    if n < 2:
        raise InvalidInputError("bipartitions need at least 2 qubits")
    full = (1 << n) - 1
    return [mask for mask in range(1, full, 2) if mask != full]


def pair_list(n: int) -> list:
    """All unordered qubit pairs (i, j), i < j, in lexicographic order."""
    return list(combinations(range(1, n + 1), 2))


def triple_list(n: int) -> list:
    """All unordered qubit triples, lexicographic."""
    return list(combinations(range(1, n + 1), 3))
