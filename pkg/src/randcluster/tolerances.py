"""Numerical tolerances used consistently by every computation path.

These values are part of the observable behaviour of the package: counting
rules (mixed / not mixed, entangled / separable) must agree between the
dense linear-algebra route, the batched kernels and the rank oracle, so
all of them read their cutoffs from here.
"""

# Hermiticity check: max entrywise deviation between M and its dagger.
HERMITIAN_TOL = 1e-12

# State vectors and density matrices must be normalized this tightly.
NORM_TOL = 1e-10

# Squared Schmidt coefficients at or below this floor are treated as exact
# zeros.  Without the floor, eigensolver noise of order 1e-16 turns into
# sqrt-amplified contributions of order 1e-8 in pure-state negativities.
SCHMIDT_EIG_FLOOR = 1e-10

# Partial-transpose eigenvalues strictly below -NEGATIVITY_EIG_TOL count as
# negative; anything in [-tol, 0) is eigensolver noise.
NEGATIVITY_EIG_TOL = 1e-10

# A negativity value above this threshold counts as "entangled" when the
# quantity of interest is a yes/no flag (percolation-style counting).
NEGATIVITY_ZERO_TOL = 1e-10

# Default purity cutoff: a reduction is mixed when purity < 1 - PURITY_TOL,
# and a two-qubit reduction is maximally mixed when |purity - 1/4| < PURITY_TOL.
PURITY_TOL = 1e-9

# Jacobi eigensolver: stop when the off-diagonal Frobenius norm drops below
# this, with a hard cap on the number of cyclic sweeps.
JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
