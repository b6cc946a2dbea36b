# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batched kernels: CZ-network state synthesis, subset purities,
cut negativities and a cyclic Jacobi eigensolver for Hermitian matrices.

Semantics mirror randcluster.kernels.fallback exactly; see that module for
the reference implementations and the layout conventions.
"""

from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

from ..subsets import mask_to_labels, smaller_side
from ..tolerances import (
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_TOL,
    NEGATIVITY_EIG_TOL,
    SCHMIDT_EIG_FLOOR,
)

BACKEND_NAME = "compiled"

cdef double OFF_TOL = JACOBI_OFF_TOL
cdef int MAX_SWEEPS = JACOBI_MAX_SWEEPS
cdef double EIG_FLOOR = SCHMIDT_EIG_FLOOR
cdef double PT_EIG_TOL = NEGATIVITY_EIG_TOL


# ---------------------------------------------------------------- eigensolver

cdef int _jacobi(double complex* a, int d) nogil:
    """In-place cyclic Jacobi on a Hermitian d x d matrix (row-major).

    On return the diagonal holds the eigenvalues, unsorted.  Returns the
    number of sweeps performed.
    """
    cdef int sweep, p, q, k
    cdef double off2, r, app, aqq, tau, t, c, s, npp, nqq
    cdef double complex z, w, wc, tkp, tkq, nkp, nkq
    if d <= 1:
        return 0
    for sweep in range(MAX_SWEEPS):
        off2 = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                z = a[p * d + q]
                off2 += z.real * z.real + z.imag * z.imag
        if sqrt(2.0 * off2) < OFF_TOL:
            return sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                z = a[p * d + q]
                r = abs(z)
                if r < 1e-300:
                    continue
                app = a[p * d + p].real
                aqq = a[q * d + q].real
                tau = (app - aqq) / (2.0 * r)
                if fabs(tau) > 1e8:
                    t = 1.0 / (2.0 * tau)
                elif tau >= 0.0:
                    t = 1.0 / (tau + sqrt(tau * tau + 1.0))
                else:
                    t = -1.0 / (-tau + sqrt(tau * tau + 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                w = z / r
                wc = w.conjugate()
                for k in range(d):
                    if k == p or k == q:
                        continue
                    tkp = a[k * d + p]
                    tkq = a[k * d + q]
                    nkp = c * tkp + s * wc * tkq
                    nkq = -s * w * tkp + c * tkq
                    a[k * d + p] = nkp
                    a[k * d + q] = nkq
                    a[p * d + k] = nkp.conjugate()
                    a[q * d + k] = nkq.conjugate()
                npp = c * c * app + s * s * aqq + 2.0 * c * s * r
                nqq = s * s * app + c * c * aqq - 2.0 * c * s * r
                a[p * d + p] = npp
                a[q * d + q] = nqq
                a[p * d + q] = 0.0
                a[q * d + p] = 0.0
    return MAX_SWEEPS


cdef double _schmidt_negativity(double complex* g, int d) nogil:
    """(sum_i sqrt(mu_i))**2 - 1 from a gram matrix, destroying it."""
    cdef int i
    cdef double mu, acc = 0.0
    _jacobi(g, d)
    for i in range(d):
        mu = g[i * d + i].real
        if mu > EIG_FLOOR:
            acc += sqrt(mu)
    acc = acc * acc - 1.0
    return acc if acc > 0.0 else 0.0


cdef double _pt_negativity(double complex* pt, int d) nogil:
    """-2 * sum of eigenvalues below -tol, clamped at 0; destroys input."""
    cdef int i
    cdef double lam, acc = 0.0
    _jacobi(pt, d)
    for i in range(d):
        lam = pt[i * d + i].real
        if lam < -PT_EIG_TOL:
            acc += lam
    acc = -2.0 * acc
    return acc if acc > 0.0 else 0.0


def jacobi_eigenvalues(h):
    """Ascending eigenvalues of a Hermitian matrix via cyclic Jacobi."""
    cdef object arr = np.array(h, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] mv = arr
    cdef int d = mv.shape[0]
    cdef double complex* buf = &mv[0, 0]
    if d > 1:
        with nogil:
            _jacobi(buf, d)
    return np.sort(np.ascontiguousarray(np.diagonal(arr)).real)


def hermitian_eigenvalues(h):
    return jacobi_eigenvalues(h)


# ------------------------------------------------------------ index plumbing

def _subset_tables(mask, n):
    """Global index offsets enumerating a subset and its complement.

    kidx[x] is the basis-index contribution of local kept pattern x (bit k
    of x sits on the k-th smallest kept qubit); tidx likewise for the traced
    qubits.  kidx[x] + tidx[t] scans the full register.
    """
    kept = [lab - 1 for lab in mask_to_labels(mask)]
    traced = [p for p in range(n) if not (mask >> p) & 1]
    kidx = np.zeros(1 << len(kept), dtype=np.int64)
    for k, p in enumerate(kept):
        kidx[((np.arange(1 << len(kept)) >> k) & 1) == 1] += 1 << p
    tidx = np.zeros(1 << len(traced), dtype=np.int64)
    for k, p in enumerate(traced):
        tidx[((np.arange(1 << len(traced)) >> k) & 1) == 1] += 1 << p
    return kidx, tidx


cdef void _gram(const double complex* a, const long long* kidx, int dk,
                const long long* tidx, int tk, double complex* g) nogil:
    cdef int i, j, t
    cdef double complex acc
    for i in range(dk):
        for j in range(i, dk):
            acc = 0.0
            for t in range(tk):
                acc = acc + a[kidx[i] + tidx[t]] * a[kidx[j] + tidx[t]].conjugate()
            g[i * dk + j] = acc
            g[j * dk + i] = acc.conjugate()


cdef double _purity(const double complex* a, const long long* kidx, int dk,
                    const long long* tidx, int tk) nogil:
    cdef int i, j, t
    cdef double complex acc
    cdef double out = 0.0, m2
    for i in range(dk):
        for j in range(i, dk):
            acc = 0.0
            for t in range(tk):
                acc = acc + a[kidx[i] + tidx[t]] * a[kidx[j] + tidx[t]].conjugate()
            m2 = acc.real * acc.real + acc.imag * acc.imag
            out += m2 if i == j else 2.0 * m2
    return out


# --------------------------------------------------------------- public API

def build_states(edge_bits, pairs_a, pairs_b, n):
    """Compiled twin of fallback.build_states; same contract."""
    cdef const unsigned char[:, ::1] eb = np.ascontiguousarray(edge_bits, dtype=np.uint8)
    cdef long long[::1] pm
    cdef int nblock = eb.shape[0]
    cdef int npairs = eb.shape[1]
    cdef int nq = n
    cdef long long dim = 1ll << nq
    cdef double base = 2.0 ** (-nq / 2.0)
    pa = np.asarray(pairs_a, dtype=np.int64)
    pb = np.asarray(pairs_b, dtype=np.int64)
    pm = (1 << pa) | (1 << pb)
    out = np.empty((nblock, dim), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef int b, r
    cdef long long x, mask
    with nogil:
        for b in range(nblock):
            for x in range(dim):
                ov[b, x] = base
            for r in range(npairs):
                if eb[b, r]:
                    mask = pm[r]
                    for x in range(dim):
                        if (x & mask) == mask:
                            ov[b, x] = -ov[b, x]
    return out


cdef _pack_tables(masks, n):
    """Flatten per-mask subset tables into contiguous buffers."""
    kparts, tparts, koff, toff, dks, tks = [], [], [], [], [], []
    ko = 0
    to = 0
    for mask in masks:
        kidx, tidx = _subset_tables(int(mask), n)
        kparts.append(kidx)
        tparts.append(tidx)
        koff.append(ko)
        toff.append(to)
        ko += kidx.size
        to += tidx.size
        dks.append(kidx.size)
        tks.append(tidx.size)
    kflat = np.concatenate(kparts) if kparts else np.zeros(0, dtype=np.int64)
    tflat = np.concatenate(tparts) if tparts else np.zeros(0, dtype=np.int64)
    return (kflat, tflat, np.asarray(koff, dtype=np.int64),
            np.asarray(toff, dtype=np.int64),
            np.asarray(dks, dtype=np.int64), np.asarray(tks, dtype=np.int64))


def subset_purities(amps, masks, n):
    """Compiled twin of fallback.subset_purities; same contract."""
    cdef double complex[:, ::1] av = np.ascontiguousarray(amps, dtype=np.complex128)
    canon = [smaller_side(int(m), n) for m in masks]
    kflat, tflat, koff, toff, dks, tks = _pack_tables(canon, n)
    cdef long long[::1] kv = kflat
    cdef long long[::1] tv = tflat
    cdef long long[::1] kov = koff
    cdef long long[::1] tov = toff
    cdef long long[::1] dkv = dks
    cdef long long[::1] tkv = tks
    cdef int nblock = av.shape[0]
    cdef int nmasks = len(canon)
    out = np.empty((nblock, nmasks), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef int b, k
    with nogil:
        for b in range(nblock):
            for k in range(nmasks):
                ov[b, k] = _purity(&av[b, 0], &kv[0] + kov[k], <int>dkv[k],
                                   &tv[0] + tov[k], <int>tkv[k])
    return out


def bipartition_negativities(amps, masks, n):
    """Compiled twin of fallback.bipartition_negativities; same contract."""
    cdef double complex[:, ::1] av = np.ascontiguousarray(amps, dtype=np.complex128)
    canon = [smaller_side(int(m), n) for m in masks]
    kflat, tflat, koff, toff, dks, tks = _pack_tables(canon, n)
    cdef long long[::1] kv = kflat
    cdef long long[::1] tv = tflat
    cdef long long[::1] kov = koff
    cdef long long[::1] tov = toff
    cdef long long[::1] dkv = dks
    cdef long long[::1] tkv = tks
    cdef int nblock = av.shape[0]
    cdef int nmasks = len(canon)
    cdef long long dmax = int(dks.max()) if nmasks else 1
    out = np.empty((nblock, nmasks), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double complex* g
    cdef int b, k
    with nogil:
        g = <double complex*>malloc(dmax * dmax * sizeof(double complex))
        if g == NULL:
            with gil:
                raise MemoryError
        for b in range(nblock):
            for k in range(nmasks):
                _gram(&av[b, 0], &kv[0] + kov[k], <int>dkv[k],
                      &tv[0] + tov[k], <int>tkv[k], g)
                ov[b, k] = _schmidt_negativity(g, <int>dkv[k])
        free(g)
    return out


def reduced_pt_negativities(amps, subset_mask, side_masks, n):
    """Compiled twin of fallback.reduced_pt_negativities; same contract."""
    cdef double complex[:, ::1] av = np.ascontiguousarray(amps, dtype=np.complex128)
    subset_mask = int(subset_mask)
    kept = [lab - 1 for lab in mask_to_labels(subset_mask)]
    cdef int s = len(kept)
    if s > 10:
        raise ValueError("reduced subset too large for dense PT (max 10 qubits)")
    local = {p: k for k, p in enumerate(kept)}
    sl = []
    for side in side_masks:
        side = int(side)
        if side & ~subset_mask:
            raise ValueError("side mask must lie inside the subset mask")
        acc = 0
        for p in mask_to_labels(side):
            acc |= 1 << local[p - 1]
        sl.append(acc)
    cdef long long[::1] slv = np.asarray(sl, dtype=np.int64)
    kidx, tidx = _subset_tables(subset_mask, n)
    cdef long long[::1] kv = kidx
    cdef long long[::1] tv = tidx
    cdef int dk = kidx.size
    cdef int tk = tidx.size
    cdef int nblock = av.shape[0]
    cdef int nsides = len(sl)
    out = np.empty((nblock, nsides), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double complex* rho
    cdef double complex* pt
    cdef int b, j, i, jj, i2, j2
    cdef long long lmask
    with nogil:
        rho = <double complex*>malloc(dk * dk * sizeof(double complex))
        pt = <double complex*>malloc(dk * dk * sizeof(double complex))
        if rho == NULL or pt == NULL:
            with gil:
                raise MemoryError
        for b in range(nblock):
            _gram(&av[b, 0], &kv[0], dk, &tv[0], tk, rho)
            for j in range(nsides):
                lmask = slv[j]
                for i in range(dk):
                    for jj in range(dk):
                        i2 = <int>((i & ~lmask) | (jj & lmask))
                        j2 = <int>((jj & ~lmask) | (i & lmask))
                        pt[i * dk + jj] = rho[i2 * dk + j2]
                ov[b, j] = _pt_negativity(pt, dk)
        free(rho)
        free(pt)
    return out
