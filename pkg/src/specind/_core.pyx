# cython: language_level=3
"""Compiled hot loops. Mirrors the API of ``specind._fallback`` exactly."""
import numpy as np

cimport cython
from libc.math cimport fabs, sqrt
from libc.stdint cimport int64_t, uint64_t


def jacobi_eigh(double[:, ::1] a_in, double tol=1e-13, int max_sweeps=100):
    """Cyclic Jacobi on a symmetric matrix.

    Returns (eigenvalues, eigenvectors as columns, sweeps used, final off-norm).
    Eigenvalues come back unsorted.
    """
    cdef Py_ssize_t n = a_in.shape[0]
    cdef Py_ssize_t i, j, k, p, q
    cdef double[:, ::1] a = np.array(a_in, dtype=np.float64, copy=True)
    cdef double[:, ::1] v = np.eye(n, dtype=np.float64)
    cdef double off, frob, apq, app, aqq, theta, t, c, s, x, y, thresh
    cdef int sweep = 0

    frob = 0.0
    for i in range(n):
        for j in range(n):
            frob += a[i, j] * a[i, j]
    thresh = tol * max(1.0, sqrt(frob))

    while True:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        off = sqrt(off)
        if off <= thresh or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * y
                    a[k, q] = s * x + c * y
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * y
                    a[q, k] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - s * y
                    v[k, q] = s * x + c * y

    w = np.empty(n, dtype=np.float64)
    cdef double[::1] wv = w
    for i in range(n):
        wv[i] = a[i, i]
    return w, np.asarray(v), sweep, off


def glauber_hardcore(const int64_t[::1] nbr, int64_t state, const int64_t[::1] verts,
                     const double[::1] u, double p_occ, int64_t[::1] out):
    """Run hard-core Glauber steps on a bitmask state; writes each new state to ``out``."""
    cdef Py_ssize_t t, T = verts.shape[0]
    cdef int64_t v, bit
    for t in range(T):
        v = verts[t]
        bit = (<int64_t>1) << v
        if u[t] < p_occ:
            if (state & nbr[v]) == 0:
                state |= bit
        else:
            state &= ~bit
        out[t] = state
    return state


cdef inline int popcount64(uint64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef inline int lowbit_index(uint64_t x) nogil:
    cdef int i = 0
    while (x & 1) == 0:
        x >>= 1
        i += 1
    return i


cdef void _accumulate(const int64_t[::1] nbr, uint64_t subset, int64_t[:, ::1] counts) nogil:
    cdef uint64_t todo = subset, comp, frontier, grow, b
    cdef int u, size
    while todo:
        u = lowbit_index(todo)
        comp = (<uint64_t>1) << u
        frontier = comp
        while frontier:
            grow = 0
            b = frontier
            while b:
                u = lowbit_index(b)
                b &= b - 1
                grow |= <uint64_t>nbr[u]
            frontier = grow & subset & ~comp
            comp |= frontier
        size = popcount64(comp)
        todo &= ~comp
        b = comp
        while b:
            u = lowbit_index(b)
            b &= b - 1
            counts[u, size] += 1


def shatter_counts(const int64_t[::1] nbr, int n, int m):
    """Exhaustive over all m-subsets: counts[v, k] = #subsets with v in S and |T_v| = k."""
    counts = np.zeros((n, m + 1), dtype=np.int64)
    cdef int64_t[:, ::1] cv = counts
    cdef uint64_t subset, c, r, limit
    cdef int64_t total = 0
    if m == 0:
        return counts, 1
    subset = ((<uint64_t>1) << m) - 1
    limit = (<uint64_t>1) << n
    while subset < limit:
        _accumulate(nbr, subset, cv)
        total += 1
        # next subset with the same popcount (Gosper)
        c = subset & (~subset + 1)
        r = subset + c
        subset = (((r ^ subset) >> 2) // c) | r
    return counts, total


def shatter_counts_masks(const int64_t[::1] nbr, int n, int m, const int64_t[::1] masks):
    counts = np.zeros((n, m + 1), dtype=np.int64)
    cdef int64_t[:, ::1] cv = counts
    cdef Py_ssize_t i
    for i in range(masks.shape[0]):
        _accumulate(nbr, <uint64_t>masks[i], cv)
    return counts
