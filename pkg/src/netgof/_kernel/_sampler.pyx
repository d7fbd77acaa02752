# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sampling kernel.

Consumes a pre-drawn block of uniforms, one row per subgraph sample, and
returns the induced edge count for each sample.  The selection algorithm
(partial Fisher-Yates driven by ``j = i + floor(u * (n - i))``, clamped)
must stay in lockstep with the numpy fallback in ``pure.py``: both paths
have to produce identical counts from identical uniforms.
"""

import numpy as np


def edge_counts(const long long[::1] indptr, const int[::1] indices,
                const int[::1] edge_u, const int[::1] edge_v,
                Py_ssize_t k, const double[:, ::1] uniforms):
    """Induced edge count of one k-node sample per row of ``uniforms``."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t rows = uniforms.shape[0]
    cdef Py_ssize_t r, i, u, v, t, tmp
    cdef long long j, f, count
    out_arr = np.zeros(rows, dtype=np.int64)
    perm_arr = np.arange(n, dtype=np.int64)
    stamp_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long[::1] perm = perm_arr
    cdef long long[::1] stamp = stamp_arr

    if k > n:
        raise ValueError("sample size exceeds node count")

    with nogil:
        for r in range(rows):
            for i in range(k):
                f = <long long>(uniforms[r, i] * (n - i))
                if f > n - i - 1:
                    f = n - i - 1
                j = i + f
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
            for i in range(k):
                stamp[perm[i]] = r + 1
            count = 0
            for i in range(k):
                u = perm[i]
                for t in range(indptr[u], indptr[u + 1]):
                    v = indices[t]
                    if v > u and stamp[v] == r + 1:
                        count += 1
            out[r] = count
            # undo the swaps so the next row starts from the identity
            for i in range(k - 1, -1, -1):
                f = <long long>(uniforms[r, i] * (n - i))
                if f > n - i - 1:
                    f = n - i - 1
                j = i + f
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
    return out_arr
