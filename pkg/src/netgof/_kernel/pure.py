"""Numpy fallback for the sampling kernel.

Mirrors ``_sampler.pyx`` exactly: the node selection for row ``r`` is the
partial Fisher-Yates shuffle driven by ``j = i + floor(u[r, i] * (n - i))``
(clamped to the valid range), so both backends return identical counts for
identical uniform blocks.  The shuffle is vectorised across rows; the edge
count is a masked reduction over the edge arrays.
"""

import numpy as np


def edge_counts(indptr, indices, edge_u, edge_v, k, uniforms):
    """Induced edge count of one k-node sample per row of ``uniforms``."""
    n = indptr.shape[0] - 1
    if k > n:
        raise ValueError("sample size exceeds node count")
    rows = uniforms.shape[0]
    if rows == 0:
        return np.zeros(0, dtype=np.int64)

    perm = np.broadcast_to(np.arange(n, dtype=np.int64), (rows, n)).copy()
    ridx = np.arange(rows)
    for i in range(k):
        f = (uniforms[:, i] * (n - i)).astype(np.int64)
        np.minimum(f, n - i - 1, out=f)
        j = f + i
        tmp = perm[ridx, j].copy()
        perm[ridx, j] = perm[:, i]
        perm[:, i] = tmp

    member = np.zeros((rows, n), dtype=bool)
    member[ridx[:, None], perm[:, :k]] = True
    if edge_u.shape[0] == 0:
        return np.zeros(rows, dtype=np.int64)
    both = member[:, edge_u] & member[:, edge_v]
    return both.sum(axis=1).astype(np.int64)
