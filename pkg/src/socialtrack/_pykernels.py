"""Pure-Python (numpy) implementations of the hot kernels.

These mirror ``_ckernels.pyx`` operation for operation so both backends
return identical results, including tie-breaking.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def linear_assignment(cost):
    """Minimum-cost assignment of ``min(n, m)`` pairs on a dense finite matrix.

    Shortest-augmenting-path Hungarian method with dual potentials,
    O(n^2 m). Returns ``(rows, cols)`` sorted by row.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost matrix must be 2-D")
    n, m = cost.shape
    if n == 0 or m == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    transposed = n > m
    if transposed:
        cost = cost.T
        n, m = m, n

    # 1-based bookkeeping; column 0 is the virtual root of each search
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, dtype=np.int64)
    way = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(m + 1, np.inf)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            used_idx = np.flatnonzero(used)
            u[p[used_idx]] += delta
            v[used_idx] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    cols = np.flatnonzero(p[1:]).astype(np.int64)
    rows = p[1:][cols] - 1
    if transposed:
        rows, cols = cols, rows
    order = np.argsort(rows, kind="stable")
    return rows[order].astype(np.int64), cols[order].astype(np.int64)


def mahalanobis_matrix(proj_means, proj_covs, measurements):
    """Squared Mahalanobis distance of every measurement to every projected track.

    ``proj_means`` is (n, k), ``proj_covs`` (n, k, k), ``measurements`` (m, k).
    Raises ``numpy.linalg.LinAlgError`` when a covariance is not positive definite.
    """
    proj_means = np.asarray(proj_means, dtype=np.float64)
    proj_covs = np.asarray(proj_covs, dtype=np.float64)
    measurements = np.asarray(measurements, dtype=np.float64)
    n, m = proj_means.shape[0], measurements.shape[0]
    if n == 0 or m == 0:
        return np.zeros((n, m))
    chol = np.linalg.cholesky(proj_covs)
    # residuals: (n, k, m)
    resid = measurements.T[None, :, :] - proj_means[:, :, None]
    z = _forward_substitution(chol, resid)
    return np.einsum("nkm,nkm->nm", z, z)


def _forward_substitution(lower, rhs):
    k = lower.shape[-1]
    z = np.empty_like(rhs)
    for r in range(k):
        acc = rhs[:, r, :]
        for c in range(r):
            acc = acc - lower[:, r, c, None] * z[:, c, :]
        z[:, r, :] = acc / lower[:, r, r, None]
    return z


def connected_components(adjacency):
    """Label the connected components of a symmetric boolean adjacency matrix.

    Labels are numbered 0, 1, ... in order of each component's smallest vertex.
    """
    adjacency = np.asarray(adjacency, dtype=bool)
    n = adjacency.shape[0]
    parent = list(range(n))

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    ii, jj = np.nonzero(np.triu(adjacency, 1))
    for a, b in zip(ii.tolist(), jj.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the smaller index as root
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    labels = np.empty(n, dtype=np.int64)
    seen: dict[int, int] = {}
    for i in range(n):
        root = find(i)
        if root not in seen:
            seen[root] = len(seen)
        labels[i] = seen[root]
    return labels


def gated_cosine_distance(galleries, descriptors, mask):
    """Smallest cosine distance ``1 - max_g g.r`` for pairs where ``mask`` is set.

    ``galleries`` holds one (capacity_i, D) array per mask row, ``descriptors``
    is (m, D) and ``mask`` (n, m). Unmasked pairs get 2.0, the largest
    possible cosine distance.
    """
    descriptors = np.asarray(descriptors, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if len(galleries) != mask.shape[0]:
        raise ValueError("one gallery per mask row required")
    out = np.full(mask.shape, 2.0)
    for i in np.flatnonzero(mask.any(axis=1)):
        g = np.asarray(galleries[i], dtype=np.float64)
        if g.shape[1] != descriptors.shape[1]:
            raise ValueError("gallery and descriptor dimensions differ")
        cols = np.flatnonzero(mask[i])
        out[i, cols] = np.clip(1.0 - (g @ descriptors[cols].T).max(axis=0), 0.0, 2.0)
    return out
