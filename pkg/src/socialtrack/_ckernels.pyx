# cython: language_level=3
"""Compiled kernels. Same contracts as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, isfinite, sqrt

cnp.import_array()

BACKEND = "cython"


def linear_assignment(cost):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.ascontiguousarray(cost, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("cost matrix must be 2-D")
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    if n == 0 or m == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy()
    if not np.all(np.isfinite(a)):
        raise ValueError("cost matrix must be finite")
    cdef bint transposed = n > m
    if transposed:
        a = np.ascontiguousarray(a.T)
        n, m = m, n

    cdef double[:, ::1] c = a
    cdef double[::1] u = np.zeros(n + 1)
    cdef double[::1] v = np.zeros(m + 1)
    cdef double[::1] minv = np.empty(m + 1)
    cdef cnp.int64_t[::1] p = np.zeros(m + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] way = np.zeros(m + 1, dtype=np.int64)
    cdef unsigned char[::1] used = np.zeros(m + 1, dtype=np.uint8)
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double delta, cur

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        for j in range(m + 1):
            minv[j] = INFINITY
            used[j] = 0
        while True:
            used[j0] = 1
            i0 = p[j0]
            delta = INFINITY
            j1 = 0
            for j in range(1, m + 1):
                if not used[j]:
                    cur = c[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    rows = np.empty(n, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] rv = rows
    cdef cnp.int64_t[::1] cv = cols
    cdef Py_ssize_t k = 0
    for j in range(1, m + 1):
        if p[j] != 0:
            rv[k] = p[j] - 1
            cv[k] = j - 1
            k += 1
    if transposed:
        rows, cols = cols, rows
    order = np.argsort(rows, kind="stable")
    return rows[order], cols[order]


def mahalanobis_matrix(proj_means, proj_covs, measurements):
    cdef double[:, ::1] mu = np.ascontiguousarray(proj_means, dtype=np.float64)
    cdef double[:, :, ::1] cov = np.ascontiguousarray(proj_covs, dtype=np.float64)
    cdef double[:, ::1] z = np.ascontiguousarray(measurements, dtype=np.float64)
    cdef Py_ssize_t n = mu.shape[0], m = z.shape[0]
    out = np.zeros((n, m))
    if n == 0 or m == 0:
        return out
    cdef Py_ssize_t k = mu.shape[1]
    cdef double[:, ::1] o = out
    cdef double[:, ::1] L = np.zeros((k, k))
    cdef double[::1] r = np.zeros(k)
    cdef Py_ssize_t t, d, row, col, q
    cdef double s, acc
    for t in range(n):
        # Cholesky of the projected covariance
        for row in range(k):
            for col in range(row + 1):
                s = cov[t, row, col]
                for q in range(col):
                    s -= L[row, q] * L[col, q]
                if row == col:
                    if not (s > 0.0) or not isfinite(s):
                        raise np.linalg.LinAlgError("Matrix is not positive definite")
                    L[row, row] = sqrt(s)
                else:
                    L[row, col] = s / L[col, col]
        for d in range(m):
            acc = 0.0
            for row in range(k):
                s = z[d, row] - mu[t, row]
                for q in range(row):
                    s -= L[row, q] * r[q]
                r[row] = s / L[row, row]
                acc += r[row] * r[row]
            o[t, d] = acc
    return out


cdef Py_ssize_t _find(cnp.int64_t[::1] parent, Py_ssize_t a) nogil:
    cdef Py_ssize_t root = a, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


def connected_components(adjacency):
    cdef cnp.uint8_t[:, ::1] adj = np.ascontiguousarray(adjacency, dtype=np.uint8)
    cdef Py_ssize_t n = adj.shape[0]
    parent_arr = np.arange(n, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = parent_arr
    cdef Py_ssize_t i, j, ra, rb
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j]:
                ra = _find(parent, i)
                rb = _find(parent, j)
                if ra != rb:
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
    labels = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] lab = labels
    remap = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] rm = remap
    cdef Py_ssize_t nxt_label = 0, root
    for i in range(n):
        root = _find(parent, i)
        if rm[root] < 0:
            rm[root] = nxt_label
            nxt_label += 1
        lab[i] = rm[root]
    return labels


def gated_cosine_distance(galleries, descriptors, mask):
    r_arr = np.ascontiguousarray(descriptors, dtype=np.float64)
    cdef double[:, ::1] r = r_arr
    cdef cnp.uint8_t[:, ::1] msk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t n = msk.shape[0], m = msk.shape[1]
    if len(galleries) != n:
        raise ValueError("one gallery per mask row required")
    out = np.full((n, m), 2.0)
    if n == 0 or m == 0:
        return out
    cdef double[:, ::1] o = out
    cdef double[:, ::1] g
    cdef Py_ssize_t cap, dim = r.shape[1]
    cdef Py_ssize_t i, j, c, d, tail = dim - dim % 4
    cdef double best, dot, dist, a0, a1, a2, a3
    cdef const double* gp
    cdef const double* rp
    for i in range(n):
        g = np.ascontiguousarray(galleries[i], dtype=np.float64)
        if g.shape[1] != dim:
            raise ValueError("gallery and descriptor dimensions differ")
        cap = g.shape[0]
        for j in range(m):
            if not msk[i, j]:
                continue
            rp = &r[j, 0]
            best = -INFINITY
            for c in range(cap):
                gp = &g[c, 0]
                # four independent accumulators break the add dependency chain
                a0 = a1 = a2 = a3 = 0.0
                for d in range(0, tail, 4):
                    a0 += gp[d] * rp[d]
                    a1 += gp[d + 1] * rp[d + 1]
                    a2 += gp[d + 2] * rp[d + 2]
                    a3 += gp[d + 3] * rp[d + 3]
                for d in range(tail, dim):
                    a0 += gp[d] * rp[d]
                dot = (a0 + a1) + (a2 + a3)
                if dot > best:
                    best = dot
            dist = 1.0 - best
            if dist < 0.0:
                dist = 0.0
            elif dist > 2.0:
                dist = 2.0
            o[i, j] = dist
    return out
