# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. ``_pycore`` holds the reference fallback with the same API."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, fabs, M_PI, INFINITY

from .errors import NoConvergence

cnp.import_array()


def pssk_sum(const double[:, ::1] F, const double[:, ::1] G, double sigma):
    """Closed-form scale-space kernel value for two point arrays."""
    cdef Py_ssize_t i, j, n = F.shape[0], m = G.shape[0]
    cdef double acc = 0.0, inv = 1.0 / (8.0 * sigma)
    cdef double pb, pd, qb, qd, a1, a2, b1, b2
    with nogil:
        for i in range(n):
            pb = F[i, 0]
            pd = F[i, 1]
            for j in range(m):
                qb = G[j, 0]
                qd = G[j, 1]
                a1 = pb - qb
                a2 = pd - qd
                b1 = pb - qd
                b2 = pd - qb
                acc += exp(-(a1 * a1 + a2 * a2) * inv) - exp(-(b1 * b1 + b2 * b2) * inv)
    return acc / (8.0 * M_PI * sigma)


def hungarian(cost):
    """Minimum-cost perfect assignment on a square matrix.

    Returns ``(col_of_row, total)`` where ``total`` sums the chosen entries.
    """
    cdef double[:, ::1] a = np.ascontiguousarray(cost, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("cost matrix must be square")
    result = np.empty(n, dtype=np.intp)
    if n == 0:
        return result, 0.0
    cdef double[::1] u = np.zeros(n + 1)
    cdef double[::1] v = np.zeros(n + 1)
    cdef double[::1] minv = np.empty(n + 1)
    cdef Py_ssize_t[::1] p = np.zeros(n + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] way = np.zeros(n + 1, dtype=np.intp)
    cdef char[::1] used = np.zeros(n + 1, dtype=np.int8)
    cdef Py_ssize_t[::1] res = result
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double delta, cur, total = 0.0
    with nogil:
        for i in range(1, n + 1):
            p[0] = i
            j0 = 0
            for j in range(n + 1):
                minv[j] = INFINITY
                used[j] = 0
            while True:
                used[j0] = 1
                i0 = p[j0]
                delta = INFINITY
                j1 = 0
                for j in range(1, n + 1):
                    if not used[j]:
                        cur = a[i0 - 1, j - 1] - u[i0] - v[j]
                        if cur < minv[j]:
                            minv[j] = cur
                            way[j] = j0
                        if minv[j] < delta:
                            delta = minv[j]
                            j1 = j
                for j in range(n + 1):
                    if used[j]:
                        u[p[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
                j0 = j1
                if p[j0] == 0:
                    break
            while True:
                j1 = way[j0]
                p[j0] = p[j1]
                j0 = j1
                if j0 == 0:
                    break
        for j in range(1, n + 1):
            res[p[j] - 1] = j - 1
        for i in range(n):
            total += a[i, res[i]]
    return result, total


def jacobi_eigenvalues(A, double rtol=1e-12, int max_sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (unsorted)."""
    cdef double[:, ::1] a = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, r
    cdef double norm = 0.0, off, theta, t, c, s, tau, g, h, apq
    cdef int sweep = 0
    for p in range(n):
        for q in range(n):
            norm += a[p, q] * a[p, q]
    norm = sqrt(norm)
    while True:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if sqrt(off) <= rtol * norm:
            break
        if sweep >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    g = a[r, p]
                    h = a[r, q]
                    a[r, p] = g - s * (h + g * tau)
                    a[p, r] = a[r, p]
                    a[r, q] = h + s * (g - h * tau)
                    a[q, r] = a[r, q]
    return np.array([a[p, p] for p in range(n)], dtype=np.float64), sweep
